#include "oamtilt/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "oamtilt/errors.hpp"

namespace oamtilt {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

double parse_double(std::string_view text, std::string_view what) {
  const std::string_view t = trim(text);
  double v = 0.0;
  const char* begin = t.data();
  // from_chars rejects a leading '+'.
  if (!t.empty() && t.front() == '+') ++begin;
  const auto res = std::from_chars(begin, t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ConfigError("invalid number for " + std::string(what) + ": '" + std::string(text) +
                      "'");
  }
  return v;
}

long parse_int(std::string_view text, std::string_view what) {
  const std::string_view t = trim(text);
  long v = 0;
  const char* begin = t.data();
  if (!t.empty() && t.front() == '+') ++begin;
  const auto res = std::from_chars(begin, t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ConfigError("invalid integer for " + std::string(what) + ": '" + std::string(text) +
                      "'");
  }
  return v;
}

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    }
    out[key] = value;
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  return parse_key_values(read_file(path));
}

void write_output(const std::string& path, std::string_view bytes, std::ostream& stdout_stream) {
  if (path == "-") {
    stdout_stream.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    stdout_stream.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::string encode_pgm(const RealField& field, PgmScale scale) {
  const GridSpec& g = field.grid();
  double top = 0.0;
  if (scale == PgmScale::linear_max) {
    for (double v : field.samples()) top = std::max(top, v);
  }
  std::string out = "P5\n" + std::to_string(g.nx) + " " + std::to_string(g.ny) + "\n65535\n";
  out.reserve(out.size() + 2 * g.size());
  for (std::size_t row = 0; row < g.ny; ++row) {
    const std::size_t iy = g.ny - 1 - row;
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const double v = field.at(ix, iy);
      double unit = 0.0;
      if (scale == PgmScale::linear_max) {
        unit = top > 0.0 ? v / top : 0.0;
      } else {
        unit = (v + std::numbers::pi) / (2.0 * std::numbers::pi);
      }
      const auto q = static_cast<std::uint16_t>(std::lround(std::clamp(unit, 0.0, 1.0) * 65535.0));
      out.push_back(static_cast<char>(q >> 8));
      out.push_back(static_cast<char>(q & 0xFF));
    }
  }
  return out;
}

PgmImage decode_pgm(std::string_view bytes) {
  std::size_t pos = 0;
  const auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  const auto token = [&] {
    skip_space();
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    return bytes.substr(start, pos - start);
  };
  if (token() != "P5") throw IoError("not a binary PGM (missing P5 magic)");
  PgmImage img;
  img.width = static_cast<std::size_t>(parse_int(token(), "PGM width"));
  img.height = static_cast<std::size_t>(parse_int(token(), "PGM height"));
  const long maxval = parse_int(token(), "PGM maxval");
  if (maxval != 65535) throw IoError("only 16-bit PGM (maxval 65535) is supported");
  ++pos;  // single whitespace before the raster
  const std::size_t n = img.width * img.height;
  if (bytes.size() < pos + 2 * n) throw IoError("truncated PGM raster");
  img.pixels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto hi = static_cast<unsigned char>(bytes[pos + 2 * i]);
    const auto lo = static_cast<unsigned char>(bytes[pos + 2 * i + 1]);
    img.pixels[i] = static_cast<std::uint16_t>((hi << 8) | lo);
  }
  return img;
}

RealField pgm_to_field(const PgmImage& img) {
  RealField out(GridSpec(img.width, img.height, 1.0, 1.0));
  for (std::size_t row = 0; row < img.height; ++row) {
    for (std::size_t ix = 0; ix < img.width; ++ix) {
      out.at(ix, img.height - 1 - row) = img.pixels[row * img.width + ix] / 65535.0;
    }
  }
  return out;
}

ComplexField pgm_phase_to_field(const PgmImage& img) {
  const RealField unit = pgm_to_field(img);
  ComplexField out(unit.grid());
  for (std::size_t i = 0; i < unit.samples().size(); ++i) {
    const double phi = unit.samples()[i] * 2.0 * std::numbers::pi - std::numbers::pi;
    out.samples()[i] = std::polar(1.0, phi);
  }
  return out;
}

}  // namespace oamtilt
