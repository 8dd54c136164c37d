#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "oamtilt/field.hpp"

namespace oamtilt {

/// Shortest round-trip decimal representation, "." separator, no locale.
std::string format_double(double v);

/// Locale-independent full-string parse; throws ConfigError naming `what`.
double parse_double(std::string_view text, std::string_view what);
long parse_int(std::string_view text, std::string_view what);

/// `key = value` lines, `#` starts a comment, blank lines ignored.
std::map<std::string, std::string> parse_key_values(std::string_view text);
std::map<std::string, std::string> read_config_file(const std::string& path);

// Portable graymap, binary P5, maxval 65535, big-endian samples, top row
// first (top = largest y).

enum class PgmScale {
  linear_max,  // [0, max] -> [0, 65535]
  phase,       // [-pi, pi] -> [0, 65535]
};

struct PgmImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint16_t> pixels;  // row-major, top row first
};

std::string encode_pgm(const RealField& field, PgmScale scale);
PgmImage decode_pgm(std::string_view bytes);

/// Pixel data back on a grid (unit pitch, centered, bottom row = iy 0),
/// values scaled to [0, 1].
RealField pgm_to_field(const PgmImage& img);

/// Decoded phase image as a unit-modulus complex field.
ComplexField pgm_phase_to_field(const PgmImage& img);

std::string read_file(const std::string& path);
/// "-" writes to `stdout_stream`.
void write_output(const std::string& path, std::string_view bytes, std::ostream& stdout_stream);

}  // namespace oamtilt
