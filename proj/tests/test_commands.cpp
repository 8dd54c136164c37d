#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oamtilt/commands.hpp"
#include "oamtilt/errors.hpp"
#include "oamtilt/io.hpp"

using namespace oamtilt;

namespace {

struct Row {
  double theta;
  int ell_in, ell_prime;
  double abs, abs_maxnorm, power_frac;
};

std::vector<Row> parse_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  REQUIRE(line == "theta_deg,ell_in,ell_prime,re,im,abs,abs_maxnorm,power_frac");
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    REQUIRE(f.size() == 8);
    rows.push_back({parse_double(f[0], "theta"), static_cast<int>(parse_int(f[1], "l")),
                    static_cast<int>(parse_int(f[2], "lp")), parse_double(f[5], "abs"),
                    parse_double(f[6], "maxnorm"), parse_double(f[7], "pf")});
  }
  return rows;
}

RunConfig config(std::map<std::string, std::string> kv) {
  RunConfig cfg;
  cfg.apply(kv);
  return cfg;
}

}  // namespace

TEST_CASE("config keys, aliases and overrides") {
  RunConfig cfg;
  cfg.apply(parse_key_values("theta = 10\nell_in = 3\nwaist-ratio = 1.2\nt_s = 4\n"));
  CHECK(cfg.theta_deg == 10.0);
  CHECK(cfg.ell == 3);
  CHECK(cfg.waist_ratio == 1.2);
  CHECK(cfg.ts_us == 4.0);
  cfg.set("basis_waist", "auto");
  CHECK_FALSE(cfg.basis_waist_um);
  cfg.set("basis_waist", "200");
  CHECK(*cfg.basis_waist_um == 200.0);
  CHECK_THROWS_AS(cfg.set("colour", "red"), ConfigError);
  CHECK_THROWS_AS(cfg.set("grid", "-4"), ConfigError);
  CHECK_THROWS_AS(cfg.set("fig4", "maybe"), ConfigError);
  for (const auto& key : RunConfig::keys()) CHECK(key.find('-') == std::string::npos);
}

TEST_CASE("unit conversion at the boundary") {
  const RunConfig cfg = config({{"w0", "300"}, {"gamma", "0.1"}, {"ts", "4"}, {"theta", "2"}});
  CHECK(cfg.beam_params().w0 == doctest::Approx(300e-6));
  CHECK(cfg.retrieval().gamma == doctest::Approx(1e5));
  CHECK(cfg.retrieval().storage_time == doctest::Approx(4e-6));
  CHECK(cfg.tilt().theta == doctest::Approx(2 * std::acos(-1.0) / 180));
  CHECK(cfg.larmor().field_gauss == 0.3);
  CHECK(cfg.lrange(2).lo == -2);
  CHECK(cfg.lrange(2).hi == 12);
}

TEST_CASE("validation happens before any work") {
  CHECK_THROWS_AS(config({{"theta", "90"}}).validate(), DomainError);
  CHECK_THROWS_AS(config({{"waist_ratio", "0"}}).validate(), DomainError);
  CHECK_THROWS_AS(config({{"B", "-1"}}).validate(), DomainError);
  CHECK_THROWS_AS(config({{"what", "hologram"}}).validate(), ConfigError);
  CHECK_THROWS_AS(config({{"beam", "reference"}}).validate(), ConfigError);
  CHECK_THROWS_AS(config({{"lmin", "5"}, {"lmax", "2"}}).validate(), DomainError);
  CHECK_THROWS_AS(config({{"ell", "20"}}).validate(), DomainError);
  CHECK_THROWS_AS(config({{"grid", "8"}}).validate(), ConfigError);
  CHECK_THROWS_AS(config({{"dt", "0"}}).validate(), ConfigError);
  CHECK_NOTHROW(RunConfig{}.validate());
}

TEST_CASE("spectrum CSV groups sum to unit power") {
  const std::vector<Row> rows = parse_csv(cmd_spectrum(config({{"ell", "2"}, {"theta", "2"}})));
  CHECK(rows.size() == 15);
  double pf = 0.0, outside = 0.0, mx = 0.0;
  for (const Row& r : rows) {
    pf += r.power_frac;
    if (r.ell_prime != 2) outside += r.power_frac;
    mx = std::max(mx, r.abs_maxnorm);
  }
  CHECK(std::abs(pf - 1.0) < 1e-9);
  CHECK(outside < 1e-3);
  CHECK(mx == 1.0);
}

TEST_CASE("identity run has a single dominant row") {
  const std::vector<Row> rows = parse_csv(cmd_spectrum(config({{"ell", "0"}, {"theta", "0"}})));
  int dominant = 0;
  for (const Row& r : rows) {
    if (r.abs_maxnorm > 1e-6) {
      ++dominant;
      CHECK(r.ell_prime == 0);
      CHECK(std::abs(r.power_frac - 1.0) < 1e-9);
    }
  }
  CHECK(dominant == 1);
}

TEST_CASE("sweep: 16 ordered groups, thread-count independent") {
  setenv("OAMTILT_THREADS", "1", 1);
  CHECK(worker_count() == 1);
  const std::string serial = cmd_spectrum(config({{"fig4", "1"}}));
  setenv("OAMTILT_THREADS", "4", 1);
  const std::string parallel = cmd_spectrum(config({{"fig4", "1"}}));
  unsetenv("OAMTILT_THREADS");
  CHECK(serial == parallel);

  const std::vector<Row> rows = parse_csv(serial);
  std::vector<std::pair<double, int>> groups;
  std::map<std::pair<double, int>, double> pf;
  for (const Row& r : rows) {
    const auto key = std::make_pair(r.theta, r.ell_in);
    if (groups.empty() || groups.back() != key) groups.push_back(key);
    pf[key] += r.power_frac;
  }
  REQUIRE(groups.size() == 16);
  std::size_t k = 0;
  for (double theta : {5.0, 10.0, 15.0, 20.0}) {
    for (int ell = 0; ell <= 3; ++ell) CHECK(groups[k++] == std::make_pair(theta, ell));
  }
  for (const auto& [key, sum] : pf) CHECK(std::abs(sum - 1.0) < 1e-9);
}

TEST_CASE("thread count from the environment") {
  setenv("OAMTILT_THREADS", "0", 1);
  CHECK(worker_count() >= 1);
  setenv("OAMTILT_THREADS", "x", 1);
  CHECK_THROWS_AS(worker_count(), ConfigError);
  unsetenv("OAMTILT_THREADS");
}

TEST_CASE("outputs are byte-identical across runs") {
  const RunConfig s = config({{"ell", "3"}, {"theta", "10"}});
  CHECK(cmd_spectrum(s) == cmd_spectrum(s));
  const RunConfig r = config({{"what", "tilted_lens"}, {"ell", "2"}, {"grid", "256"}});
  CHECK(cmd_render(r) == cmd_render(r));
  CHECK(cmd_larmor(RunConfig{}).csv == cmd_larmor(RunConfig{}).csv);
}

TEST_CASE("rendered images decode to the expected diagnostics") {
  const RealField spiral =
      pgm_to_field(decode_pgm(cmd_render(config({{"what", "spiral"}, {"ell", "3"}}))));
  CHECK(count_spiral_arms(spiral) == 3);

  const RealField lens =
      pgm_to_field(decode_pgm(cmd_render(config({{"what", "tilted_lens"}, {"ell", "1"}}))));
  const FringeCount fc = count_fringe_minima(lens);
  CHECK(fc.count == 1);
  CHECK(fc.orientation == 1);

  const ComplexField ph =
      pgm_phase_to_field(decode_pgm(cmd_render(config({{"what", "phase"}, {"ell", "2"}}))));
  CHECK(winding_number(ph, 40.0) == 2);
  CHECK(winding_number(ph, 120.0) == 2);

  const RealField in = pgm_to_field(decode_pgm(cmd_render(RunConfig{})));
  CHECK(in.grid().nx == 512);

  const RealField ret = pgm_to_field(decode_pgm(
      cmd_render(config({{"what", "tilted_lens"}, {"ell", "2"}, {"beam", "retrieved"}}))));
  const FringeCount rc = count_fringe_minima(ret);
  CHECK(rc.count == 2);
  CHECK(rc.orientation == -1);

  CHECK_THROWS_AS(cmd_render(config({{"what", "spiral"}, {"beam", "retrieved"}})), ConfigError);
}

TEST_CASE("Larmor command") {
  const LarmorRun run = cmd_larmor(RunConfig{});
  CHECK(run.csv.rfind("# B_gauss=0.3 g_factor=0.25 delta_m=2 gamma_per_us=0\nt_us,intensity\n", 0) == 0);
  const auto pos = run.summary.find("period_us=");
  REQUIRE(pos == 0);
  const double period = parse_double(run.summary.substr(10, run.summary.find(' ') - 10), "p");
  CHECK(std::abs(period - 4.763) < 0.01);

  CHECK(cmd_larmor(config({{"B", "0"}})).summary == "oscillation=none");
  CHECK(cmd_larmor(config({{"tmax", "2"}})).summary.rfind("period_us=undetermined", 0) == 0);
  std::istringstream in(run.csv);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) ++n;
  CHECK(n == 2 + 3001);
}

TEST_CASE("selftest passes") {
  std::ostringstream log;
  CHECK(run_selftest(log));
  CHECK(log.str().find("[FAIL]") == std::string::npos);
}
