// oamtilt: spectra, images and Larmor traces for tilted-retrieval OAM beams.
#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <map>
#include <string>

#include "oamtilt/commands.hpp"
#include "oamtilt/errors.hpp"
#include "oamtilt/io.hpp"

namespace {

std::string flag_name(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

struct Subcommand {
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;
};

void add_value_flags(Subcommand& sub) {
  for (const auto& key : oamtilt::RunConfig::keys()) {
    if (key == "fig4") continue;
    sub.app->add_option_function<std::string>(
        flag_name(key), [&sub, key](const std::string& v) { sub.values[key] = v; },
        "override '" + key + "'");
  }
}

int exit_code(const std::exception& e) {
  if (dynamic_cast<const oamtilt::IoError*>(&e)) return 4;
  if (dynamic_cast<const oamtilt::NumericalError*>(&e)) return 3;
  if (dynamic_cast<const oamtilt::Error*>(&e)) return 2;
  return 3;
}

std::string one_line(std::string msg) {
  std::replace(msg.begin(), msg.end(), '\n', ' ');
  return msg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OAM tilted-retrieval spectra, diagnostics images and Larmor traces"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key = value run config; flags override it");

  std::map<std::string, Subcommand> subs;
  const std::map<std::string, std::string> descriptions = {
      {"spectrum", "LG spectrum of the retrieved beam (CSV)"},
      {"fig4", "spectrum sweep over l in 0..3 and theta in 5..20 deg (CSV)"},
      {"render", "intensity, phase, tilted_lens or spiral image (PGM)"},
      {"larmor", "Larmor-modulated retrieval intensity (CSV)"},
      {"selftest", "orthonormality and quadrature-oracle checks"}};
  for (const auto& [name, desc] : descriptions) {
    Subcommand& sub = subs[name];
    sub.app = app.add_subcommand(name, desc);
    sub.app->fallthrough();
    if (name != "selftest") add_value_flags(sub);
  }
  bool fig4_flag = false;
  subs["spectrum"].app->add_flag("--fig4", fig4_flag, "run the 4x4 sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ERROR: " << one_line(e.what()) << '\n';
    return 2;
  }

  try {
    oamtilt::RunConfig cfg;
    if (!config_path.empty()) cfg.apply(oamtilt::read_config_file(config_path));
    const std::string name = app.get_subcommands().front()->get_name();
    cfg.apply(subs[name].values);

    if (name == "selftest") {
      return oamtilt::run_selftest(std::cout) ? 0 : 3;
    }
    if (name == "spectrum" || name == "fig4") {
      if (name == "fig4" || fig4_flag) cfg.fig4 = true;
      const std::string csv = oamtilt::cmd_spectrum(cfg);
      oamtilt::write_output(cfg.out, csv, std::cout);
    } else if (name == "render") {
      const std::string pgm = oamtilt::cmd_render(cfg);
      oamtilt::write_output(cfg.out, pgm, std::cout);
    } else if (name == "larmor") {
      const oamtilt::LarmorRun run = oamtilt::cmd_larmor(cfg);
      oamtilt::write_output(cfg.out, run.csv, std::cout);
      (cfg.out == "-" ? std::cerr : std::cout) << run.summary << '\n';
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "ERROR: " << one_line(e.what()) << '\n';
    return exit_code(e);
  }
}
