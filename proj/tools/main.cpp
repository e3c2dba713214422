#include <CLI11.hpp>

#include <iostream>

#include "forster/errors.hpp"
#include "forster/experiments.hpp"

namespace {

int run_config(const std::string& path) {
  const auto cfg = forster::RunConfig::load(path);
  const auto dir_key = cfg.text("output_dir");
  const std::filesystem::path dir = dir_key == "default" ? forster::default_output_dir() : std::filesystem::path(dir_key);
  const auto out = forster::run_experiment(cfg, dir);
  for (const auto& line : out.summary) std::cout << line << "\n";
  std::cout << "output written to " << out.dir.string() << "\n";
  return 0;
}

int run_reproduce(const std::string& fig, const std::string& dir) {
  const auto r = forster::reproduce(fig, dir.empty() ? forster::default_output_dir() : std::filesystem::path(dir));
  for (const auto& line : r.output.summary) std::cout << line << "\n";
  for (const auto& c : r.checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " = " << c.value << " expected [" << c.low << ", "
              << c.high << "]\n";
  }
  std::cout << "output written to " << r.output.dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-body Forster resonance gate simulator"};
  app.require_subcommand(1);
  std::string config, figure, out_dir;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config, "Config file")->required();
  auto* rep = app.add_subcommand("reproduce", "Regenerate the data behind a figure or table");
  rep->add_option("figure", figure, "fig1c | fig2 | fig4 | fig5 | fig6 | table1")->required();
  rep->add_option("--out", out_dir, "Output directory");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (*run) return run_config(config);
    return run_reproduce(figure, out_dir);
  } catch (const forster::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const forster::PhysicsError& e) {
    std::cerr << "physics error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
