#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("forster_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = std::string(FORSTER_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// CSV body without the '#' metadata lines, which name the config path.
std::string body(const fs::path& p) {
  std::ifstream in(p);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) != 0) out += line + "\n";
  }
  return out;
}

}  // namespace

TEST(Cli, UsageAndConfigErrorsExitTwo) {
  const auto dir = scratch("errors");
  std::ofstream(dir / "empty.cfg").close();
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("run " + (dir / "empty.cfg").string()), 2);
  EXPECT_EQ(run("run " + (dir / "missing.cfg").string()), 2);
  EXPECT_EQ(run("reproduce fig99 --out " + dir.string()), 2);
}

TEST(Cli, PhysicsErrorExitsOne) {
  const auto dir = scratch("physics");
  std::ofstream(dir / "bad.cfg") << "experiment = fidelity\nT_RF = -1 us\noutput_dir = " << (dir / "out").string() << "\n";
  EXPECT_EQ(run("run " + (dir / "bad.cfg").string()), 1);
}

TEST(Cli, RunWritesSelfDescribingBundleDeterministically) {
  const auto dir = scratch("bundle");
  for (const char* sub : {"a", "b"}) {
    std::ofstream(dir / (std::string(sub) + ".cfg"))
        << "experiment = floquet-map\nF_RF = 0.05 V/cm\nnu = 50 MHz\noutput_dir = " << (dir / sub).string() << "\n";
    ASSERT_EQ(run("run " + (dir / (std::string(sub) + ".cfg")).string()), 0);
    for (const char* f : {"config.resolved", "summary.txt", "stark_map.csv", "crossings.csv", "sidebands.csv"}) {
      EXPECT_TRUE(fs::exists(dir / sub / f)) << f;
    }
  }
  for (const char* f : {"stark_map.csv", "crossings.csv", "sidebands.csv"}) {
    EXPECT_EQ(body(dir / "a" / f), body(dir / "b" / f)) << f;
  }
  EXPECT_NE(slurp(dir / "a" / "config.resolved").find("T_int = "), std::string::npos);
}

TEST(Cli, GateRunDeterministicCsv) {
  const auto dir = scratch("gate");
  for (const char* sub : {"a", "b"}) {
    std::ofstream(dir / (std::string(sub) + ".cfg"))
        << "experiment = gate\nnu = 49.8 MHz\nsample_step = 10 ns\noutput_dir = " << (dir / sub).string() << "\n";
    ASSERT_EQ(run("run " + (dir / (std::string(sub) + ".cfg")).string()), 0);
  }
  for (const char* f : {"fidelity.csv", "gate_input_111.csv", "gate_input_011.csv", "toffoli_trace.csv", "gate_report.txt"}) {
    ASSERT_TRUE(fs::exists(dir / "a" / f)) << f;
    EXPECT_EQ(body(dir / "a" / f), body(dir / "b" / f)) << f;
  }
  EXPECT_NE(slurp(dir / "a" / "summary.txt").find("average fidelity"), std::string::npos);
}
