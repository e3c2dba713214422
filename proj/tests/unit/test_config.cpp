#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "forster/config.hpp"
#include "forster/errors.hpp"

using namespace forster;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return RunConfig::parse(in, "test.cfg");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, UnitsConverted) {
  const auto c = parse("experiment = gate\nR = 12000 nm\nF_S = 176.3 mV/cm\nnu = 0.05 GHz\nT_RF = 1270 ns\n"
                       "phi_target = 0.5 pi\ntemperature = 4 K\n");
  EXPECT_NEAR(c.number("R"), 12.0, 1e-12);
  EXPECT_NEAR(c.number("F_S"), 0.1763, 1e-12);
  EXPECT_NEAR(c.number("nu"), 50.0, 1e-12);
  EXPECT_NEAR(c.number("T_RF"), 1.27, 1e-12);
  EXPECT_NEAR(c.number("phi_target"), M_PI / 2, 1e-12);
  EXPECT_EQ(c.text("experiment"), "gate");
  EXPECT_NEAR(c.number("T_ex"), 0.02, 1e-15);
  EXPECT_FALSE(c.explicitly_set("T_ex"));
}

TEST(Config, ListsAndComments) {
  const auto c = parse("# comment\nexperiment = optimize  # trailing\nphi_targets = 0.25 1 pi\ntemperatures = 300 4 K\n");
  const auto phis = c.numbers("phi_targets");
  ASSERT_EQ(phis.size(), 2u);
  EXPECT_NEAR(phis[1], M_PI, 1e-15);
  EXPECT_EQ(c.numbers("temperatures").size(), 2u);
}

TEST(Config, ErrorsCarryLineAndColumn) {
  EXPECT_NE(error_of("experiment = gate\nbogus = 1\n").find("test.cfg:2:1"), std::string::npos);
  EXPECT_NE(error_of("experiment = gate\nR = 10\n").find("test.cfg:2"), std::string::npos);
  EXPECT_NE(error_of("experiment = gate\nR = ten um\n").find("test.cfg:2"), std::string::npos);
  EXPECT_NE(error_of("experiment = gate\nR = 10 furlongs\n").find("test.cfg:2"), std::string::npos);
  EXPECT_NE(error_of("experiment = gate\nR = 10 um\nR = 11 um\n").find("test.cfg:3"), std::string::npos);
  EXPECT_NE(error_of("experiment = teleport\n").find("test.cfg:1"), std::string::npos);
  EXPECT_NE(error_of("garbage line\n").find("test.cfg:1"), std::string::npos);
  EXPECT_FALSE(error_of("").empty());
  EXPECT_FALSE(error_of("R = 10 um\n").empty());
}

TEST(Config, SetValidatesAndEchoResolves) {
  auto c = parse("experiment = fidelity\n");
  c.set("F_RF", "45 mV/cm");
  EXPECT_NEAR(c.number("F_RF"), 0.045, 1e-15);
  EXPECT_THROW(c.set("F_RF", "45"), ConfigError);
  EXPECT_THROW(c.set("nope", "1"), ConfigError);
  std::ostringstream out;
  c.write_resolved(out);
  const auto text = out.str();
  EXPECT_NE(text.find("F_RF = 45 mV/cm"), std::string::npos) << text;
  EXPECT_NE(text.find("T_deex = 20 ns"), std::string::npos);
  // The echo parses back to the same configuration.
  const auto again = parse(text);
  for (const auto& k : config_keys()) EXPECT_EQ(again.text(k.key), c.text(k.key)) << k.key;
}
