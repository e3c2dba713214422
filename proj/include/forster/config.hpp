#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace forster {

// Physical dimension of a configuration key. Values are converted to the
// internal units (um, V/cm, MHz, us, K, rad) on access.
enum class Dimension {
  Count,
  Number,
  Flag,
  Text,
  Length,
  Field,
  Frequency,
  Time,
  Temperature,
  Angle,
  Points,  // fidelity points: pp or %
};

struct KeySpec {
  std::string key;
  Dimension dim;
  std::string fallback;  // default as written in a config file; empty = required
  bool list = false;
};

const std::vector<KeySpec>& config_keys();

// Flat "key = value unit" configuration. Unknown keys, missing units and
// malformed numbers raise ConfigError with line and column.
class RunConfig {
 public:
  static RunConfig parse(std::istream& in, const std::string& source);
  static RunConfig load(const std::filesystem::path& path);

  std::string text(const std::string& key) const;
  double number(const std::string& key) const;  // internal units
  std::vector<double> numbers(const std::string& key) const;
  int count(const std::string& key) const;
  bool flag(const std::string& key) const;
  bool explicitly_set(const std::string& key) const { return set_.count(key) > 0; }

  // Overrides a value using the file syntax, e.g. set("T_RF", "1.3 us").
  void set(const std::string& key, const std::string& value);
  // Every key, defaults included, in file syntax.
  void write_resolved(std::ostream& out) const;
  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::map<std::string, std::string> set_;
  const std::string& raw(const std::string& key) const;
};

// Value with its unit converted to internal units; throws ConfigError.
std::vector<double> parse_quantity(const std::string& text, Dimension dim, bool list,
                                   const std::string& where);

}  // namespace forster
