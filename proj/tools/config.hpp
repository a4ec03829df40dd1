#pragma once

// Sectioned key = value run configuration with arithmetic expressions
// (pi, sqrt, + - * / ^, parentheses), lists "[a, b]" and ranges "lo:hi:step".

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nhtopo/bloch.hpp"
#include "nhtopo/disorder.hpp"
#include "nhtopo/model.hpp"

namespace nhtopo::cli {

double evaluate(const std::string& expr);
std::vector<double> evaluate_list(const std::string& text);

/// Raw text of a config: section -> key -> value, plus the file order of keys.
class RawConfig {
 public:
  static RawConfig parse(const std::string& text);
  static RawConfig load(const std::string& path);

  bool has_section(const std::string& s) const { return data_.count(s) > 0; }
  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  void set(const std::string& section, const std::string& key, const std::string& value);
  /// Applies "section.key=value"; the bare form "analysis=..." sets analysis.tasks.
  void apply_override(const std::string& assignment);
  const std::map<std::string, std::map<std::string, std::string>>& data() const { return data_; }

 private:
  std::map<std::string, std::map<std::string, std::string>> data_;
};

enum class Task { spectrum, winding, svd, gssh, response, disorder, sweep, eigen, gain };
const char* to_string(Task t) noexcept;

struct RunConfig {
  LatticeParams params;
  bool from_raw = false;
  std::vector<Task> tasks;
  int n = 50;
  int nk = 0;  // 0: default_grid_size(n)
  double omega = 0.0;
  double gamma = 0.2;
  std::vector<int> drive_sites{1};
  std::vector<int> n_list;
  std::vector<double> delta_list;
  DisorderSpec disorder;
  Tolerances tol;
  std::string out_dir = "out";
  std::vector<std::string> formats{"csv", "json"};
  std::uint64_t seed = 0;

  bool wants(Task t) const;
  bool format(const std::string& f) const;
  int grid() const;
};

/// Validates every key; throws Error(ConfigError) naming the key and the
/// violated constraint.
RunConfig resolve(const RawConfig& raw);

}  // namespace nhtopo::cli
