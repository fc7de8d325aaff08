#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wavelab/types.hpp"

namespace wavelab {

/// Format a double with 17 significant digits (binary round trip).
std::string format_number(Real x);

/// Write content to path atomically: temp file in the same directory, then
/// rename. An interrupted write never leaves a partial file at the target.
void atomic_write(const std::filesystem::path& path, const std::string& content);

// ---------------------------------------------------------------------------
// Flat key-value configuration: `key = value` lines, '#' comments. Values
// are scalars or comma-separated lists. Unknown keys are rejected against a
// schema; command-line overrides win over file values.
// ---------------------------------------------------------------------------

struct ConfigValue {
  std::string raw;
  Real as_real(const std::string& key) const;
  Index as_index(const std::string& key) const;
  bool as_bool(const std::string& key) const;
  std::vector<Real> as_real_list(const std::string& key) const;
  const std::string& as_string() const { return raw; }
};

class Config {
 public:
  static Config parse_file(const std::filesystem::path& path);
  static Config parse_text(const std::string& text);

  void set(const std::string& key, const std::string& value) { values_[key] = ConfigValue{value}; }
  bool has(const std::string& key) const { return values_.count(key) > 0; }

  Real get_real(const std::string& key, Real fallback) const;
  Index get_index(const std::string& key, Index fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<Real> get_real_list(const std::string& key, const std::vector<Real>& fallback) const;

  /// Throw ConfigError on any key outside the allowed set.
  void reject_unknown(const std::vector<std::string>& allowed) const;

  const std::map<std::string, ConfigValue>& values() const { return values_; }

 private:
  std::map<std::string, ConfigValue> values_;
};

/// CSV writer: header comment lines carrying the schema id, artifact
/// version and the resolved configuration echo, one header row, then rows
/// of 17-digit numbers.
class CsvWriter {
 public:
  CsvWriter(std::string schema_id, std::vector<std::string> columns);
  void set_meta(const std::string& key, const std::string& value);
  void add_row(const std::vector<Real>& row);
  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::string schema_id_;
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::vector<Real>> rows_;
};

inline constexpr const char* artifact_version = "1.0.0";

/// Deterministic band-limited random field generator (tests and the strip
/// validation report share it): amplitudes decay like exp(-rate k) over
/// modes 1..k_max, fixed seed.
std::vector<Real> random_trig_coefficients(unsigned seed, int k_max, Real decay_rate);

}  // namespace wavelab
