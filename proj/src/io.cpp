#include "wavelab/io.hpp"

#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace wavelab {

std::string format_number(Real x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(static_cast<long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) {
      fs::remove(tmp);
      throw NumericalError("short write to " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Real ConfigValue::as_real(const std::string& key) const {
  try {
    std::size_t pos = 0;
    const Real v = std::stod(raw, &pos);
    if (trim(raw.substr(pos)).empty()) return v;
  } catch (...) {
  }
  throw ConfigError("config key '" + key + "': expected a number, got '" + raw + "'");
}

Index ConfigValue::as_index(const std::string& key) const {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(raw, &pos);
    if (trim(raw.substr(pos)).empty()) return static_cast<Index>(v);
  } catch (...) {
  }
  throw ConfigError("config key '" + key + "': expected an integer, got '" + raw + "'");
}

bool ConfigValue::as_bool(const std::string& key) const {
  if (raw == "true" || raw == "1" || raw == "yes") return true;
  if (raw == "false" || raw == "0" || raw == "no") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" + raw + "'");
}

std::vector<Real> ConfigValue::as_real_list(const std::string& key) const {
  std::vector<Real> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (...) {
      throw ConfigError("config key '" + key + "': bad list element '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
  return out;
}

Config Config::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

Config Config::parse_text(const std::string& text) {
  Config cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
    cfg.values_[key] = ConfigValue{value};
  }
  return cfg;
}

Real Config::get_real(const std::string& key, Real fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second.as_real(key);
}

Index Config::get_index(const std::string& key, Index fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second.as_index(key);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second.as_bool(key);
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second.raw;
}

std::vector<Real> Config::get_real_list(const std::string& key,
                                        const std::vector<Real>& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second.as_real_list(key);
}

void Config::reject_unknown(const std::vector<std::string>& allowed) const {
  for (const auto& [key, value] : values_) {
    bool ok = false;
    for (const auto& a : allowed)
      if (a == key) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError("unknown config key '" + key + "'");
  }
}

CsvWriter::CsvWriter(std::string schema_id, std::vector<std::string> columns)
    : schema_id_(std::move(schema_id)), columns_(std::move(columns)) {}

void CsvWriter::set_meta(const std::string& key, const std::string& value) {
  meta_.emplace_back(key, value);
}

void CsvWriter::add_row(const std::vector<Real>& row) {
  if (row.size() != columns_.size()) throw ConfigError("csv row arity mismatch");
  rows_.push_back(row);
}

std::string CsvWriter::str() const {
  std::ostringstream out;
  out << "# wavelab-csv schema=" << schema_id_ << " version=" << artifact_version << "\n";
  for (const auto& [k, v] : meta_) out << "# " << k << " = " << v << "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i)
    out << columns_[i] << (i + 1 < columns_.size() ? "," : "\n");
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << format_number(row[i]) << (i + 1 < row.size() ? "," : "\n");
  }
  return out.str();
}

void CsvWriter::write(const std::filesystem::path& path) const { atomic_write(path, str()); }

std::vector<Real> random_trig_coefficients(unsigned seed, int k_max, Real decay_rate) {
  std::mt19937 rng(seed);
  std::normal_distribution<Real> gauss(0.0, 1.0);
  std::vector<Real> coeffs;
  coeffs.reserve(static_cast<std::size_t>(2 * k_max));
  for (int k = 1; k <= k_max; ++k) {
    const Real decay = std::exp(-decay_rate * k);
    coeffs.push_back(gauss(rng) * decay);  // cos(kx) amplitude
    coeffs.push_back(gauss(rng) * decay);  // sin(kx) amplitude
  }
  return coeffs;
}

}  // namespace wavelab
