#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "wavelab/dispersive.hpp"
#include "wavelab/io.hpp"
#include "wavelab/shallow.hpp"
#include "wavelab/strip.hpp"
#include "wavelab/topo.hpp"

namespace wavelab {

using Json = nlohmann::json;

/// Outcome of one internal assertion evaluated in self-test mode.
struct SelfCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// One tabular output of a run; the CLI encodes it as CSV or JSON.
struct Table {
  std::string name;    // file stem
  std::string schema;  // schema id for the header
  std::vector<std::string> columns;
  std::vector<std::vector<Real>> rows;
  std::vector<std::pair<std::string, std::string>> meta;

  std::string to_csv() const;
  Json to_json() const;
};

/// Everything a run produces: tabular outputs (written atomically by the
/// CLI), a JSON manifest with the resolved config and diagnostics, and the
/// self-test outcomes.
struct RunResult {
  std::string experiment;
  std::vector<Table> tables;
  Json manifest;
  std::vector<SelfCheck> checks;
  // reported on stdout, never serialized (outputs stay byte-reproducible)
  double wall_seconds = 0;
};

struct ConfigKey {
  std::string name;
  std::string fallback;
  std::string description;
};

struct ExperimentInfo {
  std::string name;
  std::string figure;  // canonical plot id this experiment reproduces
  std::string description;
  std::vector<ConfigKey> schema;
};

const std::vector<ExperimentInfo>& experiment_catalog();

/// Resolve a config against an experiment schema: defaults, then file
/// values, then overrides; unknown keys rejected.
Config resolve_config(const ExperimentInfo& info, const Config& file_cfg, const Config& overrides);

/// Dispatch on cfg key "experiment". `jobs` bounds sweep concurrency.
RunResult run_experiment(const std::string& name, const Config& file_cfg, const Config& overrides,
                         int jobs = 1);

RunResult run_proudman(const Config& cfg, int jobs);
RunResult run_topo_resonance(const Config& cfg);
RunResult run_amplified_wave_experiment(const Config& cfg);
RunResult run_dispersive(const Config& cfg, PressureKind kind);
RunResult run_strip_validate(const Config& cfg);

// helpers shared with the acceptance suite ---------------------------------

/// Gaussian pressure field P0(X) = amplitude * exp(-(X/width)^2).
Field1D gaussian_pressure(const Grid1D& grid, Real amplitude, Real width);

/// Log-spaced sample times in [t1, t2].
std::vector<Real> log_spaced(Real t1, Real t2, int count);

/// Band-limited random field from seeded trig coefficients, sup-normalized.
Field1D random_band_limited(const Grid1D& grid, unsigned seed, int k_max, Real decay_rate);

/// Fixed four-mode probe field for operator-vs-multiplier comparisons, and
/// the same field with a scalar symbol applied mode by mode (exact
/// reference for multiplier-type operators on a 2*pi-periodic box).
Field1D strip_probe_field(const Grid1D& grid);
Field1D strip_probe_with_symbol(const Grid1D& grid, const std::function<Real(Real)>& symbol);

}  // namespace wavelab
