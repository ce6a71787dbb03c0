#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "kkscatter/kramers_kronig.hpp"
#include "kkscatter/medium.hpp"
#include "kkscatter/scattering.hpp"
#include "kkscatter/simd/kernels.hpp"
#include "kkscatter/sweep.hpp"

namespace kkscatter {

/// [medium] exactly as written in the file: rates in Hz where suffixed _hz,
/// other rates in gamma31 units, lengths in m.
struct MediumSection {
  double gamma31_hz = 2.87e6;
  double gamma21_hz = 1.0e3;
  double omega_c = 10.0;
  double delta_c = 0.0;
  double delta0 = 200.0;
  double n0_per_m3 = 2.0e19;
  double d13_cm = 1.79e-29;
  double length_m = 5.0e-6;
  double lambda_m = 795e-9;
  IndexConvention index_convention = IndexConvention::kGaussian;
  std::optional<double> omega_d0;
  std::optional<double> delta_d;

  MediumParams params() const;
  bool operator==(const MediumSection&) const = default;
};

struct NumericsSection {
  std::size_t n_layers = 0;  // 0: auto
  double rel_tol = 1e-6;
  std::size_t kk_resolution = kDefaultKKResolution;
  double kk_threshold_lower = 0.1;
  double kk_threshold_upper = 0.9;
  double amax_theta_min_deg = 0.0;
  double amax_theta_max_deg = 60.0;
  std::size_t amax_theta_points = 121;
  std::size_t amax_phi_points = 256;
  std::string simd = "auto";

  bool operator==(const NumericsSection&) const = default;
};

enum class OutputFormat { kCsv, kJson };

struct OutputSection {
  OutputFormat format = OutputFormat::kCsv;
  std::string path = "-";  // "-" is stdout
  int precision = 12;

  bool operator==(const OutputSection&) const = default;
};

struct RunConfig {
  MediumSection medium;
  NumericsSection numerics;
  OutputSection output;

  /// Sweep options with the numerics section applied.
  SweepOptions sweep_options(unsigned jobs) const;
  bool operator==(const RunConfig&) const = default;
};

/// Throws ConfigError on a constraint violation.
void validate(const RunConfig& config);

/// Parses INI text. Unknown sections or keys, duplicates and bad values throw ConfigError.
RunConfig parse_config(std::string_view text);

/// Reads and parses a file, then applies KKSCATTER_<SECTION>_<KEY> environment overrides.
RunConfig load_config(const std::string& path);

/// Built-in defaults with environment overrides applied.
RunConfig default_config();

/// Applies overrides from the given environment (name -> value) in place.
void apply_env_overrides(RunConfig& config, const std::map<std::string, std::string>& env);

/// Snapshot of the process environment restricted to KKSCATTER_* names.
std::map<std::string, std::string> kkscatter_environment();

/// Every key, defaults included; parse_config(write_config(c)) == c.
std::string write_config(const RunConfig& config);

}  // namespace kkscatter
