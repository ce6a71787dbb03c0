#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kkscatter/errors.hpp"
#include "kkscatter/kramers_kronig.hpp"
#include "kkscatter/medium.hpp"
#include "kkscatter/scattering.hpp"

namespace kkscatter {

class SpecError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Grid axis. Either evenly spaced (start, stop, count) or an explicit value list.
struct Axis {
  std::string name;
  std::vector<double> values;

  static Axis linspace(std::string name, double start, double stop, std::size_t count);
  static Axis list(std::string name, std::vector<double> values);
};

/// Parameter namespace: delta, delta0, omega_c, theta (rad), phi (rad), i_l, i_r, x (m).
const std::vector<std::string>& sweep_parameters();

/// Observable namespace. a_max uses the search settings in SweepOptions.
const std::vector<std::string>& sweep_observables();

struct SweepSpec {
  std::string id;  // preset id or empty
  std::vector<Axis> axes;
  std::map<std::string, double> fixed;
  std::vector<std::string> observables;
  RatioRule ratio_rule = RatioRule::kNone;
  // Solve the ratio rule once at theta = 0 instead of at every angle.
  bool ratio_at_normal = false;
  // When set, delta = delta_per_delta0 * delta0 at every point (Fig. 2 uses -1/2).
  std::optional<double> delta_per_delta0;
  std::string note;
};

struct SweepOptions {
  Discretization disc;
  std::size_t kk_resolution = kDefaultKKResolution;
  KKThresholds thresholds;
  AbsorptionSearch search;  // theta range, grid sizes and i_l for a_max; rule comes from the spec
  unsigned jobs = 1;
};

struct SweepTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  // Label columns written after the numeric ones, one entry per row.
  std::vector<std::pair<std::string, std::vector<std::string>>> text_columns;
  std::map<std::string, std::string> metadata;

  std::size_t column(std::string_view name) const;
  std::vector<double> column_values(std::string_view name) const;
};

/// Throws SpecError on an invalid spec.
void validate(const SweepSpec& spec);

SweepTable run_sweep(const SweepSpec& spec, const MediumParams& params,
                     const SweepOptions& options = {});

/// Observable values at a single point, in the order of spec.observables.
/// `point` holds values for every axis name.
std::vector<double> evaluate_point(const SweepSpec& spec, const MediumParams& params,
                                   const SweepOptions& options,
                                   const std::map<std::string, double>& point);

const std::vector<std::string>& figure_ids();

/// Throws SpecError("unknown figure id ...") for an unknown id.
SweepSpec figure_preset(std::string_view id);

/// CSV with a header row; numbers as %.<precision>e.
void write_csv(std::ostream& out, const SweepTable& table, int precision = 12);
/// Metadata object plus one array per column.
void write_json(std::ostream& out, const SweepTable& table);

/// printf-style %.<precision>e.
std::string format_number(double value, int precision = 12);

inline constexpr std::string_view kCodeVersion = "0.1.0";

}  // namespace kkscatter
