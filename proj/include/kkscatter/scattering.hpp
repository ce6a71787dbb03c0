#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>

#include "kkscatter/medium.hpp"
#include "kkscatter/transfer_matrix.hpp"

namespace kkscatter {

/// Bilateral coherent input. Intensities are relative (unit 1/2 eps0 c |E0|^2),
/// phi is the phase of the left input relative to the right one.
struct TwoChannelDrive {
  double i_l = 1.0;
  double i_r = 1.0;
  double phi = 0.0;

  static TwoChannelDrive make(double i_l, double i_r, double phi);
};

struct ScatteringOutcome {
  double s_l = 0.0;
  double s_r = 0.0;
  double contrast = 0.0;     // 0 when both sides are dark (see contrast_defined)
  double absorption = 0.0;
  bool contrast_defined = true;
};

enum class Side { kLeft, kRight };

std::string_view to_string(Side side);

/// One-sided destructive-interference condition.
///
/// kLeft (S_L = 0): phi* = phi_t - phi_l + pi, intensity_ratio = I_R / I_L = (r_l / t)^2.
/// kRight (S_R = 0): phi* = phi_r - phi_t + pi, intensity_ratio = I_L / I_R = (r_r / t)^2.
struct CoherentCondition {
  Side side = Side::kLeft;
  double phi_star = 0.0;  // [0, 2 pi)
  double intensity_ratio = 0.0;
  bool feasible = false;
};

ScatteringOutcome two_channel(const ScatteringCoefficients& coeffs, const TwoChannelDrive& drive);

/// |S_L - S_R| / (S_L + S_R); throws DomainError when both vanish.
double contrast(double s_l, double s_r);

/// (I_L + I_R - S_L - S_R) / (I_L + I_R).
double absorption(const TwoChannelDrive& drive, double s_l, double s_r);

CoherentCondition coherent_condition(const ScatteringCoefficients& coeffs, Side side);

/// Drive realizing a feasible condition with the given left intensity.
/// Empty when the condition cannot be met with i_l > 0 (t = 0, or r_r = 0 on the right side).
std::optional<TwoChannelDrive> coherent_drive(const CoherentCondition& condition, double i_l);

/// How I_R is chosen for each incidence angle while scanning absorption.
enum class RatioRule { kNone, kEq9, kEq10 };

std::string_view to_string(RatioRule rule);
RatioRule parse_ratio_rule(std::string_view text);

struct AbsorptionSearch {
  double theta_min = 0.0;                          // rad
  double theta_max = 60.0 * 3.14159265358979323846 / 180.0;  // rad
  std::size_t theta_points = 121;
  std::size_t phi_points = 256;
  RatioRule rule = RatioRule::kEq10;
  double i_l = 1.0;
  double i_r = 1.0;  // used by kNone only
  unsigned jobs = 1;
};

struct AbsorptionMaximum {
  double a_max = 0.0;
  std::optional<double> theta;  // rad
  std::optional<double> phi;    // rad in [0, 2 pi)
  double i_r = 0.0;
  ScatteringOutcome outcome;
};

/// Coefficients at incidence angle theta (rad). Must be safe to call concurrently.
using CoefficientProvider = std::function<ScatteringCoefficients(double theta)>;

/// Grid maximum of A over (theta, phi), then one golden-section pass in phi
/// and one in theta around the best cell. Cells whose ratio rule is infeasible
/// are skipped; with no feasible cell the result is A = 0 without an argmax.
AbsorptionMaximum max_absorption_over(const CoefficientProvider& provider,
                                      const AbsorptionSearch& search);

/// Medium-backed overload using the given discretization.
struct Discretization {
  std::size_t n_layers = 0;  // 0: converge adaptively to rel_tol
  double rel_tol = 1e-6;
};

ConvergedCoefficients coefficients(const MediumParams& params, double delta,
                                   const IncidenceGeometry& geom, const Discretization& disc);

AbsorptionMaximum max_absorption_over(const MediumParams& params, double delta,
                                      const AbsorptionSearch& search,
                                      const Discretization& disc);

}  // namespace kkscatter
