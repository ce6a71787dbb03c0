#include "kkscatter/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "kkscatter/constants.hpp"
#include "kkscatter/errors.hpp"
#include "kkscatter/parallel.hpp"
#include "kkscatter/simd/kernels.hpp"

namespace kkscatter {

using constants::kPi;
using constants::kTwoPi;

TwoChannelDrive TwoChannelDrive::make(double i_l, double i_r, double phi) {
  if (!(i_l >= 0.0) || !(i_r >= 0.0) || !std::isfinite(i_l) || !std::isfinite(i_r)) {
    throw DomainError("drive intensities must be finite and >= 0");
  }
  if (!(i_l + i_r > 0.0)) throw DomainError("drive must have i_l + i_r > 0");
  if (!std::isfinite(phi)) throw DomainError("drive phase must be finite");
  return {i_l, i_r, phi};
}

std::string_view to_string(Side side) { return side == Side::kLeft ? "LEFT" : "RIGHT"; }

namespace {

double wrap_phase(double phi) {
  double w = std::fmod(phi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

simd::PhaseScanTerms scan_terms(const ScatteringCoefficients& c, double i_l, double i_r) {
  const double rl = c.r_l(), rr = c.r_r(), t = c.t();
  const double cross = 2.0 * t * std::sqrt(i_l * i_r);
  return {rl * rl * i_l + t * t * i_r, rl * cross, c.phi_l() - c.phi_t(),
          rr * rr * i_r + t * t * i_l, rr * cross, c.phi_t() - c.phi_r()};
}

}  // namespace

double contrast(double s_l, double s_r) {
  const double total = s_l + s_r;
  if (!(total > 0.0)) throw DomainError("contrast undefined: both sides are dark");
  return std::fabs(s_l - s_r) / total;
}

double absorption(const TwoChannelDrive& drive, double s_l, double s_r) {
  const double total = drive.i_l + drive.i_r;
  if (!(total > 0.0)) throw DomainError("absorption needs i_l + i_r > 0");
  return (total - s_l - s_r) / total;
}

ScatteringOutcome two_channel(const ScatteringCoefficients& coeffs, const TwoChannelDrive& drive) {
  const simd::PhaseScanTerms t = scan_terms(coeffs, drive.i_l, drive.i_r);
  ScatteringOutcome out;
  out.s_l = std::max(0.0, t.l_mean + t.l_amplitude * std::cos(drive.phi + t.l_offset));
  out.s_r = std::max(0.0, t.r_mean + t.r_amplitude * std::cos(drive.phi + t.r_offset));
  if (out.s_l + out.s_r > 1e-300) {
    out.contrast = contrast(out.s_l, out.s_r);
  } else {
    out.contrast = 0.0;
    out.contrast_defined = false;
  }
  out.absorption = absorption(drive, out.s_l, out.s_r);
  return out;
}

CoherentCondition coherent_condition(const ScatteringCoefficients& coeffs, Side side) {
  CoherentCondition c;
  c.side = side;
  const double t = coeffs.t();
  if (side == Side::kLeft) {
    c.phi_star = wrap_phase(coeffs.phi_t() - coeffs.phi_l() + kPi);
  } else {
    c.phi_star = wrap_phase(coeffs.phi_r() - coeffs.phi_t() + kPi);
  }
  if (!(t > 0.0)) {
    c.feasible = false;
    c.intensity_ratio = 0.0;
    return c;
  }
  const double r = side == Side::kLeft ? coeffs.r_l() : coeffs.r_r();
  c.intensity_ratio = (r / t) * (r / t);
  c.feasible = std::isfinite(c.intensity_ratio);
  return c;
}

std::optional<TwoChannelDrive> coherent_drive(const CoherentCondition& condition, double i_l) {
  if (!condition.feasible || !(i_l > 0.0)) return std::nullopt;
  if (condition.side == Side::kLeft) {
    return TwoChannelDrive{i_l, condition.intensity_ratio * i_l, condition.phi_star};
  }
  if (!(condition.intensity_ratio > 0.0)) return std::nullopt;
  const double i_r = i_l / condition.intensity_ratio;
  if (!std::isfinite(i_r)) return std::nullopt;
  return TwoChannelDrive{i_l, i_r, condition.phi_star};
}

std::string_view to_string(RatioRule rule) {
  switch (rule) {
    case RatioRule::kNone:
      return "NONE";
    case RatioRule::kEq9:
      return "EQ9";
    case RatioRule::kEq10:
      return "EQ10";
  }
  return "UNKNOWN";
}

RatioRule parse_ratio_rule(std::string_view text) {
  if (text == "NONE" || text == "none") return RatioRule::kNone;
  if (text == "EQ9" || text == "eq9") return RatioRule::kEq9;
  if (text == "EQ10" || text == "eq10") return RatioRule::kEq10;
  throw ConfigError("unknown ratio rule '" + std::string(text) + "' (expected NONE|EQ9|EQ10)");
}

ConvergedCoefficients coefficients(const MediumParams& params, double delta,
                                   const IncidenceGeometry& geom, const Discretization& disc) {
  if (disc.n_layers == 0) return converged_coefficients(params, delta, geom, disc.rel_tol);
  return {coefficients_at(params, delta, geom, disc.n_layers), disc.n_layers};
}

namespace {

// Right-side intensity for the rule, or nullopt when infeasible.
std::optional<double> right_intensity(const ScatteringCoefficients& c,
                                      const AbsorptionSearch& search) {
  switch (search.rule) {
    case RatioRule::kNone:
      return search.i_r;
    case RatioRule::kEq9: {
      const auto d = coherent_drive(coherent_condition(c, Side::kLeft), search.i_l);
      return d ? std::optional<double>(d->i_r) : std::nullopt;
    }
    case RatioRule::kEq10: {
      const auto d = coherent_drive(coherent_condition(c, Side::kRight), search.i_l);
      return d ? std::optional<double>(d->i_r) : std::nullopt;
    }
  }
  return std::nullopt;
}

struct Cell {
  bool feasible = false;
  double a = 0.0;
  std::size_t phi_index = 0;
  double i_r = 0.0;
};

template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, int iterations = 48) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iterations; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace

AbsorptionMaximum max_absorption_over(const CoefficientProvider& provider,
                                      const AbsorptionSearch& search) {
  if (search.theta_points == 0 || search.phi_points == 0) {
    throw DomainError("absorption search needs non-empty theta and phi grids");
  }
  if (!(search.theta_max >= search.theta_min)) throw DomainError("theta_max < theta_min");
  if (!(search.i_l > 0.0)) throw DomainError("absorption search needs i_l > 0");

  const std::size_t nt = search.theta_points;
  const std::size_t np = search.phi_points;
  auto theta_at = [&](std::size_t i) {
    return nt == 1 ? search.theta_min
                   : search.theta_min + (search.theta_max - search.theta_min) *
                                            static_cast<double>(i) / static_cast<double>(nt - 1);
  };
  std::vector<double> cos_phi(np), sin_phi(np);
  for (std::size_t k = 0; k < np; ++k) {
    const double phi = kTwoPi * static_cast<double>(k) / static_cast<double>(np);
    cos_phi[k] = std::cos(phi);
    sin_phi[k] = std::sin(phi);
  }

  std::vector<Cell> cells(nt);
  std::vector<ScatteringCoefficients> coeffs(nt);
  parallel_for(nt, search.jobs, [&](std::size_t i) {
    coeffs[i] = provider(theta_at(i));
    const auto i_r = right_intensity(coeffs[i], search);
    if (!i_r) return;
    std::vector<double> s_l(np), s_r(np);
    simd::kernels().phase_scan(scan_terms(coeffs[i], search.i_l, *i_r), cos_phi, sin_phi, s_l,
                               s_r);
    const double total = search.i_l + *i_r;
    Cell cell{true, -std::numeric_limits<double>::infinity(), 0, *i_r};
    for (std::size_t k = 0; k < np; ++k) {
      const double a = (total - std::max(0.0, s_l[k]) - std::max(0.0, s_r[k])) / total;
      if (a > cell.a) {
        cell.a = a;
        cell.phi_index = k;
      }
    }
    cells[i] = cell;
  });

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < nt; ++i) {
    if (cells[i].feasible && (!best || cells[i].a > cells[*best].a)) best = i;
  }
  AbsorptionMaximum out;
  if (!best) return out;

  double theta = theta_at(*best);
  double phi = kTwoPi * static_cast<double>(cells[*best].phi_index) / static_cast<double>(np);
  double i_r = cells[*best].i_r;
  ScatteringCoefficients c = coeffs[*best];
  double a_best = cells[*best].a;

  // phi refinement at fixed theta
  {
    const double half = kTwoPi / static_cast<double>(np);
    auto f = [&](double p) {
      return two_channel(c, TwoChannelDrive{search.i_l, i_r, p}).absorption;
    };
    const auto [p, a] = golden_max(f, phi - half, phi + half);
    if (a > a_best) {
      a_best = a;
      phi = wrap_phase(p);
    }
  }
  // theta refinement at fixed phi; the ratio rule is re-solved at each angle
  if (nt > 1) {
    const double step = (search.theta_max - search.theta_min) / static_cast<double>(nt - 1);
    const double lo = std::max(search.theta_min, theta - step);
    const double hi = std::min(search.theta_max, theta + step);
    auto f = [&](double th) {
      const ScatteringCoefficients cc = provider(th);
      const auto ir = right_intensity(cc, search);
      if (!ir) return -std::numeric_limits<double>::infinity();
      return two_channel(cc, TwoChannelDrive{search.i_l, *ir, phi}).absorption;
    };
    const auto [th, a] = golden_max(f, lo, hi, 30);
    if (a > a_best) {
      const ScatteringCoefficients cc = provider(th);
      if (const auto ir = right_intensity(cc, search)) {
        a_best = a;
        theta = th;
        c = cc;
        i_r = *ir;
      }
    }
  }

  out.a_max = a_best;
  out.theta = theta;
  out.phi = phi;
  out.i_r = i_r;
  out.outcome = two_channel(c, TwoChannelDrive{search.i_l, i_r, phi});
  return out;
}

AbsorptionMaximum max_absorption_over(const MediumParams& params, double delta,
                                      const AbsorptionSearch& search,
                                      const Discretization& disc) {
  validate(params);
  const CoefficientProvider provider = [&](double theta) {
    return coefficients(params, delta, IncidenceGeometry::for_medium(params, theta), disc).coeffs;
  };
  return max_absorption_over(provider, search);
}

}  // namespace kkscatter
