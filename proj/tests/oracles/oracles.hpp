#pragma once

// Independent reference computations used only by the tests. None of these
// call into the library's numerical kernels.

#include <cmath>
#include <complex>
#include <functional>

namespace oracle {

using cd = std::complex<double>;

struct Amplitudes {
  cd r_l, r_r, t;
};

/// Fabry-Perot (Airy) sum for a homogeneous TE slab of index n and thickness d
/// in vacuum, amplitudes referred to the slab faces.
inline Amplitudes airy_slab(cd n, double d, double theta, double k) {
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  cd q = std::sqrt(n * n - s * s);
  if (q.imag() < 0.0) q = -q;
  const cd r01 = (c - q) / (c + q);
  const cd t01 = 2.0 * c / (c + q);
  const cd t10 = 2.0 * q / (c + q);
  const cd e1 = std::exp(cd(0.0, 1.0) * k * d * q);
  const cd den = 1.0 - r01 * r01 * e1 * e1;
  const cd r = r01 * (1.0 - e1 * e1) / den;
  return {r, r, t01 * t10 * e1 / den};
}

struct Mat {
  cd a, b, c, d;
  Mat operator*(const Mat& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Mat inverse() const {
    const cd det = a * d - b * c;
    return {d / det, -b / det, -c / det, a / det};
  }
};

/// Layer matrix built as D0^-1 D1 P D1^-1 D0 from the plane-wave basis
/// (a, b) -> (E, E' / (i k)) of vacuum and of the layer.
inline Mat interface_product(cd n, double d, double theta, double k) {
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  cd q = std::sqrt(n * n - s * s);
  if (q.imag() < 0.0) q = -q;
  const Mat d0{1.0, 1.0, c, -c};
  const Mat d1{1.0, 1.0, q, -q};
  const cd w = k * d * q;
  const Mat p{std::exp(cd(0.0, 1.0) * w), 0.0, 0.0, std::exp(cd(0.0, -1.0) * w)};
  return d0.inverse() * d1 * p * d1.inverse() * d0;
}

/// Integrates E'' + k^2 (n(x)^2 - sin^2 theta) E = 0 over [0, L] with RK4 and
/// reads off outgoing-wave amplitudes on both sides.
inline Amplitudes helmholtz(const std::function<cd(double)>& n, double length, double theta,
                            double k, int steps) {
  const double s2 = std::sin(theta) * std::sin(theta);
  const double kx = k * std::cos(theta);
  const cd i(0.0, 1.0);
  auto rhs = [&](double x, cd e, cd de, cd& out_e, cd& out_de) {
    const cd nn = n(x);
    out_e = de;
    out_de = -k * k * (nn * nn - s2) * e;
  };
  auto integrate = [&](double x0, double x1, cd e, cd de) {
    const double h = (x1 - x0) / steps;
    for (int j = 0; j < steps; ++j) {
      const double x = x0 + (x1 - x0) * j / steps;
      cd k1e, k1d, k2e, k2d, k3e, k3d, k4e, k4d;
      rhs(x, e, de, k1e, k1d);
      rhs(x + 0.5 * h, e + 0.5 * h * k1e, de + 0.5 * h * k1d, k2e, k2d);
      rhs(x + 0.5 * h, e + 0.5 * h * k2e, de + 0.5 * h * k2d, k3e, k3d);
      rhs(x0 + (x1 - x0) * (j + 1) / steps, e + h * k3e, de + h * k3d, k4e, k4d);
      e += h / 6.0 * (k1e + 2.0 * k2e + 2.0 * k3e + k4e);
      de += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    }
    return std::pair{e, de};
  };
  Amplitudes out;
  {
    // incidence from the left: only e^{+i kx x} beyond L
    const auto [e, de] = integrate(length, 0.0, 1.0, i * kx);
    const cd fwd = 0.5 * (e + de / (i * kx));
    const cd bwd = 0.5 * (e - de / (i * kx));
    out.r_l = bwd / fwd;
    out.t = 1.0 / fwd;
  }
  {
    // incidence from the right: only e^{-i kx x} before 0
    const auto [e, de] = integrate(0.0, length, 1.0, -i * kx);
    const cd incoming = 0.5 * (e - de / (i * kx));
    const cd outgoing = 0.5 * (e + de / (i * kx));
    out.r_r = outgoing / incoming;
  }
  return out;
}

/// (1/pi) P int_0^L f(s) / (s - x) ds for f(s) = w / ((s - x0)^2 + w^2), closed form.
inline double lorentzian_hilbert(double x, double x0, double w, double length) {
  const double a = x - x0;
  const double u0 = -x0;
  const double u1 = length - x0;
  const double A = w / (a * a + w * w);
  const double log_part = A * std::log((length - x) / x);
  const double quad_part = -0.5 * A * std::log((u1 * u1 + w * w) / (u0 * u0 + w * w));
  const double atan_part = -(a * A / w) * (std::atan(u1 / w) - std::atan(u0 / w));
  return (log_part + quad_part + atan_part) / M_PI;
}

/// alpha / gamma31 = N0 d13^2 / (2 eps0 hbar gamma31) from CODATA constants.
inline double alpha_in_gamma31(double n0, double d13, double gamma31) {
  constexpr double eps0 = 8.8541878128e-12;
  constexpr double hbar = 1.054571817e-34;
  return n0 * d13 * d13 / (2.0 * eps0 * hbar * gamma31);
}

/// Textbook Lambda-system susceptibility with complex arithmetic.
inline cd eit_chi(double alpha, double detuning, double omega_c, double gamma21, double delta_c) {
  const cd i(0.0, 1.0);
  return alpha * i / (1.0 - i * detuning + omega_c * omega_c / (gamma21 + i * (delta_c - detuning)));
}

}  // namespace oracle
