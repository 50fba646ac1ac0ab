#pragma once

#include <cmath>

namespace sbqa {

enum class Nonlinearity { ballistic, discrete, thresholded };

/// Regularization added to the transverse-field schedule so that the
/// inter-replica coupling stays finite at t = T.
inline constexpr double kFieldRegularizer = 1e-5;

inline double sign_of(double x) noexcept { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

/// Force nonlinearity f(x) at normalized time ramp = t / T.
/// ballistic: x; discrete: sign(x); thresholded: 0 if |x| <= slope * ramp, else sign(x).
inline double nonlinearity(Nonlinearity kind, double x, double ramp, double threshold_slope) noexcept {
  switch (kind) {
    case Nonlinearity::ballistic:
      return x;
    case Nonlinearity::discrete:
      return sign_of(x);
    case Nonlinearity::thresholded:
      return std::abs(x) <= threshold_slope * ramp ? 0.0 : sign_of(x);
  }
  return x;
}

/// Gamma_x(t) = gamma0 [(1 - t/T)^alpha + 1e-5].
inline double transverse_field(double ramp, double gamma0, double alpha) noexcept {
  return gamma0 * (std::pow(1.0 - ramp, alpha) + kFieldRegularizer);
}

/// -(1 / 2 beta) ln tanh(beta * gamma / R).
/// Evaluated as ln(1 + e^{-2x}) - ln(1 - e^{-2x}), which stays accurate (and
/// positive) where tanh(x) rounds to 1.
inline double replica_coupling(double gamma, double beta, int replicas) noexcept {
  const double x = beta * gamma / replicas;
  const double e = std::exp(-2.0 * x);
  return (std::log1p(e) - std::log(-std::expm1(-2.0 * x))) / (2.0 * beta);
}

}  // namespace sbqa
