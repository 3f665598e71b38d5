#pragma once
// Gamma-function primitives for the closed-form constants.
//
// Every downstream constant is assembled in log space, so this header
// exposes log Gamma and a log ratio Gamma(z+1/2)/Gamma(z) that stays
// accurate for large z, where forming the two log Gammas separately and
// subtracting would lose most of the digits to cancellation.

#include <cmath>
#include <stdexcept>

namespace cknsym::specfun {

namespace detail {

// Stirling tail S(x):  ln Gamma(x) = (x - 1/2) ln x - x + ln(2 pi)/2 + S(x).
// Coefficients are B_{2k} / (2k (2k-1)).  For x >= 24 the first omitted
// term is below 1e-19, under one ulp of ln Gamma in double precision.
inline long double stirling_tail(long double x) {
  static const long double c[8] = {
      1.0L / 12.0L,           -1.0L / 360.0L,
      1.0L / 1260.0L,         -1.0L / 1680.0L,
      1.0L / 1188.0L,         -691.0L / 360360.0L,
      7.0L / 1092.0L,         -3617.0L / 122400.0L,
  };
  const long double r = 1.0L / (x * x);
  long double s = c[7];
  for (int k = 6; k >= 0; --k) s = c[k] + r * s;
  return s / x;
}

inline long double ln_gamma_big(long double x) {
  const long double half_ln_two_pi = 0.91893853320467274178032973640562L;
  return (x - 0.5L) * std::log(x) - x + half_ln_two_pi + stirling_tail(x);
}

}  // namespace detail

// Natural log of Gamma(x) for x > 0.  Arguments below the Stirling
// threshold are shifted up with the recurrence Gamma(x+1) = x Gamma(x).
inline double ln_gamma(double x) {
  if (!(x > 0.0))
    throw std::domain_error("ln_gamma: argument must be positive");
  long double xl = static_cast<long double>(x);
  long double shift = 0.0L;
  while (xl < 24.0L) {
    shift += std::log(xl);
    xl += 1.0L;
  }
  return static_cast<double>(detail::ln_gamma_big(xl) - shift);
}

// log of Gamma(z + 1/2) / Gamma(z) for z > 0, computed without
// cancellation.  For moderate z the difference of the two Stirling
// expansions collapses to
//   z log(1 + 1/(2z)) + log(z)/2 - 1/2 + S(z + 1/2) - S(z),
// and below the Stirling threshold the argument is shifted up with
//   ratio(z) = ratio(z + n) * prod_k (z + k) / (z + k + 1/2).
// For very large z the direct asymptotic series of the ratio,
//   sqrt(z) (1 - 1/(8z) + 1/(128 z^2) + 5/(1024 z^3) + ...),
// is used instead so that no digits are spent on the log1p term.
inline double ln_gamma_half_ratio(double z) {
  if (!(z > 0.0))
    throw std::domain_error("ln_gamma_half_ratio: argument must be positive");
  long double zl = static_cast<long double>(z);
  if (zl > 1e8L) {
    const long double r = 1.0L / zl;
    const long double series =
        -0.125L * r + (1.0L / 128.0L) * r * r + (5.0L / 1024.0L) * r * r * r;
    return static_cast<double>(0.5L * std::log(zl) + std::log1p(series));
  }
  long double shift = 0.0L;
  while (zl < 24.0L) {
    // ratio(z) = ratio(z+1) * z / (z + 1/2)
    shift += std::log(zl) - std::log(zl + 0.5L);
    zl += 1.0L;
  }
  const long double delta = zl * std::log1p(1.0L / (2.0L * zl)) +
                            0.5L * std::log(zl) - 0.5L +
                            detail::stirling_tail(zl + 0.5L) -
                            detail::stirling_tail(zl);
  return static_cast<double>(delta + shift);
}

inline double gamma_half_ratio(double z) {
  return std::exp(ln_gamma_half_ratio(z));
}

// log of |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2), real d > 0.
inline double ln_sphere_area(double d) {
  if (!(d > 0.0))
    throw std::domain_error("ln_sphere_area: dimension must be positive");
  const double ln_pi = 1.1447298858494001741;
  const double ln_two = 0.69314718055994530942;
  return ln_two + 0.5 * d * ln_pi - ln_gamma(0.5 * d);
}

inline double sphere_area(double d) { return std::exp(ln_sphere_area(d)); }

// integral over (0, pi) of sin(phi)^{d-2}, real d > 1:
// sqrt(pi) Gamma((d-1)/2) / Gamma(d/2).
inline double sine_power_integral(double d) {
  if (!(d > 1.0))
    throw std::domain_error("sine_power_integral: requires d > 1");
  const double half_ln_pi = 0.57236494292470008707;
  return std::exp(half_ln_pi + ln_gamma(0.5 * (d - 1.0)) - ln_gamma(0.5 * d));
}

}  // namespace cknsym::specfun
