#pragma once
// Closed-form optimal constants among radial (symmetric) functions, plus
// the derived Gagliardo-Nirenberg comparison quantities L(p, d) and its
// slope ell(d) at p = 2.
//
// All products of Gamma functions and powers are assembled in log space;
// ConstantValue carries both the value and its log so callers never lose
// precision re-taking logs.
//
// Normalization: c_ckn_star and c_wlh_star are the constants of the
// one-dimensional cylinder problem (angular average normalized to total
// mass one for CKN; full sphere measure included for WLH).  The factor
// |S^{d-1}|^{2/p - 1} that converts the CKN value to the constant of the
// d-dimensional inequality appears exactly where a d-dimensional quantity
// is formed (big_l, the Schwarz curve in regions.hpp).

#include <cmath>
#include <stdexcept>

#include "cknsym/params.hpp"
#include "cknsym/specfun.hpp"

namespace cknsym::radial {

struct ConstantValue {
  double value = 0.0;
  double log_value = 0.0;
  const char* formula_id = "";
};

inline ConstantValue from_log(double log_value, const char* id) {
  return ConstantValue{std::exp(log_value), log_value, id};
}

// Optimal constant of the theta-interpolated inequality among symmetric
// functions, as a function of (theta, p, Lambda):
//
//   [ Lambda (p-2)^2 / D ]^{(p-2)/(2p)} * [ D / (2 p theta Lambda) ]^theta
//   * [ 4 / (p+2) ]^{(6-p)/(2p)}
//   * [ Gamma(zeta + 1/2) / (sqrt(pi) Gamma(zeta)) ]^{(p-2)/p}
//
// with D = 2 + (2 theta - 1) p and zeta = 2/(p-2).  The formula requires
// D > 0, which holds strictly inside the admissible (theta, p) region.
inline ConstantValue c_ckn_star(double theta, double p, double lambda) {
  if (!(p > 2.0)) throw std::domain_error("c_ckn_star: requires p > 2");
  if (!(theta > 0.0 && theta <= 1.0))
    throw std::domain_error("c_ckn_star: requires 0 < theta <= 1");
  if (!(lambda > 0.0)) throw std::domain_error("c_ckn_star: requires lambda > 0");
  const double dd = 2.0 + (2.0 * theta - 1.0) * p;
  if (!(dd > 0.0))
    throw std::domain_error("c_ckn_star: 2 + (2 theta - 1) p must be positive");
  const double zeta = 2.0 / (p - 2.0);
  const double half_ln_pi = 0.57236494292470008707;
  double lg = 0.0;
  lg += (p - 2.0) / (2.0 * p) *
        (std::log(lambda) + 2.0 * std::log(p - 2.0) - std::log(dd));
  lg += theta * (std::log(dd) - std::log(2.0 * p * theta * lambda));
  lg += (6.0 - p) / (2.0 * p) * (std::log(4.0) - std::log(p + 2.0));
  lg += (p - 2.0) / p * (specfun::ln_gamma_half_ratio(zeta) - half_ln_pi);
  return from_log(lg, "ckn-radial");
}

// Optimal constant of the weighted logarithmic Hardy inequality among
// symmetric functions.  For gamma > 1/4:
//
//   (1/(4 gamma)) Gamma(d/2)^{1/(2 gamma)} / (2 pi^{d+1} e)^{1/(4 gamma)}
//   * ((4 gamma - 1) / Lambda)^{(4 gamma - 1)/(4 gamma)}
//
// and the Lambda-independent limit Gamma(d/2)^2 / (2 pi^{d+1} e) at
// gamma = 1/4 (reachable only when d = 1).
inline ConstantValue c_wlh_star(double gamma, double lambda, double d) {
  if (!(d >= 1.0)) throw std::domain_error("c_wlh_star: requires d >= 1");
  if (!(gamma >= 0.25)) throw std::domain_error("c_wlh_star: requires gamma >= 1/4");
  const double ln_pi = 1.1447298858494001741;
  const double ln_two = 0.69314718055994530942;
  const double lgamma_half_d = specfun::ln_gamma(0.5 * d);
  if (gamma == 0.25) {
    const double lg = 2.0 * lgamma_half_d - ln_two - (d + 1.0) * ln_pi - 1.0;
    return from_log(lg, "wlh-radial-quarter");
  }
  if (!(lambda > 0.0)) throw std::domain_error("c_wlh_star: requires lambda > 0");
  const double fg = 4.0 * gamma;
  double lg = -std::log(fg);
  lg += lgamma_half_d / (2.0 * gamma);
  lg -= (ln_two + (d + 1.0) * ln_pi + 1.0) / fg;
  lg += (fg - 1.0) / fg * (std::log(fg - 1.0) - std::log(lambda));
  return from_log(lg, "wlh-radial");
}

// Sharp Sobolev constant S_*(d) for d > 2, in the gradient-quotient
// normalization:  S_*(d) = (pi d (d - 2))^{-1} (Gamma(d)/Gamma(d/2))^{2/d}.
inline ConstantValue sobolev_star(double d) {
  if (!(d > 2.0)) throw std::domain_error("sobolev_star: requires d > 2");
  const double ln_pi = 1.1447298858494001741;
  const double lg = -(ln_pi + std::log(d) + std::log(d - 2.0)) +
                    (2.0 / d) * (specfun::ln_gamma(d) - specfun::ln_gamma(0.5 * d));
  return from_log(lg, "sobolev-sharp");
}

// Sharp constant of the Euclidean logarithmic Sobolev inequality in the
// scale-invariant form used for the WLH comparison: 2 / (pi d e).
inline ConstantValue c_ls(double d) {
  if (!(d >= 1.0)) throw std::domain_error("c_ls: requires d >= 1");
  const double ln_pi = 1.1447298858494001741;
  const double ln_two = 0.69314718055994530942;
  return from_log(ln_two - ln_pi - std::log(d) - 1.0, "log-sobolev-sharp");
}

// Gaussian quotient h(p, d) = |nabla g|_2^{2 theta_min} |g|_2^{2(1-theta_min)}
// / |g|_p^2 for the unit-mass Gaussian g(x) = (2 pi)^{-d/4} exp(-|x|^2/4):
//
//   h(p, d) = (d/4)^{theta_min(d, p)} (2 pi)^{d/2} (p / (4 pi))^{d/p}.
//
// h(2, d) = 1 and h is smooth in p, which makes it the natural reference
// for the comparison quotient L below.
inline ConstantValue gaussian_h(double p, double d) {
  if (!(d >= 1.0)) throw std::domain_error("gaussian_h: requires d >= 1");
  if (!(p >= 2.0) || !(p < params::p_critical(d)))
    throw std::domain_error("gaussian_h: requires 2 <= p < 2d/(d-2)");
  const double ln_two_pi = 1.8378770664093454836;
  const double ln_four_pi = 2.5310242469692907930;
  const double vt = params::theta_min(d, p);
  const double lg = vt * std::log(0.25 * d) + 0.5 * d * ln_two_pi +
                    (d / p) * (std::log(p) - ln_four_pi);
  return from_log(lg, "gaussian-quotient");
}

// Gagliardo-Nirenberg comparison quotient
//
//   L(p, d) = h(p, d) * C*(theta_min, p, Lambda(a_-(p))) * |S^{d-1}|^{2/p-1}
//
// with Lambda(a_-(p)) = (2 (d-1)/(p+2))^2.  L < 1 certifies symmetry
// breaking at the corner point (theta_min(p, d), a_-(p)).
inline ConstantValue big_l(double p, double d) {
  if (!(d >= 2.0)) throw std::domain_error("big_l: requires d >= 2");
  if (!(p > 2.0) || !(p < params::p_critical(d)))
    throw std::domain_error("big_l: requires 2 < p < 2d/(d-2)");
  const double lam = std::pow(2.0 * (d - 1.0) / (p + 2.0), 2);
  const double vt = params::theta_min(d, p);
  const double lg = gaussian_h(p, d).log_value +
                    c_ckn_star(vt, p, lam).log_value +
                    (2.0 / p - 1.0) * specfun::ln_sphere_area(d);
  return from_log(lg, "gn-comparison");
}

// Slope ell(d) = d/dp log L(p, d) at p = 2, where L(2, d) = 1 exactly.
// One-sided finite differences of log L at 2 + delta with two Richardson
// levels; the step hierarchy {delta, delta/2, delta/4} with delta = 1e-4
// leaves an O(delta^2) truncation error after extrapolation, well below
// the 1e-6 scale that matters for the sign and limit studies.
inline double ell(double d) {
  if (!(d >= 2.0)) throw std::domain_error("ell: requires d >= 2");
  const double delta = 1e-4;
  auto f = [d](double h) { return big_l(2.0 + h, d).log_value / h; };
  const double a0 = f(delta);
  const double a1 = f(0.5 * delta);
  const double a2 = f(0.25 * delta);
  const double b0 = 2.0 * a1 - a0;
  const double b1 = 2.0 * a2 - a1;
  return (4.0 * b1 - b0) / 3.0;
}

}  // namespace cknsym::radial
