#pragma once
// Parameter arithmetic shared by every other module.
//
// Conventions: the dimension d is a real number >= 1 everywhere (integer in
// applications, real internally so curves can be differentiated in d);
// Lambda = (a - a_c)^2 is the canonical coordinate normal to the symmetry
// axis, with a_c = (d - 2)/2; exponents p and interpolation parameters
// theta/gamma are plain doubles.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cknsym::params {

inline double a_critical(double d) { return 0.5 * (d - 2.0); }

// Critical exponent 2d/(d-2) for d > 2, +infinity otherwise.
inline double p_critical(double d) {
  if (d > 2.0) return 2.0 * d / (d - 2.0);
  return std::numeric_limits<double>::infinity();
}

// Scale-balance exponent theta_min = d (p - 2) / (2 p); the smallest theta
// for which the interpolation inequality can hold.
inline double theta_min(double d, double p) {
  if (!(d >= 1.0)) throw std::domain_error("theta_min: requires d >= 1");
  if (!(p >= 2.0)) throw std::domain_error("theta_min: requires p >= 2");
  return d * (p - 2.0) / (2.0 * p);
}

inline double lambda_of_a(double d, double a) {
  const double t = a - a_critical(d);
  return t * t;
}

// Inverse of lambda_of_a on the symmetric side a < a_c.
inline double a_of_lambda(double d, double lambda) {
  if (!(lambda >= 0.0))
    throw std::domain_error("a_of_lambda: requires lambda >= 0");
  return a_critical(d) - std::sqrt(lambda);
}

// b determined by (a, p) through p = 2d / (d - 2 + 2(b - a)).
inline double b_of(double d, double a, double p) {
  if (!(p > 0.0)) throw std::domain_error("b_of: requires p > 0");
  return a + d / p - 0.5 * (d - 2.0);
}

inline double p_of(double d, double a, double b) {
  const double denom = d - 2.0 + 2.0 * (b - a);
  if (!(denom > 0.0))
    throw std::domain_error("p_of: d - 2 + 2(b - a) must be positive");
  return 2.0 * d / denom;
}

struct CknParams {
  double d;
  double p;
  double theta;
  double a;
  double b;
  double lambda;
};

inline CknParams make_ckn(double d, double theta, double p, double lambda) {
  CknParams q;
  q.d = d;
  q.theta = theta;
  q.p = p;
  q.lambda = lambda;
  q.a = a_of_lambda(d, lambda);
  q.b = b_of(d, q.a, p);
  return q;
}

inline CknParams make_ckn_ab(double d, double theta, double a, double b) {
  CknParams q;
  q.d = d;
  q.theta = theta;
  q.a = a;
  q.b = b;
  q.p = p_of(d, a, b);
  q.lambda = lambda_of_a(d, a);
  return q;
}

struct WlhParams {
  double d;
  double gamma;
  double a;
  double lambda;
};

inline WlhParams make_wlh(double d, double gamma, double lambda) {
  WlhParams q;
  q.d = d;
  q.gamma = gamma;
  q.lambda = lambda;
  q.a = a_of_lambda(d, lambda);
  return q;
}

// Admissibility verdict.  `ok` says whether the parameter point lies in the
// validity region of the inequality at all; `minimization_supported` is
// false on boundary cases (p = 2 or p = 2*, theta = theta_min with a < 0,
// d = 1) where the constant is still defined but the cylinder solver is not
// expected to attain it.
struct Verdict {
  bool ok = true;
  bool minimization_supported = true;
  std::string violated;  // name of the first violated condition, or empty

  explicit operator bool() const { return ok; }
};

namespace detail {
inline Verdict reject(const char* what) {
  Verdict v;
  v.ok = false;
  v.minimization_supported = false;
  v.violated = what;
  return v;
}
}  // namespace detail

// theta is optional; pass NaN to validate the (a, b) box alone.
inline Verdict validate_ckn(double d, double a, double b,
                            double theta = std::numeric_limits<double>::quiet_NaN()) {
  using detail::reject;
  if (!(d >= 1.0)) return reject("d >= 1");
  const double ac = a_critical(d);
  if (!(a < ac)) return reject("a < (d-2)/2");
  if (d < 2.0) {
    if (!(b > a + 0.5 && b <= a + 1.0)) return reject("a + 1/2 < b <= a + 1");
  } else if (d < 3.0) {
    if (!(b > a && b <= a + 1.0)) return reject("a < b <= a + 1");
  } else {
    if (!(b >= a && b <= a + 1.0)) return reject("a <= b <= a + 1");
  }
  const double p = p_of(d, a, b);
  Verdict v;
  if (std::isfinite(theta)) {
    const double tmin = theta_min(d, p);
    if (!(theta <= 1.0)) return reject("theta <= 1");
    if (!(theta >= tmin)) return reject("theta >= theta_min(d, p)");
    if (theta == tmin && a < 0.0) v.minimization_supported = false;
  }
  // Boundary exponents: representable, but no minimizer is sought there.
  const double pc = p_critical(d);
  if (p <= 2.0 || p >= pc) v.minimization_supported = false;
  if (d < 2.0) v.minimization_supported = false;
  return v;
}

inline Verdict validate_ckn(const CknParams& q) {
  return validate_ckn(q.d, q.a, q.b, q.theta);
}

inline Verdict validate_wlh(double d, double gamma, double a) {
  using detail::reject;
  if (!(d >= 1.0)) return reject("d >= 1");
  if (!(a < a_critical(d))) return reject("a < (d-2)/2");
  if (d == 2.0) {
    if (!(gamma > 0.5)) return reject("gamma > 1/2 when d = 2");
  } else {
    if (!(gamma >= 0.25 * d)) return reject("gamma >= d/4");
  }
  Verdict v;
  if (d < 2.0) v.minimization_supported = false;
  return v;
}

inline Verdict validate_wlh(const WlhParams& q) {
  return validate_wlh(q.d, q.gamma, q.a);
}

}  // namespace cknsym::params
