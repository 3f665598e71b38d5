#pragma once
// Symmetry / symmetry-breaking region geometry in the parameter plane,
// and the point classifier built on top of it.
//
// Boundary curves (all with a_c = (d-2)/2, Lambda = (a_c - a)^2):
//   a_fs(p)              Felli-Schneider curve at theta = 1
//   a_minus(p)           corner curve where theta_min meets the instability set
//   a_bar(theta, p)      linear-instability boundary for general theta
//   lambda_underline     = (a_c - a_bar)^2, same curve in Lambda coordinates
//   theta_big(a, p)      the same surface solved for theta
//   a_tilde, lambda_tilde  linear-instability boundary of the log-Hardy case
//   lambda_sb(gamma)     log-Sobolev comparison boundary of the log-Hardy case
//   schwarz_a0           largest-a root of the Schwarz comparison curve; to
//                        its right symmetry of minimizers is certified
//
// classify_ckn / classify_wlh report a verdict plus every mechanism that
// fires.  Margins follow the convention `parameter - boundary`: negative
// when the point sits on the broken side of an instability boundary,
// non-negative for the symmetric certificate; the comparison mechanisms
// report `quotient - 1` and `a - a(lambda_sb)` respectively.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cknsym/params.hpp"
#include "cknsym/radial_constants.hpp"

namespace cknsym::regions {

// ---------------------------------------------------------------------------
// boundary curves
// ---------------------------------------------------------------------------

// Felli-Schneider curve: a_fs(p) = a_c - 2 sqrt((d-1) / ((p+2)(p-2))).
// Tends to -infinity as p -> 2+, which the sentinel encodes.
inline double a_fs(double p, double d) {
  if (!(d >= 2.0)) throw std::domain_error("a_fs: requires d >= 2");
  if (!(p <= 2.0 || p < params::p_critical(d)))
    throw std::domain_error("a_fs: requires p < 2d/(d-2)");
  if (p <= 2.0) return -std::numeric_limits<double>::infinity();
  return params::a_critical(d) - 2.0 * std::sqrt((d - 1.0) / ((p + 2.0) * (p - 2.0)));
}

inline double a_minus(double p, double d) {
  if (!(d >= 2.0)) throw std::domain_error("a_minus: requires d >= 2");
  if (!(p > 2.0)) throw std::domain_error("a_minus: requires p > 2");
  return params::a_critical(d) - 2.0 * (d - 1.0) / (p + 2.0);
}

// Instability boundary for general theta:
//   a_bar(theta, p) = a_c - (2 sqrt(d-1)/(p+2)) sqrt(2 p theta/(p-2) - 1).
inline double a_bar(double theta, double p, double d) {
  if (!(d >= 2.0)) throw std::domain_error("a_bar: requires d >= 2");
  if (!(p > 2.0)) throw std::domain_error("a_bar: requires p > 2");
  const double r = 2.0 * p * theta / (p - 2.0) - 1.0;
  if (!(r >= 0.0))
    throw std::domain_error("a_bar: requires theta >= (p-2)/(2p)");
  return params::a_critical(d) - 2.0 * std::sqrt(d - 1.0) / (p + 2.0) * std::sqrt(r);
}

inline double lambda_underline(double theta, double p, double d) {
  const double gap = params::a_critical(d) - a_bar(theta, p, d);
  return gap * gap;
}

// The same surface solved for theta:
//   Theta(a, p) = (p-2)/(32 (d-1) p)
//                 * ((p+2)^2 (d^2 + 4 a^2 - 4 a (d-2)) - 4 p (p+4)(d-1)).
inline double theta_big(double a, double p, double d) {
  if (!(d >= 2.0)) throw std::domain_error("theta_big: requires d >= 2");
  if (!(p > 2.0)) throw std::domain_error("theta_big: requires p > 2");
  const double q = (p + 2.0) * (p + 2.0) * (d * d + 4.0 * a * a - 4.0 * a * (d - 2.0)) -
                   4.0 * p * (p + 4.0) * (d - 1.0);
  return (p - 2.0) / (32.0 * (d - 1.0) * p) * q;
}

// Log-Hardy instability boundary.
inline double a_tilde(double gamma, double d) {
  if (!(d >= 1.0)) throw std::domain_error("a_tilde: requires d >= 1");
  const double r = (d - 1.0) * (4.0 * gamma - 1.0);
  if (!(r >= 0.0)) throw std::domain_error("a_tilde: requires gamma >= 1/4");
  return params::a_critical(d) - 0.5 * std::sqrt(r);
}

inline double lambda_tilde(double gamma, double d) {
  if (!(d >= 1.0) || !(gamma >= 0.25))
    throw std::domain_error("lambda_tilde: requires d >= 1, gamma >= 1/4");
  return 0.25 * (d - 1.0) * (4.0 * gamma - 1.0);
}

// Log-Sobolev comparison boundary:
//   lambda_sb = (1/8)(4 gamma - 1) e (pi^{4 gamma - d - 1}/16)^{1/(4 gamma - 1)}
//               (d / gamma)^{4 gamma/(4 gamma - 1)} Gamma(d/2)^{2/(4 gamma - 1)}.
inline double ln_lambda_sb(double gamma, double d) {
  if (!(d >= 1.0)) throw std::domain_error("lambda_sb: requires d >= 1");
  if (!(gamma > 0.25)) throw std::domain_error("lambda_sb: requires gamma > 1/4");
  const double ln_pi = 1.1447298858494001741;
  const double f = 4.0 * gamma - 1.0;
  double lg = std::log(f) - std::log(8.0) + 1.0;
  lg += ((4.0 * gamma - d - 1.0) * ln_pi - std::log(16.0)) / f;
  lg += (4.0 * gamma / f) * (std::log(d) - std::log(gamma));
  lg += 2.0 / f * specfun::ln_gamma(0.5 * d);
  return lg;
}

inline double lambda_sb(double gamma, double d) {
  return std::exp(ln_lambda_sb(gamma, d));
}

// ---------------------------------------------------------------------------
// gamma interval where the log-Sobolev comparison beats linear instability
// ---------------------------------------------------------------------------

namespace detail {

inline double bisect(const std::function<double(double)>& f, double lo,
                     double hi, double flo, double tol) {
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// Roots of lambda_sb(gamma) = lambda_tilde(gamma) above gamma = d/4 (above
// 1/2 when d = 2).  Between the two roots the comparison mechanism fires
// strictly before linear instability.  Empty when the curves never cross
// (d >= 5).
inline std::optional<std::pair<double, double>> gamma_sb_interval(double d) {
  if (!(d >= 2.0)) throw std::domain_error("gamma_sb_interval: requires d >= 2");
  const double lo_edge = (d == 2.0) ? 0.5 : 0.25 * d;
  auto r = [d](double g) { return ln_lambda_sb(g, d) - std::log(lambda_tilde(g, d)); };

  std::vector<double> roots;
  // dense scan near the lower edge, log-spaced continuation to 1000
  double prev_g = lo_edge + 1e-7;
  double prev_r = r(prev_g);
  auto scan_to = [&](double g) {
    const double rv = r(g);
    if ((rv > 0.0) != (prev_r > 0.0))
      roots.push_back(detail::bisect(r, prev_g, g, prev_r, 1e-8));
    prev_g = g;
    prev_r = rv;
  };
  for (int i = 1; i <= 4000; ++i) scan_to(lo_edge + 1e-7 + i * (10.0 / 4000.0));
  const double g_top = 1000.0;
  const int n_log = 2000;
  const double l0 = std::log(lo_edge + 10.0), l1 = std::log(g_top);
  for (int i = 1; i <= n_log; ++i) scan_to(std::exp(l0 + (l1 - l0) * i / n_log));

  if (roots.empty()) return std::nullopt;
  if (roots.size() != 2)
    throw std::runtime_error("gamma_sb_interval: unexpected root structure");
  return std::make_pair(roots[0], roots[1]);
}

// ---------------------------------------------------------------------------
// Schwarz comparison curve
// ---------------------------------------------------------------------------

enum class SchwarzStatus { bracketed_root, all_positive, all_negative };

struct SchwarzRoot {
  SchwarzStatus status = SchwarzStatus::all_negative;
  double a0 = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

// Sign function Phi(a) of the Schwarz comparison: positive where symmetry
// of minimizers is certified.  With T1(a) = (theta a_c^2 - (a_c-a)^2)/(1-theta),
//
//   Phi(a) = (T1 + Lambda(a))^theta
//            - S_*^{theta_min} / (C*(theta, p, 1) |S^{d-1}|^{2/p-1})
//              * (a_c - a)^{2 theta - (p-2)/p} * (T1 + a_c^2)^{theta_min},
//
// defined on the feasibility window Lambda(a) < theta a_c^2.
struct SchwarzCurve {
  double theta, p, d;
  double ac, vt, ln_k;

  SchwarzCurve(double theta_, double p_, double d_)
      : theta(theta_), p(p_), d(d_) {
    ac = params::a_critical(d);
    vt = params::theta_min(d, p);
    ln_k = vt * radial::sobolev_star(d).log_value -
           radial::c_ckn_star(theta, p, 1.0).log_value -
           (2.0 / p - 1.0) * specfun::ln_sphere_area(d);
  }

  double operator()(double a) const {
    const double gap = ac - a;
    const double lam = gap * gap;
    const double t1 = (theta * ac * ac - lam) / (1.0 - theta);
    const double first = theta * std::log(t1 + lam);
    const double second = ln_k + (2.0 * theta - (p - 2.0) / p) * std::log(gap) +
                          vt * std::log(t1 + ac * ac);
    // compare in log space, return the sign-carrying difference
    return first - second;
  }
};

}  // namespace detail

// Largest root a0 of the Schwarz comparison curve in (a_c (1 - sqrt(theta)), a_c).
// For a in (a0, a_c) minimizers are symmetric.  all_positive: the whole
// feasible window is certified (a0 = its left edge); all_negative: no
// certificate from this mechanism.
inline SchwarzRoot schwarz_a0(double theta, double p, double d) {
  if (!(d >= 3.0)) throw std::domain_error("schwarz_a0: requires d >= 3");
  if (!(p > 2.0 && p < params::p_critical(d)))
    throw std::domain_error("schwarz_a0: requires 2 < p < 2d/(d-2)");
  if (!(theta > params::theta_min(d, p) - 1e-14 && theta < 1.0))
    throw std::domain_error("schwarz_a0: requires theta_min <= theta < 1");

  const double ac = params::a_critical(d);
  const double lo = ac * (1.0 - std::sqrt(theta)) + 1e-12;
  const double hi = ac - 1e-12;
  detail::SchwarzCurve phi(theta, p, d);

  const int n = 512;
  double prev_a = lo, prev_phi = phi(lo);
  bool any_pos = prev_phi > 0.0, any_neg = !any_pos;
  double last_cross_lo = 0.0, last_cross_hi = 0.0, last_cross_flo = 0.0;
  bool crossed = false;
  for (int i = 1; i <= n; ++i) {
    const double a = lo + (hi - lo) * i / n;
    const double f = phi(a);
    if (f > 0.0)
      any_pos = true;
    else
      any_neg = true;
    if ((f > 0.0) != (prev_phi > 0.0) && prev_phi <= 0.0) {
      last_cross_lo = prev_a;
      last_cross_hi = a;
      last_cross_flo = prev_phi;
      crossed = true;
    }
    prev_a = a;
    prev_phi = f;
  }

  SchwarzRoot out;
  if (crossed) {
    out.status = SchwarzStatus::bracketed_root;
    out.a0 = detail::bisect([&phi](double a) { return phi(a); }, last_cross_lo,
                            last_cross_hi, last_cross_flo, 1e-10);
  } else if (any_pos && !any_neg) {
    out.status = SchwarzStatus::all_positive;
    out.a0 = lo;
  } else {
    out.status = SchwarzStatus::all_negative;
  }
  return out;
}

// ---------------------------------------------------------------------------
// point classification
// ---------------------------------------------------------------------------

enum class Verdict { symmetric_proven, broken_proven, undetermined };

enum class Mechanism {
  schwarz_curve,
  linear_instability,
  gn_comparison,
  ls_comparison,
};

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::symmetric_proven: return "SymmetricProven";
    case Verdict::broken_proven: return "BrokenProven";
    default: return "Undetermined";
  }
}

inline const char* mechanism_name(Mechanism m) {
  switch (m) {
    case Mechanism::schwarz_curve: return "SchwarzCurve";
    case Mechanism::linear_instability: return "LinearInstability";
    case Mechanism::gn_comparison: return "GNComparison";
    default: return "LSComparison";
  }
}

struct MechanismMargin {
  Mechanism mechanism;
  double margin;
};

struct RegionVerdict {
  Verdict verdict = Verdict::undetermined;
  std::vector<MechanismMargin> fired;
  // named auxiliary boundary values, for reporting
  std::vector<std::pair<std::string, double>> boundaries;

  bool has(Mechanism m) const {
    for (const auto& f : fired)
      if (f.mechanism == m) return true;
    return false;
  }
};

inline RegionVerdict classify_ckn(double theta, double p, double a, double d) {
  if (!(d >= 2.0)) throw std::domain_error("classify_ckn: requires d >= 2");
  if (!(p > 2.0 && p < params::p_critical(d)))
    throw std::domain_error("classify_ckn: requires 2 < p < 2d/(d-2)");
  const double vt = params::theta_min(d, p);
  if (!(theta >= vt - 1e-14 && theta <= 1.0))
    throw std::domain_error("classify_ckn: requires theta_min <= theta <= 1");
  if (!(a < params::a_critical(d)))
    throw std::domain_error("classify_ckn: requires a < (d-2)/2");

  RegionVerdict out;
  bool broken = false, symmetric = false;

  const double ab = a_bar(std::max(theta, vt), p, d);
  out.boundaries.emplace_back("a_bar", ab);
  if (a < ab) {
    out.fired.push_back({Mechanism::linear_instability, a - ab});
    broken = true;
  }

  // Gagliardo-Nirenberg comparison applies at the exact corner point.
  const double am = a_minus(p, d);
  const double rel = 1e-12;
  if (std::abs(theta - vt) <= rel * std::max(1.0, vt) &&
      std::abs(a - am) <= rel * std::max(1.0, std::abs(am))) {
    const double lv = radial::big_l(p, d).value;
    out.boundaries.emplace_back("big_l", lv);
    if (lv < 1.0) {
      out.fired.push_back({Mechanism::gn_comparison, lv - 1.0});
      broken = true;
    }
  }

  if (d >= 3.0 && theta < 1.0 && theta >= vt) {
    const double ac = params::a_critical(d);
    if (params::lambda_of_a(d, a) < theta * ac * ac) {
      const SchwarzRoot root = schwarz_a0(theta, p, d);
      if (root.status != SchwarzStatus::all_negative) {
        out.boundaries.emplace_back("a0", root.a0);
        if (a >= root.a0) {
          out.fired.push_back({Mechanism::schwarz_curve, a - root.a0});
          symmetric = true;
        }
      }
    }
  }

  if (symmetric && broken)
    throw std::logic_error("classify_ckn: symmetric and broken certificates both fired");
  out.verdict = symmetric  ? Verdict::symmetric_proven
                : broken   ? Verdict::broken_proven
                           : Verdict::undetermined;
  return out;
}

inline RegionVerdict classify_wlh(double gamma, double a, double d) {
  const params::Verdict adm = params::validate_wlh(d, gamma, a);
  if (!adm)
    throw std::domain_error("classify_wlh: inadmissible parameters: " + adm.violated);

  RegionVerdict out;
  bool broken = false;
  const double lam = params::lambda_of_a(d, a);

  const double lt = lambda_tilde(gamma, d);
  out.boundaries.emplace_back("lambda_tilde", lt);
  if (lam > lt) {
    out.fired.push_back({Mechanism::linear_instability, a - a_tilde(gamma, d)});
    broken = true;
  }

  if (gamma > 0.25) {
    const double lsb = lambda_sb(gamma, d);
    out.boundaries.emplace_back("lambda_sb", lsb);
    if (lam > lsb) {
      out.fired.push_back({Mechanism::ls_comparison, a - params::a_of_lambda(d, lsb)});
      broken = true;
    }
  } else {
    // gamma = 1/4 (d = 1): the comparison boundary degenerates to Lambda = 0
    out.boundaries.emplace_back("lambda_sb", 0.0);
    out.fired.push_back({Mechanism::ls_comparison, a - params::a_critical(d)});
    broken = true;
  }

  out.verdict = broken ? Verdict::broken_proven : Verdict::undetermined;
  return out;
}

// ---------------------------------------------------------------------------
// rectangular parameter sweeps (pure computation; rendering lives in the CLI)
// ---------------------------------------------------------------------------

struct SweepAxis {
  std::string name;  // one of theta, p, a, lambda, gamma, d
  double lo = 0.0, hi = 0.0;
  int count = 1;

  double at(int i) const {
    if (count <= 1) return lo;
    return lo + (hi - lo) * i / (count - 1.0);
  }
};

struct SweepRequest {
  std::string kind;  // "ckn" or "wlh"
  std::vector<std::pair<std::string, double>> fixed;
  SweepAxis axis1, axis2;
};

struct SweepRow {
  double v1 = 0.0, v2 = 0.0;
  bool ok = false;
  std::string error;
  RegionVerdict verdict;
};

namespace detail {

inline double lookup(const std::vector<std::pair<std::string, double>>& kv,
                     const std::string& key, bool& found) {
  for (const auto& [k, v] : kv)
    if (k == key) {
      found = true;
      return v;
    }
  found = false;
  return std::numeric_limits<double>::quiet_NaN();
}

inline RegionVerdict classify_from_map(
    const std::string& kind,
    const std::vector<std::pair<std::string, double>>& kv) {
  bool has_a = false, has_lam = false, has_d = false;
  const double d = lookup(kv, "d", has_d);
  if (!has_d) throw std::domain_error("sweep: missing parameter d");
  double a = lookup(kv, "a", has_a);
  const double lam = lookup(kv, "lambda", has_lam);
  if (!has_a) {
    if (!has_lam) throw std::domain_error("sweep: missing parameter a or lambda");
    a = params::a_of_lambda(d, lam);
  }
  if (kind == "ckn") {
    bool has_theta = false, has_p = false;
    const double theta = lookup(kv, "theta", has_theta);
    const double p = lookup(kv, "p", has_p);
    if (!has_theta || !has_p)
      throw std::domain_error("sweep: ckn needs theta and p");
    return classify_ckn(theta, p, a, d);
  }
  if (kind == "wlh") {
    bool has_gamma = false;
    const double gamma = lookup(kv, "gamma", has_gamma);
    if (!has_gamma) throw std::domain_error("sweep: wlh needs gamma");
    return classify_wlh(gamma, a, d);
  }
  throw std::domain_error("sweep: kind must be ckn or wlh");
}

}  // namespace detail

// Row-major over axis1 (outer) and axis2 (inner); per-point failures are
// recorded in the row, never thrown.
inline std::vector<SweepRow> sweep(const SweepRequest& req, int max_threads = 1) {
  const long n1 = std::max(1, req.axis1.count);
  const long n2 = std::max(1, req.axis2.count);
  std::vector<SweepRow> rows(static_cast<size_t>(n1 * n2));

  auto run_chunk = [&](long begin, long end) {
    for (long idx = begin; idx < end; ++idx) {
      const long i = idx / n2, j = idx % n2;
      SweepRow& row = rows[static_cast<size_t>(idx)];
      row.v1 = req.axis1.at(static_cast<int>(i));
      row.v2 = req.axis2.at(static_cast<int>(j));
      auto kv = req.fixed;
      kv.emplace_back(req.axis1.name, row.v1);
      kv.emplace_back(req.axis2.name, row.v2);
      try {
        row.verdict = detail::classify_from_map(req.kind, kv);
        row.ok = true;
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
      }
    }
  };

  const long total = n1 * n2;
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int nt = std::clamp(max_threads, 1, std::max(1, hw));
  if (nt <= 1 || total < 64) {
    run_chunk(0, total);
  } else {
    std::vector<std::thread> pool;
    const long chunk = (total + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
      const long b = t * chunk, e = std::min(total, b + chunk);
      if (b >= e) break;
      pool.emplace_back(run_chunk, b, e);
    }
    for (auto& th : pool) th.join();
  }
  return rows;
}

}  // namespace cknsym::regions
