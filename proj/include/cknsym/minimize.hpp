#pragma once
// Direct minimization of the cylinder functionals and everything built on
// top of it: the radial (one-dimensional) minimizers, the full two-variable
// minimizers, the lowest eigenvalue of the linearization around a radial
// minimizer, and the grid-refinement symmetry-breaking witness.
//
// The engine is projected nonlinear conjugate gradient (Polak-Ribiere with
// restarts, Armijo backtracking) on log F / log G.  Both functionals are
// scale-invariant, so the gradient is exactly orthogonal to the field and
// the iteration lives on the unit-mass manifold up to occasional explicit
// renormalization.  Dirichlet values at s = +-s_max are pinned to zero.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "cknsym/cylinder.hpp"

namespace cknsym::cylinder {

struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MinimizeOptions {
  long max_iterations = 50000;
  double value_stall_tol = 1e-10;  // absolute stall threshold on the value
  double grad_tol = 1e-8;          // dual-norm threshold on grad log(functional)
  int stall_runs = 3;
  bool dirichlet = true;
  // Invoked on every accepted iterate (double-precision runs only);
  // intended for instrumentation and invariance tests.
  std::function<void(const Eigen::MatrixXd&)> on_iterate;
};

template <class Scalar>
struct MinimizationResult {
  Scalar value = 0;
  Scalar log_value = 0;
  Scalar t = 0;  // (E_s + E_phi) / M2 at the minimizer
  Mat<Scalar> profile;
  long iterations = 0;
  bool converged = false;
  Scalar angular_fraction = 0;
  Scalar s_symmetry_residual = 0;
  Scalar el_residual = 0;  // dual norm of the first variation of log(functional)
};

namespace detail {

// Dual (L2-against-the-measure) norm of a gradient with respect to field
// values: g stores m * residual, so the residual norm is sqrt(sum g^2 / m).
template <class Scalar>
Scalar dual_norm(const CylinderGrid<Scalar>& g, const Vec<Scalar>& aw,
                 const Mat<Scalar>& grad) {
  Scalar acc = 0;
  for (int j = 0; j < g.n_phi; ++j)
    for (int i = 0; i < g.n_s; ++i) {
      const Scalar m = g.s_weights[i] * aw[j];
      acc += grad(i, j) * grad(i, j) / m;
    }
  return std::sqrt(acc);
}

template <class Scalar, class EvalLn, class GradLn>
MinimizationResult<Scalar> ncg(const CylinderGrid<Scalar>& g,
                               const Vec<Scalar>& aw, Mat<Scalar> w,
                               EvalLn&& eval_ln, GradLn&& grad_ln,
                               const MinimizeOptions& opts) {
  auto project = [&](Mat<Scalar>& m) {
    if (opts.dirichlet) {
      m.row(0).setZero();
      m.row(g.n_s - 1).setZero();
    }
  };
  auto mass = [&](const Mat<Scalar>& m) -> Scalar {
    return g.s_weights.dot(m.cwiseAbs2() * aw);
  };

  project(w);
  {
    const Scalar m2 = mass(w);
    if (!(m2 > 0)) throw std::domain_error("minimize: zero initial field");
    w /= std::sqrt(m2);
  }

  Scalar h = eval_ln(w);
  Mat<Scalar> grad = grad_ln(w);
  project(grad);
  Mat<Scalar> dir = -grad;
  Scalar gg = grad.squaredNorm();
  Scalar value = std::exp(h);
  Scalar alpha = 1 / std::max<Scalar>(1, std::sqrt(gg));
  int stall = 0;
  bool converged = false;
  long it = 0;

  Mat<Scalar> w_try;
  for (; it < opts.max_iterations; ++it) {
    const Scalar el = dual_norm(g, aw, grad);
    if (el <= Scalar(opts.grad_tol) && stall >= opts.stall_runs) {
      converged = true;
      break;
    }

    Scalar gd = grad.cwiseProduct(dir).sum();
    if (!(gd < 0)) {
      dir = -grad;
      gd = -gg;
    }

    // Armijo backtracking on log(functional)
    Scalar a = alpha;
    Scalar h_try = h;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      w_try = w + a * dir;
      h_try = eval_ln(w_try);
      if (std::isfinite(h_try) && h_try <= h + Scalar(1e-4) * a * gd) {
        accepted = true;
        break;
      }
      a /= 2;
    }
    if (!accepted) {
      if ((dir + grad).norm() > 0) {  // was a CG direction: restart once
        dir = -grad;
        gg = grad.squaredNorm();
        alpha = 1 / std::max<Scalar>(1, std::sqrt(gg));
        continue;
      }
      converged = el <= Scalar(opts.grad_tol);
      break;
    }

    w.swap(w_try);
    // keep the iterate well scaled; the functional itself is scale-free
    const Scalar m2 = mass(w);
    if (m2 > 4 || m2 < Scalar(0.25)) w /= std::sqrt(m2);
    if constexpr (std::is_same_v<Scalar, double>) {
      if (opts.on_iterate) opts.on_iterate(w);
    }

    Mat<Scalar> grad_new = grad_ln(w);
    project(grad_new);
    const Scalar beta = std::max<Scalar>(
        0, grad_new.cwiseProduct(grad_new - grad).sum() / gg);
    dir = -grad_new + beta * dir;
    grad.swap(grad_new);
    gg = grad.squaredNorm();

    const Scalar value_new = std::exp(h_try);
    stall = (std::abs(value_new - value) < Scalar(opts.value_stall_tol))
                ? stall + 1
                : 0;
    value = value_new;
    h = h_try;
    alpha = std::min<Scalar>(a * 4, Scalar(1e6));
  }

  MinimizationResult<Scalar> out;
  {
    const Scalar m2 = mass(w);
    w /= std::sqrt(m2);
  }
  out.profile = std::move(w);
  out.log_value = eval_ln(out.profile);
  out.value = std::exp(out.log_value);
  out.iterations = it;
  out.converged = converged;
  Mat<Scalar> gfin = grad_ln(out.profile);
  project(gfin);
  out.el_residual = dual_norm(g, aw, gfin);
  return out;
}

// log cosh without overflow
template <class Scalar>
Scalar ln_cosh(Scalar x) {
  const Scalar ax = std::abs(x);
  return ax + std::log1p(std::exp(-2 * ax)) - Scalar(0.6931471805599453094);
}

// Soliton-shaped radial seed for the F problem.
template <class Scalar>
Vec<Scalar> cosh_seed(const CylinderGrid<Scalar>& g, Scalar theta, Scalar p,
                      Scalar lambda) {
  const Scalar kappa = (p - 2) / 2 * std::sqrt(lambda / theta);
  Vec<Scalar> w(g.n_s);
  for (int i = 0; i < g.n_s; ++i)
    w[i] = std::exp(-(2 / (p - 2)) * ln_cosh(kappa * g.s_nodes[i]));
  return w;
}

// Gaussian radial seed for the G problem.
template <class Scalar>
Vec<Scalar> gaussian_seed(const CylinderGrid<Scalar>& g, Scalar gamma,
                          Scalar lambda) {
  const Scalar a = 2 * lambda / std::max<Scalar>(4 * gamma - 1, Scalar(0.1));
  Vec<Scalar> w(g.n_s);
  for (int i = 0; i < g.n_s; ++i)
    w[i] = std::exp(-a * g.s_nodes[i] * g.s_nodes[i] / 2);
  return w;
}

template <class Scalar>
void finish_diagnostics(const CylinderGrid<Scalar>& g, const Vec<Scalar>& aw,
                        MinimizationResult<Scalar>& r) {
  const Parts<Scalar> q = parts(g, r.profile, aw, false, Scalar(0), false);
  r.t = (q.es + q.ephi) / q.m2;
  if (g.n_phi > 1) {
    const SymmetryDiagnostics<Scalar> sd = symmetry_diagnostics(g, r.profile);
    r.angular_fraction = sd.angular_fraction;
    r.s_symmetry_residual = sd.s_symmetry_residual;
  } else {
    r.angular_fraction = 0;
    SymmetryDiagnostics<Scalar> sd = symmetry_diagnostics(g, r.profile);
    r.s_symmetry_residual = sd.s_symmetry_residual;
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// minimizers
// ---------------------------------------------------------------------------

enum class Init { radial, perturbed, supplied };

template <class Scalar>
MinimizationResult<Scalar> minimize_f(const CylinderGrid<Scalar>& g,
                                      Scalar theta, Scalar p, Scalar lambda,
                                      Init init = Init::perturbed,
                                      const Mat<Scalar>* supplied = nullptr,
                                      const MinimizeOptions& opts = {}) {
  if (!(theta > 0 && theta <= 1 && p > 2 && lambda > 0))
    throw std::domain_error("minimize_f: requires 0 < theta <= 1, p > 2, lambda > 0");
  const Vec<Scalar> aw = angular_weights_f(g);

  Mat<Scalar> w0(g.n_s, g.n_phi);
  if (init == Init::supplied) {
    if (!supplied) throw std::domain_error("minimize_f: missing supplied field");
    w0 = *supplied;
  } else {
    const Vec<Scalar> seed = detail::cosh_seed(g, theta, p, lambda);
    for (int j = 0; j < g.n_phi; ++j) w0.col(j) = seed;
    if (init == Init::perturbed && g.n_phi > 1)
      for (int j = 0; j < g.n_phi; ++j)
        w0.col(j) *= 1 + Scalar(0.1) * std::cos(g.phi_nodes[j]);
  }

  auto eval = [&](const Mat<Scalar>& w) { return eval_ln_f(g, w, theta, p, lambda); };
  auto grad = [&](const Mat<Scalar>& w) { return grad_ln_f(g, w, theta, p, lambda); };
  MinimizationResult<Scalar> r = detail::ncg(g, aw, std::move(w0), eval, grad, opts);
  detail::finish_diagnostics(g, aw, r);
  return r;
}

template <class Scalar>
MinimizationResult<Scalar> minimize_radial_f(const CylinderGrid<Scalar>& g,
                                             Scalar theta, Scalar p,
                                             Scalar lambda,
                                             const MinimizeOptions& opts = {}) {
  if (g.n_phi != 1)
    throw std::domain_error("minimize_radial_f: grid must have n_phi = 1");
  return minimize_f(g, theta, p, lambda, Init::radial, nullptr, opts);
}

template <class Scalar>
MinimizationResult<Scalar> minimize_g(const CylinderGrid<Scalar>& g,
                                      Scalar gamma, Scalar lambda,
                                      Init init = Init::perturbed,
                                      const Mat<Scalar>* supplied = nullptr,
                                      const MinimizeOptions& opts = {}) {
  if (!(gamma >= 0.25 && lambda > 0))
    throw std::domain_error("minimize_g: requires gamma >= 1/4, lambda > 0");
  const Vec<Scalar> aw = angular_weights_g(g);

  Mat<Scalar> w0(g.n_s, g.n_phi);
  if (init == Init::supplied) {
    if (!supplied) throw std::domain_error("minimize_g: missing supplied field");
    w0 = *supplied;
  } else {
    const Vec<Scalar> seed = detail::gaussian_seed(g, gamma, lambda);
    for (int j = 0; j < g.n_phi; ++j) w0.col(j) = seed;
    if (init == Init::perturbed && g.n_phi > 1)
      for (int j = 0; j < g.n_phi; ++j)
        w0.col(j) *= 1 + Scalar(0.1) * std::cos(g.phi_nodes[j]);
  }

  auto eval = [&](const Mat<Scalar>& w) { return eval_ln_g(g, w, gamma, lambda); };
  auto grad = [&](const Mat<Scalar>& w) { return grad_ln_g(g, w, gamma, lambda); };
  MinimizationResult<Scalar> r = detail::ncg(g, aw, std::move(w0), eval, grad, opts);
  detail::finish_diagnostics(g, aw, r);
  return r;
}

template <class Scalar>
MinimizationResult<Scalar> minimize_radial_g(const CylinderGrid<Scalar>& g,
                                             Scalar gamma, Scalar lambda,
                                             const MinimizeOptions& opts = {}) {
  if (g.n_phi != 1)
    throw std::domain_error("minimize_radial_g: grid must have n_phi = 1");
  return minimize_g(g, gamma, lambda, Init::radial, nullptr, opts);
}

// ---------------------------------------------------------------------------
// linearization around a radial minimizer
// ---------------------------------------------------------------------------

namespace detail {

// Smallest eigenvalue of a symmetric tridiagonal matrix with constant
// off-diagonal, by Sturm-sequence bisection.
template <class Scalar>
Scalar tridiag_smallest_eig(const Vec<Scalar>& diag, Scalar off) {
  const int n = static_cast<int>(diag.size());
  Scalar lo = diag[0], hi = diag[0];
  for (int i = 0; i < n; ++i) {
    lo = std::min(lo, diag[i]);
    hi = std::max(hi, diag[i]);
  }
  lo -= 2 * std::abs(off);
  hi += 2 * std::abs(off);

  const Scalar off2 = off * off;
  auto count_below = [&](Scalar x) {
    int cnt = 0;
    Scalar d = diag[0] - x;
    if (d < 0) ++cnt;
    for (int i = 1; i < n; ++i) {
      if (d == 0) d = Scalar(-1e-300);
      d = diag[i] - x - off2 / d;
      if (d < 0) ++cnt;
    }
    return cnt;
  };

  const Scalar tol = Scalar(1e-11) * std::max<Scalar>(1, std::abs(hi) + std::abs(lo));
  while (hi - lo > tol) {
    const Scalar mid = (lo + hi) / 2;
    if (count_below(mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return (lo + hi) / 2;
}

}  // namespace detail

// Lowest eigenvalue of the linearization of the F problem around a radial
// profile, restricted to the first angular harmonic:
//
//   L1 = -theta d^2/ds^2 + theta (d-1) + (1-theta) t + Lambda
//        - (p-1) (t + Lambda)^{1-theta} w^{p-2},
//
// with Dirichlet conditions at s = +-s_max.  The profile is rescaled
// internally to the normalization Sp = (t + Lambda)^theta M2 under which
// the radial Euler-Lagrange equation carries exactly this nonlinearity, so
// any nonzero multiple of the minimizer may be passed in.  Negative return
// value certifies linear instability of the symmetric critical point.
template <class Scalar>
Scalar linearization_lowest_eigenvalue(const CylinderGrid<Scalar>& g,
                                       const Vec<Scalar>& w_radial,
                                       Scalar theta, Scalar p, Scalar lambda) {
  if (w_radial.size() != g.n_s)
    throw std::domain_error("linearization: profile size does not match grid");
  if (!(theta > 0 && theta <= 1 && p > 2 && lambda > 0))
    throw std::domain_error("linearization: invalid parameters");

  // s-only integrals (the single angular weight cancels in every ratio)
  Scalar es = 0, m2 = 0, sp = 0;
  for (int i = 0; i + 1 < g.n_s; ++i) {
    const Scalar dw = w_radial[i + 1] - w_radial[i];
    es += dw * dw / g.ds;
  }
  for (int i = 0; i < g.n_s; ++i) {
    m2 += g.s_weights[i] * w_radial[i] * w_radial[i];
    sp += g.s_weights[i] * std::pow(std::abs(w_radial[i]), p);
  }
  if (!(m2 > 0 && sp > 0))
    throw std::domain_error("linearization: degenerate profile");

  const Scalar t = es / m2;
  const Scalar tl = t + lambda;
  // rescale so that Sp = (t + lambda)^theta M2
  const Scalar c = std::pow(std::pow(tl, theta) * m2 / sp, 1 / (p - 2));

  const int n = g.n_s - 2;  // interior nodes
  Vec<Scalar> diag(n);
  const Scalar base = 2 * theta / (g.ds * g.ds) + theta * (g.d - 1) +
                      (1 - theta) * t + lambda;
  const Scalar amp = (p - 1) * std::pow(tl, 1 - theta);
  for (int i = 0; i < n; ++i) {
    const Scalar wv = std::abs(c * w_radial[i + 1]);
    diag[i] = base - amp * std::pow(wv, p - 2);
  }
  return detail::tridiag_smallest_eig(diag, -theta / (g.ds * g.ds));
}

// ---------------------------------------------------------------------------
// symmetry-breaking witness
// ---------------------------------------------------------------------------

enum class WitnessKind { ckn, wlh };
enum class WitnessOutcome { broken, not_observed };

struct WitnessLevel {
  int n_s = 0, n_phi = 0;
  double radial_value = 0;
  double nonradial_value = 0;
  double margin = 0;       // radial - nonradial
  double discrepancy = 0;  // inter-level value drift (NaN on the first level)
  double angular_fraction = 0;
  double s_symmetry_residual = 0;
};

struct WitnessReport {
  WitnessOutcome outcome = WitnessOutcome::not_observed;
  std::vector<WitnessLevel> levels;
  double angular_fraction = 0;      // finest level
  double s_symmetry_residual = 0;   // finest level
  std::string note;
};

namespace detail {

// Localized bump seeds probe basins far from the radial one; a small
// cos(phi) perturbation alone can stay trapped near a locally stable
// radial branch even where the global minimizer is non-radial.
template <class Scalar>
std::vector<Mat<Scalar>> nonradial_seeds(const CylinderGrid<Scalar>& g,
                                         const Vec<Scalar>& radial_seed) {
  std::vector<Mat<Scalar>> out;
  Mat<Scalar> base(g.n_s, g.n_phi);
  for (int j = 0; j < g.n_phi; ++j) base.col(j) = radial_seed;

  Mat<Scalar> m = base;
  for (int j = 0; j < g.n_phi; ++j)
    m.col(j) *= 1 + Scalar(0.1) * std::cos(g.phi_nodes[j]);
  out.push_back(m);

  for (const Scalar beta : {Scalar(3), Scalar(10)}) {
    Mat<Scalar> b = base;
    for (int j = 0; j < g.n_phi; ++j) {
      const Scalar ca = std::cos(g.phi_nodes[j] - Scalar(M_PI) / 2);
      b.col(j) *= std::exp(beta * (ca - 1));
    }
    out.push_back(b);
  }
  return out;
}

}  // namespace detail

// Certify symmetry breaking by minimizing over radial and non-radial
// fields on a hierarchy of grids.  "Broken" requires the radial-minus-
// nonradial margin to be positive and to dominate three times the
// inter-level drift of both values on every level, with at least two
// levels; anything weaker reports not_observed.
inline WitnessReport breaking_witness(
    WitnessKind kind, double d, double par1, double lambda, double p_or_unused,
    double s_max, const std::vector<std::pair<int, int>>& level_sizes,
    const MinimizeOptions& opts = {}) {
  if (level_sizes.size() < 2)
    throw std::domain_error("breaking_witness: needs at least two grid levels");

  WitnessReport rep;
  std::vector<double> rad_vals, non_vals;

  for (const auto& [ns, nphi] : level_sizes) {
    const CylinderGrid<double> g1 = build_grid(s_max, ns, 1, d);
    const CylinderGrid<double> g2 = build_grid(s_max, ns, nphi, d);

    MinimizationResult<double> rad;
    std::vector<Mat<double>> seeds;
    if (kind == WitnessKind::ckn) {
      rad = minimize_radial_f(g1, par1, p_or_unused, lambda, opts);
      seeds = detail::nonradial_seeds(g2, detail::cosh_seed(g2, par1, p_or_unused, lambda));
    } else {
      rad = minimize_radial_g(g1, par1, lambda, opts);
      seeds = detail::nonradial_seeds(g2, detail::gaussian_seed(g2, par1, lambda));
    }
    if (!rad.converged)
      throw NonConvergence("breaking_witness: radial minimization did not converge");

    bool any = false;
    MinimizationResult<double> best;
    for (const auto& seed : seeds) {
      MinimizationResult<double> r =
          (kind == WitnessKind::ckn)
              ? minimize_f(g2, par1, p_or_unused, lambda, Init::supplied, &seed, opts)
              : minimize_g(g2, par1, lambda, Init::supplied, &seed, opts);
      if (!r.converged) continue;
      if (!any || r.value < best.value) {
        best = std::move(r);
        any = true;
      }
    }
    if (!any)
      throw NonConvergence("breaking_witness: no non-radial run converged");

    WitnessLevel lev;
    lev.n_s = ns;
    lev.n_phi = nphi;
    lev.radial_value = rad.value;
    lev.nonradial_value = best.value;
    lev.margin = rad.value - best.value;
    lev.discrepancy = std::numeric_limits<double>::quiet_NaN();
    lev.angular_fraction = best.angular_fraction;
    lev.s_symmetry_residual = best.s_symmetry_residual;
    rep.levels.push_back(lev);
    rad_vals.push_back(rad.value);
    non_vals.push_back(best.value);
  }

  // inter-level discrepancies
  const size_t nl = rep.levels.size();
  for (size_t l = 1; l < nl; ++l)
    rep.levels[l].discrepancy =
        std::max(std::abs(rad_vals[l] - rad_vals[l - 1]),
                 std::abs(non_vals[l] - non_vals[l - 1]));
  rep.levels[0].discrepancy = rep.levels[1].discrepancy;

  bool broken = true;
  for (const auto& lev : rep.levels) {
    const double floor = 1e-8 * std::abs(lev.radial_value);
    if (!(lev.margin > std::max(3.0 * lev.discrepancy, floor))) broken = false;
  }
  if (rep.levels.back().angular_fraction < 1e-6) broken = false;

  rep.outcome = broken ? WitnessOutcome::broken : WitnessOutcome::not_observed;
  rep.angular_fraction = rep.levels.back().angular_fraction;
  rep.s_symmetry_residual = rep.levels.back().s_symmetry_residual;
  if (!broken)
    rep.note = "margin did not dominate the grid-refinement discrepancy";
  return rep;
}

inline WitnessReport breaking_witness_ckn(
    double theta, double p, double lambda, double d, double s_max,
    const std::vector<std::pair<int, int>>& levels,
    const MinimizeOptions& opts = {}) {
  return breaking_witness(WitnessKind::ckn, d, theta, lambda, p, s_max, levels,
                          opts);
}

inline WitnessReport breaking_witness_wlh(
    double gamma, double lambda, double d, double s_max,
    const std::vector<std::pair<int, int>>& levels,
    const MinimizeOptions& opts = {}) {
  return breaking_witness(WitnessKind::wlh, d, gamma, lambda, 0.0, s_max,
                          levels, opts);
}

}  // namespace cknsym::cylinder
