#pragma once
// Discretization of the cylinder C = R x S^{d-1} for axially symmetric
// fields w(s, phi), where phi is the polar angle, and the two variational
// functionals whose infima are the inverse optimal constants:
//
//   F[w] = (E + Lambda M2) M2^{(1-theta)/theta} / Sp^{2/(p theta)},
//          inf F = C*^{-1/theta}     (angular measure normalized to mass 1)
//   G[w] = (E + Lambda M2) / (M2 exp(Ent / (2 gamma))),
//          inf G = 1 / C*            (full sphere measure)
//
// with E the full gradient energy, M2 the squared L2 norm, Sp the integral
// of |w|^p, and Ent the normalized entropy integral of w^2 log(w^2 / M2).
//
// Grid: uniform s nodes on [-s_max, s_max] including endpoints with
// trapezoid weights and a P1 (nearest-neighbor difference) gradient energy;
// Gauss nodes in x = cos(phi) for the weight (1 - x^2)^{(d-3)/2}, computed
// by Golub-Welsch from the Gegenbauer three-term recurrence, which makes
// the stored angular weights sum to the exact one-dimensional sphere mass
// m_d = integral of sin^{d-2} by construction.  The angular stiffness is
// spectral: discrete zonal harmonics (orthonormal polynomials at the
// nodes) with exact Laplace-Beltrami eigenvalues k (k + d - 2), so a
// constant-in-phi field has exactly zero angular energy and the radial
// subspace is invariant under gradient flow to roundoff.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "cknsym/params.hpp"
#include "cknsym/specfun.hpp"

namespace cknsym::cylinder {

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar = double>
struct CylinderGrid {
  Scalar d = 0;        // sphere dimension parameter (d >= 2)
  Scalar s_max = 0;
  int n_s = 0;
  int n_phi = 0;
  Scalar ds = 0;

  Vec<Scalar> s_nodes;       // n_s, uniform, includes both endpoints
  Vec<Scalar> s_weights;     // trapezoid
  Vec<Scalar> phi_nodes;     // n_phi polar angles, ascending
  Vec<Scalar> phi_weights;   // Gauss weights for the measure sin^{d-2} dphi
  Scalar angular_mass = 0;   // sum of phi_weights = m_d
  Scalar omega_rest = 0;     // |S^{d-2}|, the integrated remaining angles
  Scalar sphere_area = 0;    // |S^{d-1}| = omega_rest * m_d

  Mat<Scalar> harmonics;       // n_phi x n_phi; row k = k-th orthonormal poly
  Vec<Scalar> harmonic_eigs;   // k (k + d - 2)
  Mat<Scalar> angular_stiff;   // diag(w) H^T diag(eigs) H diag(w)
};

// ---------------------------------------------------------------------------
// grid construction
// ---------------------------------------------------------------------------

template <class Scalar = double>
CylinderGrid<Scalar> build_grid(Scalar s_max, int n_s, int n_phi, Scalar d) {
  if (!(d >= 2))
    throw std::domain_error("build_grid: requires d >= 2");
  if (!(s_max > 0)) throw std::domain_error("build_grid: requires s_max > 0");
  if (n_s < 16) throw std::domain_error("build_grid: requires n_s >= 16");
  if (n_phi != 1 && n_phi < 8)
    throw std::domain_error("build_grid: requires n_phi >= 8 (or 1 for radial)");

  CylinderGrid<Scalar> g;
  g.d = d;
  g.s_max = s_max;
  g.n_s = n_s;
  g.n_phi = n_phi;
  g.ds = 2 * s_max / Scalar(n_s - 1);

  g.s_nodes.resize(n_s);
  g.s_weights.resize(n_s);
  for (int i = 0; i < n_s; ++i) {
    g.s_nodes[i] = -s_max + i * g.ds;
    g.s_weights[i] = (i == 0 || i == n_s - 1) ? g.ds / 2 : g.ds;
  }

  const Scalar mu = (d - 2) / 2;  // Gegenbauer index of the weight
  const Scalar mass = Scalar(specfun::sine_power_integral(double(d)));

  // Monic three-term recurrence x pi_k = pi_{k+1} + b_k pi_{k-1} for the
  // weight (1 - x^2)^{mu - 1/2}; symmetric weight, so all alpha_k = 0.
  Vec<Scalar> b(n_phi);  // b[k] used for k >= 1
  b[0] = 0;
  if (n_phi > 1) b[1] = 1 / (2 * (mu + 1));
  for (int k = 2; k < n_phi; ++k)
    b[k] = k * (k + 2 * mu - 1) / (4 * (k + mu) * (k + mu - 1));

  // Golub-Welsch: eigen-decomposition of the Jacobi matrix.
  Vec<Scalar> x(n_phi), wq(n_phi);
  if (n_phi == 1) {
    x[0] = 0;
    wq[0] = mass;
  } else {
    Mat<Scalar> jac = Mat<Scalar>::Zero(n_phi, n_phi);
    for (int k = 1; k < n_phi; ++k) {
      const Scalar off = std::sqrt(b[k]);
      jac(k - 1, k) = off;
      jac(k, k - 1) = off;
    }
    Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(jac);
    x = es.eigenvalues();
    for (int j = 0; j < n_phi; ++j) {
      const Scalar v0 = es.eigenvectors()(0, j);
      wq[j] = mass * v0 * v0;
    }
  }

  // phi ascending corresponds to x = cos(phi) descending
  g.phi_nodes.resize(n_phi);
  g.phi_weights.resize(n_phi);
  for (int j = 0; j < n_phi; ++j) {
    const int src = n_phi - 1 - j;
    const Scalar xv = std::min<Scalar>(1, std::max<Scalar>(-1, x[src]));
    g.phi_nodes[j] = std::acos(xv);
    g.phi_weights[j] = wq[src];
  }
  g.angular_mass = g.phi_weights.sum();
  g.omega_rest = Scalar(std::exp(specfun::ln_sphere_area(double(d - 1))));
  g.sphere_area = g.omega_rest * g.angular_mass;

  // Orthonormal polynomials at the nodes (rows), and the spectral
  // angular stiffness in the raw Gauss measure.
  g.harmonics = Mat<Scalar>::Zero(n_phi, n_phi);
  g.harmonic_eigs.resize(n_phi);
  Vec<Scalar> xs(n_phi);
  for (int j = 0; j < n_phi; ++j) xs[j] = std::cos(g.phi_nodes[j]);
  const Scalar p0 = 1 / std::sqrt(mass);
  for (int j = 0; j < n_phi; ++j) g.harmonics(0, j) = p0;
  if (n_phi > 1) {
    const Scalar r1 = std::sqrt(b[1]);
    for (int j = 0; j < n_phi; ++j) g.harmonics(1, j) = xs[j] * p0 / r1;
    for (int k = 1; k + 1 < n_phi; ++k) {
      const Scalar rk = std::sqrt(b[k]), rk1 = std::sqrt(b[k + 1]);
      for (int j = 0; j < n_phi; ++j)
        g.harmonics(k + 1, j) =
            (xs[j] * g.harmonics(k, j) - rk * g.harmonics(k - 1, j)) / rk1;
    }
  }
  for (int k = 0; k < n_phi; ++k) g.harmonic_eigs[k] = Scalar(k) * (k + d - 2);

  const Mat<Scalar> core =
      g.harmonics.transpose() * g.harmonic_eigs.asDiagonal() * g.harmonics;
  g.angular_stiff = g.phi_weights.asDiagonal() * core * g.phi_weights.asDiagonal();
  return g;
}

// ---------------------------------------------------------------------------
// functional parts
// ---------------------------------------------------------------------------

// Integrals of a field under the product measure (s_weights x aw), where
// aw is the angular weight vector appropriate to the functional at hand.
template <class Scalar>
struct Parts {
  Scalar es = 0;    // s-gradient energy
  Scalar ephi = 0;  // angular gradient energy
  Scalar m2 = 0;    // integral of w^2
  Scalar sp = 0;    // integral of |w|^p          (filled on request)
  Scalar ent = 0;   // integral of w^2 log(w^2)   (filled on request)
};

namespace detail {

template <class Scalar>
void check_shape(const CylinderGrid<Scalar>& g, const Mat<Scalar>& w) {
  if (w.rows() != g.n_s || w.cols() != g.n_phi)
    throw std::domain_error("cylinder: field shape does not match grid");
}

template <class Scalar>
Parts<Scalar> parts(const CylinderGrid<Scalar>& g, const Mat<Scalar>& w,
                    const Vec<Scalar>& aw, bool want_p, Scalar p, bool want_ent) {
  Parts<Scalar> out;
  const Mat<Scalar> dw = w.bottomRows(g.n_s - 1) - w.topRows(g.n_s - 1);
  out.es = (dw.cwiseAbs2() * aw).sum() / g.ds;

  // angular stiffness is stored in the raw Gauss measure; rescale
  const Scalar ang_scale = aw.sum() / g.angular_mass;
  const Mat<Scalar> wk = w * g.angular_stiff;
  out.ephi = ang_scale * (wk.cwiseProduct(w) * Vec<Scalar>::Ones(g.n_phi))
                             .cwiseProduct(g.s_weights)
                             .sum();

  out.m2 = g.s_weights.dot(w.cwiseAbs2() * aw);
  if (want_p)
    out.sp = g.s_weights.dot((w.array().abs().pow(p).matrix() * aw));
  if (want_ent) {
    const Scalar floor_sq = Scalar(1e-300);
    const Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic> w2 =
        w.array().square();
    const Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic> term =
        (w2 > floor_sq).select(w2 * w2.log(), Scalar(0));
    out.ent = g.s_weights.dot((term.matrix() * aw));
  }
  return out;
}

// d(es)/dw and d(ephi)/dw, accumulated into `out` with prefactors.
template <class Scalar>
void add_energy_grad(const CylinderGrid<Scalar>& g, const Mat<Scalar>& w,
                     const Vec<Scalar>& aw, Scalar pref, Mat<Scalar>& out) {
  const int n = g.n_s;
  const Mat<Scalar> dw = w.bottomRows(n - 1) - w.topRows(n - 1);
  Mat<Scalar> gs = Mat<Scalar>::Zero(n, g.n_phi);
  gs.row(0) = -dw.row(0);
  gs.bottomRows(1) = dw.bottomRows(1);
  if (n > 2)
    gs.middleRows(1, n - 2) = dw.topRows(n - 2) - dw.bottomRows(n - 2);
  gs *= 2 / g.ds;
  gs = gs * aw.asDiagonal();

  const Scalar ang_scale = aw.sum() / g.angular_mass;
  Mat<Scalar> gphi = 2 * ang_scale * (g.s_weights.asDiagonal() * (w * g.angular_stiff));
  out += pref * (gs + gphi);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// F functional (CKN side); angular measure normalized to total mass one
// ---------------------------------------------------------------------------

template <class Scalar>
Vec<Scalar> angular_weights_f(const CylinderGrid<Scalar>& g) {
  return g.phi_weights / g.angular_mass;
}

template <class Scalar>
Scalar eval_ln_f(const CylinderGrid<Scalar>& g, const Mat<Scalar>& w,
                 Scalar theta, Scalar p, Scalar lambda) {
  detail::check_shape(g, w);
  if (!(theta > 0 && theta <= 1 && p > 2 && lambda > 0))
    throw std::domain_error("eval_F: requires 0 < theta <= 1, p > 2, lambda > 0");
  const Vec<Scalar> aw = angular_weights_f(g);
  const Parts<Scalar> q = detail::parts(g, w, aw, true, p, false);
  if (!(q.m2 > 0)) throw std::domain_error("eval_F: field vanishes");
  const Scalar e = q.es + q.ephi;
  return std::log(e + lambda * q.m2) + (1 - theta) / theta * std::log(q.m2) -
         2 / (p * theta) * std::log(q.sp);
}

template <class Scalar>
Scalar eval_F(const CylinderGrid<Scalar>& g, const Mat<Scalar>& w, Scalar theta,
              Scalar p, Scalar lambda) {
  return std::exp(eval_ln_f(g, w, theta, p, lambda));
}

// Gradient of log F with respect to the field values.
template <class Scalar>
Mat<Scalar> grad_ln_f(const CylinderGrid<Scalar>& g, const Mat<Scalar>& w,
                      Scalar theta, Scalar p, Scalar lambda) {
  detail::check_shape(g, w);
  const Vec<Scalar> aw = angular_weights_f(g);
  const Parts<Scalar> q = detail::parts(g, w, aw, true, p, false);
  const Scalar e = q.es + q.ephi;
  const Scalar denom = e + lambda * q.m2;

  Mat<Scalar> out = Mat<Scalar>::Zero(g.n_s, g.n_phi);
  detail::add_energy_grad(g, w, aw, Scalar(1) / denom, out);

  // mass terms: lambda/denom from the numerator, (1-theta)/theta from M2
  const Mat<Scalar> mw = g.s_weights.asDiagonal() * w * aw.asDiagonal();
  out += (2 * lambda / denom + 2 * (1 - theta) / (theta * q.m2)) * mw;

  // p-term: -(2/(p theta)) * p |w|^{p-2} w * m / Sp
  const Mat<Scalar> wp = (w.array().abs().pow(p - 2) * w.array()).matrix();
  out -= (2 / (theta * q.sp)) * (g.s_weights.asDiagonal() * wp * aw.asDiagonal());
  return out;
}

// Gradient of F itself (chain rule), used by the finite-difference checks.
template <class Scalar>
Mat<Scalar> grad_F(const CylinderGrid<Scalar>& g, const Mat<Scalar>& w,
                   Scalar theta, Scalar p, Scalar lambda) {
  return eval_F(g, w, theta, p, lambda) * grad_ln_f(g, w, theta, p, lambda);
}

// ---------------------------------------------------------------------------
// G functional (log-Hardy side); full sphere measure
// ---------------------------------------------------------------------------

template <class Scalar>
Vec<Scalar> angular_weights_g(const CylinderGrid<Scalar>& g) {
  return g.phi_weights * g.omega_rest;
}

template <class Scalar>
Scalar eval_ln_g(const CylinderGrid<Scalar>& g, const Mat<Scalar>& w,
                 Scalar gamma, Scalar lambda) {
  detail::check_shape(g, w);
  if (!(gamma >= 0.25 && lambda > 0))
    throw std::domain_error("eval_G: requires gamma >= 1/4, lambda > 0");
  const Vec<Scalar> aw = angular_weights_g(g);
  const Parts<Scalar> q = detail::parts(g, w, aw, false, Scalar(0), true);
  if (!(q.m2 > 0)) throw std::domain_error("eval_G: field vanishes");
  const Scalar e = q.es + q.ephi;
  const Scalar ent_norm = q.ent / q.m2 - std::log(q.m2);
  return std::log(e + lambda * q.m2) - std::log(q.m2) - ent_norm / (2 * gamma);
}

template <class Scalar>
Scalar eval_G(const CylinderGrid<Scalar>& g, const Mat<Scalar>& w, Scalar gamma,
              Scalar lambda) {
  return std::exp(eval_ln_g(g, w, gamma, lambda));
}

template <class Scalar>
Mat<Scalar> grad_ln_g(const CylinderGrid<Scalar>& g, const Mat<Scalar>& w,
                      Scalar gamma, Scalar lambda) {
  detail::check_shape(g, w);
  const Vec<Scalar> aw = angular_weights_g(g);
  const Parts<Scalar> q = detail::parts(g, w, aw, false, Scalar(0), true);
  const Scalar e = q.es + q.ephi;
  const Scalar denom = e + lambda * q.m2;

  Mat<Scalar> out = Mat<Scalar>::Zero(g.n_s, g.n_phi);
  detail::add_energy_grad(g, w, aw, Scalar(1) / denom, out);

  const Mat<Scalar> mw = g.s_weights.asDiagonal() * w * aw.asDiagonal();
  out += (2 * lambda / denom - 2 / q.m2) * mw;

  // entropy term: d(ent_norm)/dw = (2 m w / M2) (log w^2 - ent/M2)
  const Scalar floor_sq = Scalar(1e-300);
  const Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic> w2 =
      w.array().square();
  const Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic> logw2 =
      (w2 > floor_sq).select(w2.log(), std::log(floor_sq));
  const Scalar mean_ent = q.ent / q.m2;
  const Mat<Scalar> ent_grad =
      (mw.array() * (logw2 - mean_ent)).matrix() * (2 / q.m2);
  out -= ent_grad / (2 * gamma);
  return out;
}

template <class Scalar>
Mat<Scalar> grad_G(const CylinderGrid<Scalar>& g, const Mat<Scalar>& w,
                   Scalar gamma, Scalar lambda) {
  return eval_G(g, w, gamma, lambda) * grad_ln_g(g, w, gamma, lambda);
}

// Public access to the raw integrals of a field under each functional's
// measure, for diagnostics and tests.
template <class Scalar>
Parts<Scalar> integrals_f(const CylinderGrid<Scalar>& g, const Mat<Scalar>& w,
                          Scalar p) {
  return detail::parts(g, w, Vec<Scalar>(angular_weights_f(g)), true, p, false);
}

template <class Scalar>
Parts<Scalar> integrals_g(const CylinderGrid<Scalar>& g, const Mat<Scalar>& w) {
  return detail::parts(g, w, Vec<Scalar>(angular_weights_g(g)), false, Scalar(0),
                       true);
}

// ---------------------------------------------------------------------------
// interpolation helpers (uniform-grid Catmull-Rom, zero extension)
// ---------------------------------------------------------------------------

namespace detail {

// Cubic interpolation of a column at arbitrary s, with zero extension
// outside [-s_max, s_max]; fourth-order in the interior.
template <class Scalar>
Scalar sample_column(const CylinderGrid<Scalar>& g, const Mat<Scalar>& w,
                     int col, Scalar s) {
  const Scalar pos = (s + g.s_max) / g.ds;
  if (pos < -1 || pos > g.n_s) return 0;
  const int k = static_cast<int>(std::floor(pos));
  const Scalar t = pos - k;
  auto at = [&](int i) -> Scalar {
    return (i >= 0 && i < g.n_s) ? w(i, col) : Scalar(0);
  };
  const Scalar w0 = at(k - 1), w1 = at(k), w2 = at(k + 1), w3 = at(k + 2);
  const Scalar a0 = 2 * w1;
  const Scalar a1 = w2 - w0;
  const Scalar a2 = 2 * w0 - 5 * w1 + 4 * w2 - w3;
  const Scalar a3 = -w0 + 3 * w1 - 3 * w2 + w3;
  return Scalar(0.5) * (a0 + t * (a1 + t * (a2 + t * a3)));
}

}  // namespace detail

// Field rescaled in s: (dilate_s(w, sigma))(s, phi) = w(sigma s, phi).
template <class Scalar>
Mat<Scalar> dilate_s(const CylinderGrid<Scalar>& g, const Mat<Scalar>& w,
                     Scalar sigma) {
  detail::check_shape(g, w);
  Mat<Scalar> out(g.n_s, g.n_phi);
  for (int j = 0; j < g.n_phi; ++j)
    for (int i = 0; i < g.n_s; ++i)
      out(i, j) = detail::sample_column(g, w, j, sigma * g.s_nodes[i]);
  return out;
}

// ---------------------------------------------------------------------------
// diagnostics
// ---------------------------------------------------------------------------

template <class Scalar>
struct SymmetryDiagnostics {
  Scalar angular_fraction = 0;    // E_phi / (E_s + E_phi)
  Scalar s_symmetry_residual = 0; // || w - reflect(w) ||_2 / || w ||_2, recentered
  Scalar recentering = 0;         // optimal reflection center
};

template <class Scalar>
Scalar angular_fraction(const CylinderGrid<Scalar>& g, const Mat<Scalar>& w) {
  const Parts<Scalar> q =
      detail::parts(g, w, Vec<Scalar>(g.phi_weights), false, Scalar(0), false);
  const Scalar e = q.es + q.ephi;
  return e > 0 ? q.ephi / e : Scalar(0);
}

template <class Scalar>
SymmetryDiagnostics<Scalar> symmetry_diagnostics(const CylinderGrid<Scalar>& g,
                                                 const Mat<Scalar>& w) {
  detail::check_shape(g, w);
  SymmetryDiagnostics<Scalar> out;
  out.angular_fraction = angular_fraction(g, w);

  const Vec<Scalar>& aw = g.phi_weights;
  const Scalar m2 = g.s_weights.dot(w.cwiseAbs2() * aw);
  if (!(m2 > 0)) return out;

  // squared mirror defect around center tau
  auto defect = [&](Scalar tau) -> Scalar {
    Scalar acc = 0;
    for (int j = 0; j < g.n_phi; ++j) {
      Scalar col = 0;
      for (int i = 0; i < g.n_s; ++i) {
        const Scalar mirror =
            detail::sample_column(g, w, j, 2 * tau - g.s_nodes[i]);
        const Scalar diff = mirror - w(i, j);
        col += g.s_weights[i] * diff * diff;
      }
      acc += aw[j] * col;
    }
    return acc;
  };

  // center seed: mass centroid; then golden-section refinement
  const Scalar centroid =
      g.s_weights.dot((w.cwiseAbs2() * aw).cwiseProduct(g.s_nodes)) / m2;
  Scalar lo = centroid - 2, hi = centroid + 2;
  const Scalar gr = Scalar(0.5) * (std::sqrt(Scalar(5)) - 1);
  Scalar x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  Scalar f1 = defect(x1), f2 = defect(x2);
  for (int it = 0; it < 80 && hi - lo > Scalar(1e-9); ++it) {
    if (f1 < f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - gr * (hi - lo); f1 = defect(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + gr * (hi - lo); f2 = defect(x2);
    }
  }
  const Scalar tau = (f1 < f2) ? x1 : x2;
  out.recentering = tau;
  out.s_symmetry_residual = std::sqrt(std::max<Scalar>(0, defect(tau)) / m2);
  return out;
}

// ---------------------------------------------------------------------------
// scaling identity
// ---------------------------------------------------------------------------

// Relative defect of the exact dilation identity
//   F_{sigma^2 Lambda}[w_sigma] =
//     sigma^e F_Lambda[w] - sigma^{e-2} (sigma^2 - 1) * A[w],
// where e = 2 - 1/theta + 2/(p theta), w_sigma(s) = w(sigma s) and
// A[w] = E_phi M2^{(1-theta)/theta} / Sp^{2/(p theta)} is the angular part
// of the functional.  Zero at sigma = 1 by construction; for sigma > 1 the
// field must have decayed at the boundary or mass would be pushed off the
// grid, so that case is rejected.
template <class Scalar>
Scalar scaling_identity_residual(const CylinderGrid<Scalar>& g,
                                 const Mat<Scalar>& w, Scalar sigma,
                                 Scalar theta, Scalar p, Scalar lambda) {
  detail::check_shape(g, w);
  if (!(sigma > 0)) throw std::domain_error("scaling_identity_residual: sigma > 0");
  const Scalar wmax = w.cwiseAbs().maxCoeff();
  if (sigma > 1) {
    const Scalar edge = std::max(w.row(0).cwiseAbs().maxCoeff(),
                                 w.row(g.n_s - 1).cwiseAbs().maxCoeff());
    if (!(edge <= Scalar(1e-8) * wmax))
      throw std::domain_error(
          "scaling_identity_residual: field has not decayed at the boundary");
  }

  const Vec<Scalar> aw = angular_weights_f(g);
  const Parts<Scalar> q = detail::parts(g, w, aw, true, p, false);
  const Scalar f0 = std::exp(std::log(q.es + q.ephi + lambda * q.m2) +
                             (1 - theta) / theta * std::log(q.m2) -
                             2 / (p * theta) * std::log(q.sp));
  const Scalar ang = q.ephi * std::exp((1 - theta) / theta * std::log(q.m2) -
                                       2 / (p * theta) * std::log(q.sp));

  const Mat<Scalar> ws = dilate_s(g, w, sigma);
  const Scalar lhs = eval_F(g, ws, theta, p, sigma * sigma * lambda);

  const Scalar e = 2 - 1 / theta + 2 / (p * theta);
  const Scalar rhs = std::pow(sigma, e) * f0 -
                     std::pow(sigma, e - 2) * (sigma * sigma - 1) * ang;
  return std::abs(lhs - rhs) / std::max(std::abs(lhs), Scalar(1e-300));
}

}  // namespace cknsym::cylinder
