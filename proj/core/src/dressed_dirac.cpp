#include "bdf/dressed_dirac.hpp"

#include "bdf/errors.hpp"
#include "bdf/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace bdf {

namespace {

// L(p,q) = ln((p+q)/|p-q|), no cancellation issues by itself.
double log_ratio(double p, double q) {
  const double lo = std::min(p, q), hi = std::max(p, q);
  const double x = lo / hi;
  if (x < 0.999) return 2.0 * std::atanh(x);
  return std::log((p + q) / std::abs(p - q));
}

// W1(p,q) = -q/p + ((p^2+q^2)/(2 p^2)) L(p,q); the two terms cancel to
// O(ratio) at separated scales, so switch to the series there.
double w1_kernel(double p, double q) {
  const double lo = std::min(p, q), hi = std::max(p, q);
  const double r = lo / hi;
  if (r < 0.25) {
    // sum_k 4k/(4k^2-1) * r^(2k-1), powers shifted by r^2 for the q << p side
    double sum = 0.0, pw = (q < p) ? r * r * r : r;
    for (int k = 1; k <= 11; ++k) {
      sum += 4.0 * k / (4.0 * k * k - 1.0) * pw;
      pw *= r * r;
    }
    return sum;
  }
  return -q / p + (p * p + q * q) / (2.0 * p * p) * log_ratio(p, q);
}

struct IterationWorkspace {
  // global GL nodes over all radial panels, plus per-target weight rows for
  // the smooth kernel parts; the log-singular parts on the two panels
  // touching each target are integrated analytically against the spline.
  std::vector<double> qn, wn;         // nodes and raw GL weights
  std::vector<double> W0, W1;         // (targets x nodes), row-major
  std::size_t n_targets = 0, n_nodes = 0;
  int gl_points = 8;

  bool singular_for(std::size_t target, std::size_t panel) const {
    return target >= 1 && (panel + 1 == target || panel == target);
  }
};

IterationWorkspace build_workspace(const RadialGrid& grid, int gl_points) {
  IterationWorkspace ws;
  ws.gl_points = gl_points;
  const std::size_t n = grid.size();
  const std::size_t n_panels = n - 1;
  ws.n_targets = n;
  ws.n_nodes = n_panels * std::size_t(gl_points);
  ws.qn.reserve(ws.n_nodes);
  ws.wn.reserve(ws.n_nodes);
  for (std::size_t j = 0; j < n_panels; ++j) {
    auto r = quad::gauss_legendre(gl_points, grid[j], grid[j + 1]);
    ws.qn.insert(ws.qn.end(), r.x.begin(), r.x.end());
    ws.wn.insert(ws.wn.end(), r.w.begin(), r.w.end());
  }
  ws.W0.assign(ws.n_targets * ws.n_nodes, 0.0);
  ws.W1.assign(ws.n_targets * ws.n_nodes, 0.0);

  // target 0: I0(0) = 4 pi int phi0 dq, I1(0) = 0
  for (std::size_t m = 0; m < ws.n_nodes; ++m) ws.W0[m] = 4.0 * M_PI * ws.wn[m];

  for (std::size_t i = 1; i < n; ++i) {
    const double p = grid[i];
    double* row0 = &ws.W0[i * ws.n_nodes];
    double* row1 = &ws.W1[i * ws.n_nodes];
    for (std::size_t j = 0; j < n_panels; ++j) {
      const bool sing = ws.singular_for(i, j);
      for (int g = 0; g < gl_points; ++g) {
        const std::size_t m = j * gl_points + g;
        const double q = ws.qn[m], w = ws.wn[m];
        if (!sing) {
          row0[m] = (2.0 * M_PI / p) * w * q * log_ratio(p, q);
          row1[m] = 2.0 * M_PI * w * w1_kernel(p, q);
        } else {
          // smooth part only; ln|p-q| handled analytically per iteration
          const double lpq = std::log(p + q);
          row0[m] = (2.0 * M_PI / p) * w * q * lpq;
          row1[m] = 2.0 * M_PI * w *
                    (-q / p + (p * p + q * q) / (2.0 * p * p) * lpq);
        }
      }
    }
  }
  return ws;
}

// expand the cubic piece of spl covering [a,b] into powers of u = q - p
std::array<double, 4> piece_coeffs_about(const CubicSpline& spl, std::size_t piece,
                                         double p) {
  auto pc = spl.piece(piece);
  const double t = p - pc.x0;
  // Taylor of a + b x + c x^2 + d x^3 at x = t
  std::array<double, 4> c;
  c[0] = ((pc.d * t + pc.c) * t + pc.b) * t + pc.a;
  c[1] = (3.0 * pc.d * t + 2.0 * pc.c) * t + pc.b;
  c[2] = 3.0 * pc.d * t + pc.c;
  c[3] = pc.d;
  return c;
}

// int_panel q phi(q) ln|q-p| dq with phi given by its spline piece
double singular_I0(const CubicSpline& phi, std::size_t piece, double a, double b,
                   double p) {
  auto c = piece_coeffs_about(phi, piece, p);
  // q phi = (u + p) sum c_m u^m
  std::array<double, 5> beta{};
  for (int m = 0; m < 4; ++m) {
    beta[m + 1] += c[m];
    beta[m] += p * c[m];
  }
  double s = 0.0;
  for (int m = 0; m <= 4; ++m)
    if (beta[m] != 0.0) s += beta[m] * quad::powlog_moment(m, a, b, p);
  return s;
}

// int_panel ((p^2+q^2)/(2p^2)) phi(q) ln|q-p| dq
double singular_I1(const CubicSpline& phi, std::size_t piece, double a, double b,
                   double p) {
  auto c = piece_coeffs_about(phi, piece, p);
  // (p^2 + q^2) = 2 p^2 + 2 p u + u^2
  std::array<double, 6> beta{};
  for (int m = 0; m < 4; ++m) {
    beta[m] += 2.0 * p * p * c[m];
    beta[m + 1] += 2.0 * p * c[m];
    beta[m + 2] += c[m];
  }
  double s = 0.0;
  for (int m = 0; m <= 5; ++m)
    if (beta[m] != 0.0) s += beta[m] * quad::powlog_moment(m, a, b, p) / (2.0 * p * p);
  return s;
}

} // namespace

DressedDirac::DressedDirac(RadialGrid grid, std::vector<double> g0,
                           std::vector<double> g1, double alpha, double lambda,
                           int iterations, double residual,
                           std::vector<double> residual_history)
    : grid_(std::move(grid)), g0_(std::move(g0)), g1_(std::move(g1)),
      sg0_(grid_.nodes, g0_), sg1_(grid_.nodes, g1_), alpha_(alpha), lambda_(lambda),
      iterations_(iterations), residual_(residual),
      residual_history_(std::move(residual_history)) {
  m_ = std::hypot(g0_[0], g1_[0]);
  for (std::size_t i = 0; i < grid_.size(); ++i)
    m_ = std::min(m_, std::hypot(g0_[i], g1_[i]));
}

double DressedDirac::e_script(double p) const { return std::hypot(sg0_(p), sg1_(p)); }

double DressedDirac::sigma0(double p) const {
  const double a = sg0_(p), b = sg1_(p);
  return a / std::hypot(a, b);
}

double DressedDirac::sigma1(double p) const {
  const double a = sg0_(p), b = sg1_(p);
  return b / std::hypot(a, b);
}

double DressedDirac::dsigma0(double p) const {
  const double a = sg0_(p), b = sg1_(p);
  const double e = std::hypot(a, b);
  const double da = sg0_.derivative(p), db = sg1_.derivative(p);
  const double de = (a * da + b * db) / e;
  return (da * e - a * de) / (e * e);
}

double DressedDirac::dsigma1(double p) const {
  const double a = sg0_(p), b = sg1_(p);
  const double e = std::hypot(a, b);
  const double da = sg0_.derivative(p), db = sg1_.derivative(p);
  const double de = (a * da + b * db) / e;
  return (db * e - b * de) / (e * e);
}

std::array<double, 4> DressedDirac::sigma4(const Vec3& p) const {
  const double P = norm(p);
  if (P < 1e-300) return {1.0, 0.0, 0.0, 0.0};
  const double a = sg0_(P), b = sg1_(P);
  const double e = std::hypot(a, b);
  const double s1 = b / e;
  return {a / e, s1 * p[0] / P, s1 * p[1] / P, s1 * p[2] / P};
}

void DressedDirac::check_cutoff(const Vec3& p) const {
  if (norm(p) > lambda_ * (1.0 + 1e-12))
    throw CutoffViolation("momentum outside the cutoff ball");
}

clifford::DiracElement DressedDirac::sign_matrix(const Vec3& p) const {
  check_cutoff(p);
  auto s = sigma4(p);
  return clifford::sign_from_sigma(s[0], {s[1], s[2], s[3]});
}

clifford::DiracElement DressedDirac::dsign(const Vec3& u, const Vec3& e) const {
  const auto& basis = clifford::make_dirac_basis();
  const double U = norm(u);
  if (U < 1e-10) {
    const double ds1 = dsigma1(0.0);
    auto out = basis.alpha1 * clifford::cxd(ds1 * e[0]) +
               basis.alpha2 * clifford::cxd(ds1 * e[1]) +
               basis.alpha3 * clifford::cxd(ds1 * e[2]);
    out.grading = clifford::Grading::Odd;
    return out;
  }
  const Vec3 omega = (1.0 / U) * u;
  const double c = dot(omega, e);
  const double s1 = sigma1(U);
  const double d0 = dsigma0(U) * c;
  std::array<double, 3> dv;
  for (int j = 0; j < 3; ++j)
    dv[j] = dsigma1(U) * c * omega[j] + s1 * (e[j] - c * omega[j]) / U;
  auto out = basis.beta * clifford::cxd(d0) + basis.alpha1 * clifford::cxd(dv[0]) +
             basis.alpha2 * clifford::cxd(dv[1]) + basis.alpha3 * clifford::cxd(dv[2]);
  out.grading = clifford::Grading::Odd;
  return out;
}

clifford::DiracElement DressedDirac::projector(const Vec3& p, int sign) const {
  auto s = sign_matrix(p);
  auto one = clifford::DiracElement::identity();
  auto proj = (sign >= 0) ? (one + s) * clifford::cxd(0.5) : (one - s) * clifford::cxd(0.5);
  proj.grading = clifford::Grading::Mixed;
  return proj;
}

DressedDirac dress(const PhysicalParams& params, const DressOptions& opts) {
  if (opts.nodes < 64)
    throw ResolutionError("dress: radial grid needs at least 64 nodes");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("dress: tol must be > 0");

  const double lambda = params.lambda;
  const double alpha = params.alpha;
  RadialGrid grid = RadialGrid::geometric(lambda, opts.nodes, opts.r_min);
  const std::size_t n = grid.size();

  std::vector<double> g0(n, 1.0), g1(n);
  for (std::size_t i = 0; i < n; ++i) g1[i] = grid[i];

  std::vector<double> residuals;
  if (alpha == 0.0)
    return DressedDirac(std::move(grid), std::move(g0), std::move(g1), alpha, lambda, 1,
                        0.0, {0.0});

  IterationWorkspace ws = build_workspace(grid, opts.gl_points);
  const double pref = alpha / (4.0 * M_PI * M_PI);

  std::vector<double> phi0(n), phi1(n), f0(ws.n_nodes), f1(ws.n_nodes);
  std::vector<double> new_g0(n), new_g1(n);

  int iter = 0;
  double res = 0.0;
  for (iter = 1; iter <= opts.max_iter; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      const double e = std::hypot(g0[i], g1[i]);
      phi0[i] = g0[i] / e;
      phi1[i] = g1[i] / e;
    }
    CubicSpline sphi0(grid.nodes, phi0), sphi1(grid.nodes, phi1);
    for (std::size_t m = 0; m < ws.n_nodes; ++m) {
      f0[m] = sphi0(ws.qn[m]);
      f1[m] = sphi1(ws.qn[m]);
    }

    for (std::size_t i = 0; i < n; ++i) {
      const double* row0 = &ws.W0[i * ws.n_nodes];
      const double* row1 = &ws.W1[i * ws.n_nodes];
      double I0 = 0.0, I1 = 0.0;
      for (std::size_t m = 0; m < ws.n_nodes; ++m) {
        I0 += row0[m] * f0[m];
        I1 += row1[m] * f1[m];
      }
      if (i >= 1) {
        const double p = grid[i];
        for (std::size_t j : {i - 1, i}) {
          if (j >= n - 1) continue;
          const double a = grid[j], b = grid[j + 1];
          I0 -= (2.0 * M_PI / p) * singular_I0(sphi0, j, a, b, p);
          I1 -= 2.0 * M_PI * singular_I1(sphi1, j, a, b, p);
        }
      }
      new_g0[i] = 1.0 + pref * I0;
      new_g1[i] = grid[i] + pref * ((i == 0) ? 0.0 : I1);
    }

    res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      res = std::max(res, std::abs(new_g0[i] - g0[i]) / (1.0 + std::abs(g0[i])));
      res = std::max(res, std::abs(new_g1[i] - g1[i]) / (1.0 + std::abs(g1[i])));
    }
    residuals.push_back(res);

    const double th = opts.mixing;
    for (std::size_t i = 0; i < n; ++i) {
      g0[i] = (1.0 - th) * g0[i] + th * new_g0[i];
      g1[i] = (1.0 - th) * g1[i] + th * new_g1[i];
    }
    if (res < opts.tol) break;
  }
  if (res >= opts.tol)
    throw DivergenceError("dress: fixed point did not converge", residuals);

  return DressedDirac(std::move(grid), std::move(g0), std::move(g1), alpha, lambda,
                      iter, res, std::move(residuals));
}

SmoothnessProbe smoothness_probe(const DressedDirac& d, int order) {
  SmoothnessProbe p{0.0, 0.0, 0.0, 0.0};
  const auto& g = d.grid();
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    const double mid = 0.5 * (g[i] + g[i + 1]);
    p.max_dg0 = std::max(p.max_dg0, std::abs(d.dg0(mid)));
    p.max_dg1_minus1 = std::max(p.max_dg1_minus1, std::abs(d.dg1(mid) - 1.0));
  }
  if (order >= 2) {
    // second derivatives via central differences of the spline derivative
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
      const double h = 0.5 * std::min(g[i] - g[i - 1], g[i + 1] - g[i]);
      p.max_d2g0 = std::max(p.max_d2g0,
                            std::abs(d.dg0(g[i] + h) - d.dg0(g[i] - h)) / (2.0 * h));
      p.max_d2g1 = std::max(p.max_d2g1,
                            std::abs(d.dg1(g[i] + h) - d.dg1(g[i] - h)) / (2.0 * h));
    }
  }
  return p;
}

double gstar_fit_constant(const DressedDirac& d) {
  const auto& g = d.grid();
  const double slack = 1e-9;
  const double al = d.alpha() * std::log(d.lambda());
  double C = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double p = g[i];
    const double g0 = d.g0_nodes()[i], g1 = d.g1_nodes()[i];
    if (g1 < p * (1.0 - slack) - slack) return -1.0;
    if (g1 > g0 * p * (1.0 + slack) + slack) return -1.0;
    if (g0 < 1.0 - slack) return -1.0;
    C = std::max(C, (g0 - 1.0) / al);
  }
  return C;
}

} // namespace bdf
