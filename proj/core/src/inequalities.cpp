#include "bdf/inequalities.hpp"

#include "bdf/energy.hpp"
#include "bdf/quadrature.hpp"
#include "bdf/rng.hpp"

#include <cmath>

namespace bdf::ops {

namespace {

double pow32(double x) { return x * std::sqrt(x); }

} // namespace

double GaussianMixture::norm2() const {
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j)
      s += c[i] * c[j] * pow32(M_PI / (b[i] + b[j]));
  return s;
}

double GaussianMixture::coulomb_moment() const {
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j)
      s += c[i] * c[j] * 2.0 * M_PI / (b[i] + b[j]);
  return s;
}

double GaussianMixture::hardy_moment() const {
  // int e^{-B r^2}/r^2 dx = 2 pi^{3/2} / sqrt(B)
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j)
      s += c[i] * c[j] * 2.0 * pow32(M_PI) / std::sqrt(b[i] + b[j]);
  return s;
}

double GaussianMixture::laplace_moment() const {
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) {
      const double B = b[i] + b[j];
      s += c[i] * c[j] * 6.0 * b[i] * b[j] * pow32(M_PI) / (B * B * std::sqrt(B));
    }
  return s;
}

double GaussianMixture::grad_power_moment(double s2) const {
  // <|grad|^{2s}> = sum c_i c_j (4 b_i b_j)^{-3/2} 2 pi Gamma(s+3/2)/beta^{s+3/2}
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) {
      const double beta = 0.25 * (1.0 / b[i] + 1.0 / b[j]);
      s += c[i] * c[j] * std::pow(4.0 * b[i] * b[j], -1.5) * 2.0 * M_PI *
           std::tgamma(s2 + 1.5) * std::pow(beta, -(s2 + 1.5));
    }
  return s;
}

double GaussianMixture::halfgrad_moment() const { return grad_power_moment(0.5); }

double GaussianMixture::value(double r) const {
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * std::exp(-b[i] * r * r);
  return s;
}

double GaussianMixture::lp_norm(double p) const {
  double bmin = b[0];
  for (double bi : b) bmin = std::min(bmin, bi);
  const double rmax = std::sqrt(80.0 / bmin);
  auto rule = quad::composite(12, quad::log_breaks(1e-4 * rmax, rmax, 8));
  double s = quad::integrate(rule, [&](double r) {
    return 4.0 * M_PI * r * r * std::pow(std::abs(value(r)), p);
  });
  return std::pow(s, 1.0 / p);
}

double GaussianMixture::density_potential(double r) const {
  // |phi|^2 = sum_ij c_i c_j e^{-B r^2}; potential of e^{-Br^2} is
  // (pi/B)^{3/2} erf(sqrt(B) r)/r
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) {
      const double B = b[i] + b[j];
      const double q = pow32(M_PI / B);
      if (r < 1e-8)
        s += c[i] * c[j] * q * 2.0 * std::sqrt(B / M_PI);
      else
        s += c[i] * c[j] * q * std::erf(std::sqrt(B) * r) / r;
    }
  return s;
}

double GaussianMixture::density_coulomb_norm2() const {
  // D(rho, rho) with rho = |phi|^2 expanded into Gaussians
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j)
      for (std::size_t k = 0; k < c.size(); ++k)
        for (std::size_t l = 0; l < c.size(); ++l) {
          const double p = b[i] + b[j], q = b[k] + b[l];
          s += c[i] * c[j] * c[k] * c[l] * 2.0 * std::pow(M_PI, 2.5) /
               (p * q * std::sqrt(p + q));
        }
  return s;
}

double GaussianMixture::v_phi_l2() const {
  double bmin = b[0];
  for (double bi : b) bmin = std::min(bmin, bi);
  const double rmax = std::sqrt(80.0 / bmin);
  auto rule = quad::composite(12, quad::log_breaks(1e-4 * rmax, rmax, 8));
  double s = quad::integrate(rule, [&](double r) {
    const double vp = density_potential(r) * value(r);
    return 4.0 * M_PI * r * r * vp * vp;
  });
  return std::sqrt(s);
}

GaussianMixture GaussianMixture::random(std::uint64_t seed, std::uint64_t stream,
                                        int n_terms) {
  rng::Counter rc{seed, stream, 0};
  GaussianMixture m;
  for (int i = 0; i < n_terms; ++i) {
    m.c.push_back(rc.uniform(-1.0, 1.0));
    m.b.push_back(std::pow(10.0, rc.uniform(-1.5, 1.5)));
  }
  // keep the mixture nondegenerate
  if (std::abs(m.c[0]) < 0.1) m.c[0] = 0.5;
  return m;
}

InequalityReport inequality_suite(const InequalityOptions& opts) {
  InequalityReport rep;
  rep.samples = opts.samples;

  for (std::uint64_t s = 0; s < opts.samples; ++s) {
    GaussianMixture m = GaussianMixture::random(opts.seed, s);
    const double n2 = m.norm2();
    if (n2 < 1e-12) continue;
    const double kato_l = m.coulomb_moment();
    const double kato_r = 0.5 * M_PI * m.halfgrad_moment();
    const double hardy_l = m.hardy_moment();
    const double hardy_r = 4.0 * m.laplace_moment();
    rep.kato_worst = std::max(rep.kato_worst, kato_l / kato_r);
    rep.hardy_worst = std::max(rep.hardy_worst, hardy_l / hardy_r);
    rep.sobolev6 = std::max(rep.sobolev6, m.lp_norm(6.0) / std::sqrt(m.laplace_moment()));
    rep.sobolev4 =
        std::max(rep.sobolev4, m.lp_norm(4.0) / std::sqrt(m.grad_power_moment(0.75)));
    rep.sobolev3 =
        std::max(rep.sobolev3, m.lp_norm(3.0) / std::sqrt(m.grad_power_moment(0.5)));
    const double vphi_l = m.v_phi_l2();
    const double vphi_r =
        std::sqrt(m.density_coulomb_norm2()) * std::sqrt(m.halfgrad_moment());
    rep.vphi = std::max(rep.vphi, vphi_l / vphi_r);
  }

  // exchange bound |||grad|^{-1/2} R_Q||_2 <= C sqrt(Tr(R_Q^* Q)) on random
  // rank-3 kernels, Hilbert-Schmidt norm by the Hutchinson estimator
  SpatialGrid g(opts.grid_n, opts.grid_extent, opts.grid_cutoff);
  // cell-averaged |k|^{-1/2} weight at the k = 0 mode
  double cell_avg_inv_k = 0.0;
  {
    const int nn = 24;
    double s = 0.0;
    for (int a = 0; a < nn; ++a)
      for (int b = 0; b < nn; ++b)
        for (int c = 0; c < nn; ++c) {
          const double x = (a + 0.5) / nn - 0.5, y = (b + 0.5) / nn - 0.5,
                       z = (c + 0.5) / nn - 0.5;
          s += 1.0 / std::sqrt(x * x + y * y + z * z);
        }
    cell_avg_inv_k = s / (nn * nn * nn) / g.dk();
  }
  for (int t = 0; t < opts.exch_kernels; ++t) {
    std::vector<Field4> orbs;
    for (int i = 0; i < 3; ++i) {
      auto f = random_band_limited(g, opts.seed + 31, 100 * t + i);
      f.scale(1.0 / std::sqrt(norm2(g, f)));
      orbs.push_back(std::move(f));
    }
    OperatorKernel q = OperatorKernel::projector_state(g, orbs);
    const double rhs = std::sqrt(exchange_energy(g, q));
    double acc = 0.0;
    const double coeff_scale = 1.0 / std::sqrt(g.dk3());
    for (int pr = 0; pr < opts.hutchinson_probes; ++pr) {
      Field4 xi = random_band_limited(g, opts.seed + 77, 100 * t + pr);
      xi.scale(coeff_scale);
      Field4 y = exchange_apply(g, q, xi);
      for (int cc = 0; cc < 4; ++cc)
        for (std::size_t i = 0; i < g.size(); ++i) {
          const double k2 = g.k2()[i];
          const double w = (k2 > 0.0) ? std::pow(k2, -0.25) : std::sqrt(cell_avg_inv_k);
          y.comp[cc][i] *= w;
        }
      acc += norm2(g, y);
    }
    const double lhs = std::sqrt(acc / opts.hutchinson_probes);
    rep.exch = std::max(rep.exch, lhs / rhs);
  }

  GaussianMixture ref;
  ref.c = {std::pow(M_PI, -0.75)};
  ref.b = {0.5};
  rep.gauss_kato_lhs = ref.coulomb_moment();
  rep.gauss_kato_rhs = 0.5 * M_PI * ref.halfgrad_moment();
  rep.gauss_hardy_lhs = ref.hardy_moment();
  rep.gauss_hardy_rhs = 4.0 * ref.laplace_moment();
  return rep;
}

} // namespace bdf::ops
