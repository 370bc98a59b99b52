#include "bdf/cauchy.hpp"

#include "bdf/errors.hpp"
#include "bdf/quadrature.hpp"
#include "bdf/rng.hpp"

#include <cmath>

namespace bdf::ops {

namespace {

// B h = v rho h - R_Q h, everything in Fourier rep
Field4 apply_B(const OperatorKernel* q, const std::vector<double>* v, const Field4& h,
               const SpatialGrid& g) {
  Field4 out = Field4::zero(g, Rep::Fourier);
  if (v) {
    Field4 hv = h;
    hv.to_real(g);
    for (int c = 0; c < 4; ++c)
      for (std::size_t i = 0; i < g.size(); ++i) hv.comp[c][i] *= (*v)[i];
    hv.to_fourier(g);
    out.axpy(1.0, hv);
  }
  if (q) {
    Field4 rq = exchange_apply(g, *q, h);
    out.axpy(-1.0, rq);
  }
  out.mask(g);
  return out;
}

} // namespace

Field4 cauchy_apply(int j, const OperatorKernel* q, const std::vector<double>* v,
                    const Field4& h, const SpatialGrid& g, const GridDirac& gd,
                    const CauchyOptions& opts, bool adjoint_op) {
  auto nodes = quad::tan_contour(opts.nquad);
  // adjoint: same node set (symmetric), B -> B^dag
  OperatorKernel qadj;
  if (adjoint_op && q) qadj = adjoint(*q);
  const OperatorKernel* qq = (adjoint_op && q) ? &qadj : q;

  Field4 out = Field4::zero(g, Rep::Fourier);
  for (std::size_t m = 0; m < nodes.size(); ++m) {
    Field4 w = h;
    gd.apply_resolvent(w, nodes.x[m]);
    for (int step = 0; step < j; ++step) {
      w = apply_B(qq, v, w, g);
      gd.apply_resolvent(w, nodes.x[m]);
    }
    out.axpy(nodes.w[m], w);
  }
  const double sign = (j % 2 == 0) ? -1.0 : 1.0; // (-1)^(j+1)
  out.scale(sign / (2.0 * M_PI));
  out.mask(g);
  return out;
}

CauchyResult cauchy_term(int j, const OperatorKernel* q, const Density* rho,
                         const SpatialGrid& g, const GridDirac& gd,
                         const CauchyOptions& opts) {
  if (j < 1 || j > 3) throw UnsupportedOrder("cauchy_term: j must be in 1..3");
  std::vector<double> vfield;
  const std::vector<double>* v = nullptr;
  if (rho) {
    vfield = coulomb_potential(g, *rho);
    v = &vfield;
  }

  const std::size_t max_rank = 4 * g.n_masked_modes();
  const std::size_t n_probe =
      std::min(opts.rank_cap + opts.oversample, max_rank);

  // randomized range finder: span{T xi_k} -> orthonormal basis u_m,
  // then T ~= sum_m |u_m><T^dag u_m|
  std::vector<Field4> y;
  y.reserve(n_probe);
  for (std::size_t k = 0; k < n_probe; ++k) {
    Field4 xi = random_band_limited(g, opts.seed, k);
    y.push_back(cauchy_apply(j, q, v, xi, g, gd, opts));
  }
  std::vector<Field4> basis;
  double scale = 0.0;
  for (const auto& f : y) scale = std::max(scale, norm2(g, f));
  scale = std::sqrt(std::max(scale, 1e-300));
  for (auto& f : y) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) f.axpy(-dot(g, b, f), b);
    const double nf = std::sqrt(std::max(norm2(g, f), 0.0));
    if (nf > 1e-12 * scale && basis.size() < opts.rank_cap) {
      f.scale(1.0 / nf);
      basis.push_back(std::move(f));
    }
  }

  CauchyResult res;
  res.kernel.pairs.reserve(basis.size());
  for (const auto& u : basis) {
    Field4 z = cauchy_apply(j, q, v, u, g, gd, opts, /*adjoint=*/true);
    OperatorKernel::Pair p;
    p.left = u;
    p.right = std::move(z);
    p.weight = 1.0;
    res.kernel.pairs.push_back(std::move(p));
  }

  // discarded-weight estimate on fresh probes
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t < 2; ++t) {
    Field4 xi = random_band_limited(g, opts.seed + 7919, n_probe + t);
    Field4 exact = cauchy_apply(j, q, v, xi, g, gd, opts);
    Field4 approx = apply(g, res.kernel, xi);
    approx.axpy(-1.0, exact);
    num += norm2(g, approx);
    den += norm2(g, exact);
  }
  res.report.rank_before = n_probe;
  res.report.rank_after = res.kernel.rank();
  res.report.discarded_weight = (den > 0.0) ? std::sqrt(num / den) : 0.0;
  if (res.report.discarded_weight > opts.loss_tol)
    throw CompressionLoss("cauchy_term: rank cap loses too much weight",
                          res.report.discarded_weight);

  const bool want_herm = (!q || q->hermitian);
  if (want_herm) {
    hermitize(res.kernel);
    CompressOptions co;
    co.rank_cap = opts.rank_cap;
    co.drop_tol = opts.drop_tol;
    co.loss_tol = 1.0; // hermitization never discards real weight
    co.enforce_hermitian = true;
    compress(g, res.kernel, co);
  }
  return res;
}

clifford::DiracElement kernel_element(const SpatialGrid& g, const FieldOp& op,
                                      std::size_t p_idx, std::size_t q_idx) {
  clifford::DiracElement M = clifford::DiracElement::zero(clifford::Grading::Mixed);
  for (int b = 0; b < 4; ++b) {
    Field4 e = Field4::zero(g, Rep::Fourier);
    e.comp[b][q_idx] = 1.0;
    Field4 out = op(e);
    for (int a = 0; a < 4; ++a) M(a, b) = out.comp[a][p_idx];
  }
  return M;
}

clifford::DiracElement rhat_element(const SpatialGrid& g, const OperatorKernel& q,
                                    std::size_t p_idx, std::size_t q_idx) {
  return kernel_element(
      g, [&](const Field4& h) { return exchange_apply(g, q, h); }, p_idx, q_idx);
}

clifford::DiracElement q10_closed_form_element(const SpatialGrid& g,
                                               const GridDirac& gd,
                                               const OperatorKernel& q,
                                               std::size_t p_idx, std::size_t q_idx) {
  auto R = rhat_element(g, q, p_idx, q_idx);
  const auto& sp = gd.sigma(p_idx);
  const auto& sq = gd.sigma(q_idx);
  auto Sp = clifford::sign_from_sigma(sp[0], {sp[1], sp[2], sp[3]});
  auto Sq = clifford::sign_from_sigma(sq[0], {sq[1], sq[2], sq[3]});
  const double pref = 0.5 / (gd.escript(p_idx) + gd.escript(q_idx));
  return (R - Sp * R * Sq) * clifford::cxd(pref);
}

// ---- growth diagnostic -----------------------------------------------------

double RadialProfile::operator()(double r) const {
  if (r <= 0.0) return 0.0;
  const double lr = std::log(r);
  double s = 0.0;
  for (const auto& b : bumps) {
    const double t = (lr - b.mu) / b.s;
    s += b.c * std::exp(-0.5 * t * t);
  }
  return s;
}

namespace {

double radial_dot(const RadialProfile& a, const RadialProfile& b, double r0,
                  double lambda) {
  auto rule = quad::composite(8, quad::log_breaks(r0 * 1e-2, lambda, 8));
  return quad::integrate(rule, [&](double r) { return 4.0 * M_PI * r * r * a(r) * b(r); });
}

struct ProbeKernel {
  std::vector<RadialProfile> u, v;
  std::vector<double> w;
};

double probe_hs_norm2(const ProbeKernel& k, double r0, double lambda) {
  double s = 0.0;
  for (std::size_t i = 0; i < k.w.size(); ++i)
    for (std::size_t j = 0; j < k.w.size(); ++j)
      s += 4.0 * k.w[i] * k.w[j] * radial_dot(k.u[i], k.u[j], r0, lambda) *
           radial_dot(k.v[j], k.v[i], r0, lambda);
  return s;
}

// C(p,q) = int dl u(|p-l|) v(|q-l|)/l^2 via rays around p
double coulomb_correlation(const ProbeKernel& k, const Vec3& p, const Vec3& q,
                           double lambda, const GrowthOptions& o) {
  const auto& cosr = quad::gauss_legendre(o.ray_cos_gl);
  auto phir = quad::gauss_legendre(o.ray_phi_gl, 0.0, 2.0 * M_PI);
  double total = 0.0;
  for (std::size_t ic = 0; ic < cosr.size(); ++ic) {
    const double ct = cosr.x[ic], st = std::sqrt(1.0 - ct * ct);
    for (std::size_t ip = 0; ip < phir.size(); ++ip) {
      const Vec3 n{st * std::cos(phir.x[ip]), st * std::sin(phir.x[ip]), ct};
      // exit of m = p + rho n from {|m| <= L} and {|q - p + m| <= L}
      double rho_max = std::numeric_limits<double>::max();
      for (const Vec3& c : {p, q}) {
        const double beta = bdf::dot(c, n);
        const double gap = lambda * lambda - bdf::dot(c, c);
        rho_max = std::min(rho_max, -beta + std::sqrt(std::max(beta * beta + gap, 0.0)));
      }
      if (rho_max <= 0.0) continue;
      auto breaks = quad::log_breaks(std::min(1e-2, 0.5 * rho_max), rho_max,
                                     o.ray_panels_per_decade);
      breaks.insert(breaks.begin(), 0.0);
      auto rr = quad::composite(4, breaks);
      double ray = 0.0;
      for (std::size_t iq = 0; iq < rr.size(); ++iq) {
        const Vec3 mp = p + rr.x[iq] * n;
        const Vec3 mq = q + rr.x[iq] * n;
        const double rp = norm(mp), rq = norm(mq);
        double acc = 0.0;
        for (std::size_t i = 0; i < k.w.size(); ++i)
          acc += k.w[i] * k.u[i](rp) * k.v[i](rq);
        ray += rr.w[iq] * acc;
      }
      total += cosr.w[ic] * phir.w[ip] * ray;
    }
  }
  return total;
}

} // namespace

GrowthResult f10_growth_diagnostic(const std::vector<const DressedDirac*>& dressed,
                                   const GrowthOptions& opts) {
  GrowthResult out;
  const double c0 = 1.0 / (4.0 * M_PI * M_PI);
  for (const auto* dp : dressed) {
    const DressedDirac& d = *dp;
    const double lambda = d.lambda();
    const double hi = std::log(lambda);
    double best_bound = 0.0, best_raw = 0.0;
    for (int kk = 0; kk < opts.n_kernels; ++kk) {
      rng::Counter rc{opts.seed, std::uint64_t(kk), 0};
      ProbeKernel pk;
      for (int i = 0; i < 3; ++i) {
        RadialProfile u, v;
        // spectrally flat probes: most of the momentum-space mass in the top
        // decades, i.e. kernels concentrated near the diagonal in x space,
        // which saturate the weighted exchange bound
        for (int b = 0; b < 3; ++b) {
          u.bumps.push_back({rc.uniform(0.5, 1.5) * (rc.next_double() < 0.5 ? -1 : 1),
                             hi - rc.uniform(0.0, 3.5), rc.uniform(0.9, 2.0)});
          v.bumps.push_back({rc.uniform(0.5, 1.5) * (rc.next_double() < 0.5 ? -1 : 1),
                             hi - rc.uniform(0.0, 3.5), rc.uniform(0.9, 2.0)});
        }
        pk.u.push_back(u);
        pk.v.push_back(v);
        pk.w.push_back(1.0);
      }
      const double q2 = probe_hs_norm2(pk, opts.r0, lambda);
      if (q2 <= 0.0) continue;

      // ||F10 Q||_2^2      = 8 c0^2  iint x(p,q) C^2 / (E_p + E_q)^2 dp dq
      // ||D^-1/2 R D^-1/2||_2^2 = 16 c0^2 iint C^2 / (E_p E_q) dp dq
      const double logr = std::log(lambda / opts.r0);
      double sum_raw = 0.0, sum_bound = 0.0;
      for (std::uint64_t s = 0; s < opts.mc_pairs; ++s) {
        rng::Counter sc{opts.seed ^ 0x5bd1e995ULL, std::uint64_t(kk) << 32 | s, 0};
        const double P = opts.r0 * std::exp(logr * sc.next_double());
        const double Q = opts.r0 * std::exp(logr * sc.next_double());
        const double cg = 2.0 * sc.next_double() - 1.0;
        const Vec3 p{0.0, 0.0, P};
        const Vec3 q{Q * std::sqrt(1.0 - cg * cg), 0.0, Q * cg};
        const double weight = (4.0 * M_PI * P * P * P * logr) *
                              (2.0 * M_PI * Q * Q * Q * logr) * 2.0;
        const double x =
            1.0 - (d.sigma0(P) * d.sigma0(Q) + d.sigma1(P) * d.sigma1(Q) * cg);
        const double C = coulomb_correlation(pk, p, q, lambda, opts);
        const double Ep = d.e_script(P), Eq = d.e_script(Q);
        sum_raw += weight * x * C * C / ((Ep + Eq) * (Ep + Eq));
        sum_bound += weight * C * C / (Ep * Eq);
      }
      const double f2 = 8.0 * c0 * c0 * sum_raw / double(opts.mc_pairs);
      const double b2 = 16.0 * c0 * c0 * sum_bound / double(opts.mc_pairs);
      best_raw = std::max(best_raw, std::sqrt(std::max(f2, 0.0) / q2));
      best_bound = std::max(best_bound, std::sqrt(std::max(b2, 0.0) / q2));
    }
    out.lambdas.push_back(lambda);
    out.max_ratio.push_back(best_bound);
    out.max_ratio_raw.push_back(best_raw);
  }
  auto fit = [&](const std::vector<double>& r) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(out.lambdas.size());
    for (std::size_t i = 0; i < out.lambdas.size(); ++i) {
      const double x = std::log(std::log(out.lambdas[i]));
      const double y = std::log(std::max(r[i], 1e-300));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  out.exponent = fit(out.max_ratio);
  out.exponent_raw = fit(out.max_ratio_raw);
  return out;
}

} // namespace bdf::ops
