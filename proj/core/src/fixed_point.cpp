#include "bdf/fixed_point.hpp"

#include "bdf/errors.hpp"
#include "bdf/rng.hpp"

#include <cmath>

namespace bdf::fp {

using ops::Density;
using ops::Field4;
using ops::OperatorKernel;

namespace {

// HS inner product <A, B> = Tr(A^dag B) from the pair lists
double hs_inner(const ops::SpatialGrid& g, const OperatorKernel& a,
                const OperatorKernel& b) {
  ops::cxd s = 0.0;
  for (const auto& pa : a.pairs)
    for (const auto& pb : b.pairs) {
      const ops::cxd lf = ops::dot(g, pa.left, pb.left);
      const ops::cxd rg = ops::dot(g, pb.right, pa.right);
      s += pa.weight * pb.weight * lf * rg;
    }
  return s.real();
}

double hs_distance(const ops::SpatialGrid& g, const OperatorKernel& a,
                   const OperatorKernel& b) {
  const double d2 =
      ops::hs_norm2(g, a) + ops::hs_norm2(g, b) - 2.0 * hs_inner(g, a, b);
  return std::sqrt(std::max(d2, 0.0));
}

OperatorKernel concat(const OperatorKernel& a, const OperatorKernel& b,
                      double wb = 1.0) {
  OperatorKernel out = a;
  for (const auto& p : b.pairs) {
    out.pairs.push_back(p);
    out.pairs.back().weight *= wb;
  }
  out.hermitian = a.hermitian && b.hermitian && wb == wb;
  return out;
}

} // namespace

ops::OperatorKernel make_electron_projector(const ops::SpatialGrid& g,
                                            const ops::GridDirac& gd, int M,
                                            std::uint64_t seed) {
  std::vector<Field4> orbs;
  rng::Counter rc{seed, 0, 0};
  const double w0 = 1.25 + 0.5 * rc.next_double();
  for (int j = 0; j < M; ++j) {
    Field4 f = Field4::zero(g, ops::Rep::Real);
    const double w = w0 + 0.5 * j;
    const Vec3 c{0.3 * j, -0.2 * j, 0.1 * j};
    const int comp = j % 2;
    for (std::size_t i = 0; i < g.size(); ++i) {
      Vec3 x = g.point(i) - c;
      f.comp[comp][i] = std::exp(-bdf::dot(x, x) / (2.0 * w * w));
    }
    f.to_fourier(g);
    f.mask(g);
    gd.apply_projector(f, +1);
    // orthonormalize against the previous orbitals
    for (const auto& prev : orbs) f.axpy(-ops::dot(g, prev, f), prev);
    const double nf = std::sqrt(ops::norm2(g, f));
    if (nf < 1e-10)
      throw NumericalError("make_electron_projector: degenerate orbital set");
    f.scale(1.0 / nf);
    orbs.push_back(std::move(f));
  }
  return OperatorKernel::projector_state(g, std::move(orbs));
}

ScfState scf_initial_state(const ops::SpatialGrid& g, ops::OperatorKernel N,
                           ops::Density nu) {
  ScfState st;
  st.n = ops::density_of(g, N).density;
  st.N = std::move(N);
  st.nu = std::move(nu);
  st.gamma.hermitian = true;
  // rho'' = n - nu at the starting point (gamma = 0)
  st.rho_pp = Density::zero(g);
  for (std::size_t i = 0; i < g.size(); ++i)
    st.rho_pp.values[i] = st.n.values[i] - st.nu.values[i];
  st.rho_pp.invalidate();
  return st;
}

void f1_step(ScfState& state, const PhysicalParams& params, const ops::SpatialGrid& g,
             const ops::GridDirac& gd, const vpol::RenormFunctions& renorm,
             const ScfOptions& opts) {
  if (opts.order < 1 || opts.order > 3)
    throw UnsupportedOrder("f1_step: order must be 1..3");
  const double alpha = params.alpha;

  OperatorKernel qprime = concat(state.N, state.gamma);
  qprime.hermitian = true;

  OperatorKernel new_gamma;
  new_gamma.hermitian = true;
  std::vector<Density> densities(std::size_t(opts.order) + 1); // index l >= 2 used
  Density rho10 = Density::zero(g);

  if (alpha != 0.0) {
    // j = 1 split into the pure-v and pure-R parts: the R part feeds both the
    // kernel update and the rho update (its density is rho10)
    auto q01 = ops::cauchy_term(1, nullptr, &state.rho_pp, g, gd, opts.cauchy);
    auto q10 = ops::cauchy_term(1, &qprime, nullptr, g, gd, opts.cauchy);
    rho10 = ops::density_of(g, q10.kernel).density;
    new_gamma = concat(concat(q01.kernel, q10.kernel), OperatorKernel{});
    for (auto& p : new_gamma.pairs) p.weight *= alpha;
    for (int l = 2; l <= opts.order; ++l) {
      auto ql = ops::cauchy_term(l, &qprime, &state.rho_pp, g, gd, opts.cauchy);
      densities[l] = ops::density_of(g, ql.kernel).density;
      const double al = std::pow(alpha, l);
      for (auto& p : ql.kernel.pairs) {
        new_gamma.pairs.push_back(p);
        new_gamma.pairs.back().weight *= al;
      }
    }
    ops::CompressOptions co;
    co.rank_cap = opts.cauchy.rank_cap;
    co.drop_tol = opts.cauchy.drop_tol;
    co.loss_tol = 1.0;
    co.enforce_hermitian = true;
    ops::compress(g, new_gamma, co);
  }

  // rho update in Fourier space with the 1/(1 + alpha B(k)) prefactor
  const auto& nh = state.n.fourier(g);
  const auto& nuh = state.nu.fourier(g);
  const auto& r10h = rho10.fourier(g);
  std::vector<ops::cxd> rh(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double k = std::sqrt(g.k2()[i]);
    ops::cxd num = (nh[i] - nuh[i]) + alpha * r10h[i];
    for (int l = 2; l <= opts.order; ++l)
      if (!densities[l].values.empty())
        num += std::pow(alpha, l) * densities[l].fourier(g)[i];
    const double Bk = renorm.B_at(k);
    rh[i] = num / (1.0 + alpha * Bk);
  }
  g.fft_backward(rh);
  Density new_rho = Density::zero(g);
  for (std::size_t i = 0; i < g.size(); ++i) new_rho.values[i] = rh[i].real();
  new_rho.invalidate();

  const double res = hs_distance(g, new_gamma, state.gamma);
  IterationRecord rec;
  rec.iter = int(state.history.size()) + 1;
  rec.residual = res;
  rec.ratio = state.history.empty()
                  ? 0.0
                  : res / std::max(state.history.back().residual, 1e-300);
  state.gamma = std::move(new_gamma);
  state.rho_pp = std::move(new_rho);
  rec.total_charge = state.rho_pp.integral_real(g);
  state.history.push_back(rec);
}

ScfState scf_solve(const PhysicalParams& params, const ops::SpatialGrid& g,
                   const ops::GridDirac& gd, const vpol::RenormFunctions& renorm,
                   ops::OperatorKernel N, ops::Density nu, const ScfOptions& opts) {
  ScfState st = scf_initial_state(g, std::move(N), std::move(nu));
  int non_contracting = 0;
  for (int it = 0; it < opts.max_iter; ++it) {
    f1_step(st, params, g, gd, renorm, opts);
    const auto& rec = st.history.back();
    const double scale = std::max(1.0, std::sqrt(ops::hs_norm2(g, st.gamma)));
    if (rec.residual <= opts.tol * scale) {
      st.converged = true;
      break;
    }
    if (it >= 1 && rec.ratio >= 1.0) {
      if (++non_contracting >= 3) {
        std::vector<double> ratios;
        for (const auto& r : st.history) ratios.push_back(r.ratio);
        throw NonContractionError("scf_solve: no contraction for 3 steps (outside regime)",
                                  ratios);
      }
    } else {
      non_contracting = 0;
    }
  }
  return st;
}

ops::Density linear_response_density(const ops::SpatialGrid& g, const ops::Density& n,
                                     const ops::Density& nu,
                                     const vpol::RenormFunctions& renorm) {
  const auto& nh = n.fourier(g);
  const auto& nuh = nu.fourier(g);
  std::vector<ops::cxd> rh(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double k = std::sqrt(g.k2()[i]);
    rh[i] = -renorm.F_at(k) * (nh[i] - nuh[i]);
  }
  g.fft_backward(rh);
  Density out = Density::zero(g);
  for (std::size_t i = 0; i < g.size(); ++i) out.values[i] = rh[i].real();
  out.invalidate();
  return out;
}

ops::Density linear_response_density_with_tn(
    const ops::SpatialGrid& g, const ops::GridDirac& gd, const ops::OperatorKernel& N,
    const ops::Density& n, const ops::Density& nu, const vpol::RenormFunctions& renorm,
    double alpha, const ops::CauchyOptions& copts) {
  Density out = linear_response_density(g, n, nu, renorm);
  // t_N = rho(T[N] - N) ~ alpha rho(F10 N) + alpha^2 rho(F10^2 N)
  auto f1 = ops::cauchy_term(1, &N, nullptr, g, gd, copts);
  auto f2 = ops::cauchy_term(1, &f1.kernel, nullptr, g, gd, copts);
  Density t1 = ops::density_of(g, f1.kernel).density;
  Density t2 = ops::density_of(g, f2.kernel).density;
  const auto& t1h = t1.fourier(g);
  const auto& t2h = t2.fourier(g);
  std::vector<ops::cxd> rh(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double k = std::sqrt(g.k2()[i]);
    const ops::cxd tn = alpha * t1h[i] + alpha * alpha * t2h[i];
    rh[i] = (1.0 - renorm.F_at(k)) * tn;
  }
  g.fft_backward(rh);
  for (std::size_t i = 0; i < g.size(); ++i) out.values[i] += rh[i].real();
  out.invalidate();
  return out;
}

std::vector<RenormRow> renorm_table(const std::vector<double>& alphas,
                                    const std::vector<double>& lambdas,
                                    const RenormTableOptions& opts) {
  std::vector<RenormRow> rows;
  ops::SpatialGrid g(opts.grid_n, opts.grid_extent, opts.grid_cutoff);
  for (double lambda : lambdas) {
    for (double alpha : alphas) {
      PhysicalParams p;
      p.alpha = alpha;
      p.lambda = lambda;
      p.M = opts.M;
      p.nu = (opts.Z != 0.0) ? NuSpec::gaussian(opts.Z, 1.0) : NuSpec::none();
      auto d = dress(p);
      vpol::VpolOptions vo = opts.vpol;
      vo.jmax = opts.jmax;
      auto rf = vpol::assemble(d, p, vo);

      RenormRow row;
      row.alpha = alpha;
      row.lambda = lambda;
      row.L = p.L();
      row.f0 = rf.f0();
      row.z3_formula = rf.z3;
      row.neutral = (std::abs(double(opts.M) - opts.Z) < 1e-12);
      if (!row.neutral) {
        ops::GridDirac gd(g, d);
        auto N = make_electron_projector(g, gd, opts.M, opts.seed);
        auto n = ops::density_of(g, N).density;
        auto nu = (opts.Z != 0.0) ? ops::gaussian_density(g, opts.Z, 1.0)
                                  : Density::zero(g);
        auto lin = linear_response_density(g, n, nu, rf);
        const double observed = lin.integral_real(g) + n.integral_real(g) -
                                nu.integral_real(g);
        row.z3_quadrature = observed / (double(opts.M) - opts.Z);
      } else {
        row.z3_quadrature = std::nan("");
      }
      rows.push_back(row);
    }
  }
  return rows;
}

} // namespace bdf::fp
