#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bdf/cauchy.hpp"
#include "bdf/energy.hpp"
#include "bdf/errors.hpp"
#include "bdf/rng.hpp"

#include <cmath>

using namespace bdf;
using namespace bdf::ops;

namespace {

OperatorKernel random_state(const SpatialGrid& g, int rank, std::uint64_t seed) {
  std::vector<Field4> orbs;
  for (int i = 0; i < rank; ++i) {
    auto f = random_band_limited(g, seed, i);
    for (const auto& prev : orbs) f.axpy(-dot(g, prev, f), prev);
    f.scale(1.0 / std::sqrt(norm2(g, f)));
    orbs.push_back(std::move(f));
  }
  return OperatorKernel::projector_state(g, orbs);
}

} // namespace

TEST_CASE("coulomb bilinear: gaussian self-energy oracle") {
  SpatialGrid g(48, 16.0, 8.0);
  // |phi|^2 with phi = (2/pi)^{3/4} e^{-r^2}: width^2 = 1/4, D = 2/sqrt(pi)
  auto rho = gaussian_density(g, 1.0, 0.5);
  const double D = coulomb_bilinear(g, rho, rho);
  CHECK(D == doctest::Approx(2.0 / std::sqrt(M_PI)).epsilon(1e-4));
  CHECK(rho.integral_real(g) ==
        doctest::Approx(rho.integral_fourier(g)).epsilon(1e-10));

  // zero density
  auto z = Density::zero(g);
  CHECK(coulomb_bilinear(g, rho, z) == 0.0);

  // translation invariance (shift both densities by grid-commensurate offsets)
  auto r2 = gaussian_density(g, 1.0, 0.5, {1.0, -0.5, 0.25});
  CHECK(coulomb_bilinear(g, r2, r2) == doctest::Approx(D).epsilon(1e-10));
}

TEST_CASE("band-limit mask is idempotent bit for bit") {
  SpatialGrid g(16, 10.0, 3.0);
  auto f = random_band_limited(g, 9, 0);
  // widen: add unmasked noise then mask twice
  rng::Counter rc{3, 0, 0};
  for (int c = 0; c < 4; ++c)
    for (auto& v : f.comp[c]) v += cxd(rc.normal(), rc.normal());
  f.mask(g);
  auto once = f;
  f.mask(g);
  for (int c = 0; c < 4; ++c)
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(f.comp[c][i].real() == once.comp[c][i].real());
      CHECK(f.comp[c][i].imag() == once.comp[c][i].imag());
    }
}

TEST_CASE("rank-one state: density, trace identity, exchange = direct") {
  SpatialGrid g(24, 16.0, 3.5);
  PhysicalParams p;
  p.alpha = 0.02;
  p.lambda = 1e3;
  auto d = dress(p);
  GridDirac gd(g, d);

  auto q = random_state(g, 1, 4);
  auto dr = density_of(g, q);
  CHECK(dr.max_imag < 1e-12);
  CHECK(dr.density.integral_real(g) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(trace_of(g, q).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(blockwise_trace(g, gd, q) == doctest::Approx(1.0).epsilon(1e-10));

  const double ex = exchange_energy(g, q);
  const double dd = coulomb_bilinear(g, dr.density, dr.density);
  CHECK(ex == doctest::Approx(dd).epsilon(1e-10));
}

TEST_CASE("kato bound on random rank-3 kernels") {
  SpatialGrid g(24, 16.0, 3.5);
  for (int t = 0; t < 20; ++t) {
    auto q = random_state(g, 3, 100 + t);
    CHECK(2.0 / M_PI * exchange_energy(g, q) <= kinetic_grad_norm(g, q) * (1.0 + 1e-12));
  }
}

TEST_CASE("bdf energy: zero state, positive sector, positivity bound") {
  SpatialGrid g(24, 16.0, 3.5);
  PhysicalParams p;
  p.alpha = 0.05;
  p.lambda = 1e3;
  auto d = dress(p);
  GridDirac gd(g, d);
  auto nu = Density::zero(g);

  OperatorKernel zero;
  zero.hermitian = true;
  CHECK(bdf_energy(g, gd, zero, nu, p).total() == 0.0);

  rng::Counter rc{8, 0, 0};
  for (int t = 0; t < 5; ++t) {
    // random admissible 0 <= Q <= 1 state in the + sector
    std::vector<Field4> orbs;
    for (int i = 0; i < 3; ++i) {
      auto f = random_band_limited(g, 55 + t, i);
      gd.apply_projector(f, +1);
      for (const auto& prev : orbs) f.axpy(-dot(g, prev, f), prev);
      f.scale(1.0 / std::sqrt(norm2(g, f)));
      orbs.push_back(std::move(f));
    }
    auto q = OperatorKernel::projector_state(g, orbs);
    for (auto& pr : q.pairs) pr.weight = rc.next_double();
    auto e = bdf_energy(g, gd, q, nu, p);
    // kinetic term of a + sector state: each orbital costs at least m
    double wsum = 0.0;
    for (const auto& pr : q.pairs) wsum += pr.weight;
    CHECK(e.kinetic >= d.m() * wsum * (1.0 - 1e-10));
    // first display of the energy a-priori bound at nu = 0
    CHECK(e.total() >= (1.0 - p.alpha * M_PI / 4.0) * e.kinetic - 1e-10);
  }

  OperatorKernel nonherm = random_state(g, 1, 3);
  nonherm.hermitian = false;
  CHECK_THROWS_AS(bdf_energy(g, gd, nonherm, nu, p), std::invalid_argument);
}

TEST_CASE("q10 closed form matches the contour construction") {
  SpatialGrid g(16, 12.0, 3.0);
  PhysicalParams p;
  p.alpha = 0.02;
  p.lambda = 1e3;
  auto d = dress(p);
  GridDirac gd(g, d);
  auto q = random_state(g, 2, 12);

  CauchyOptions co;
  co.nquad = 80;
  rng::Counter rc{21, 0, 0};
  int checked = 0;
  double worst = 0.0;
  while (checked < 6) {
    const auto pi = std::size_t(rc.next_double() * g.size());
    const auto qi = std::size_t(rc.next_double() * g.size());
    if (!g.mask()[pi] || !g.mask()[qi]) continue;
    ++checked;
    auto closed = q10_closed_form_element(g, gd, q, pi, qi);
    auto contour = kernel_element(
        g, [&](const Field4& h) { return cauchy_apply(1, &q, nullptr, h, g, gd, co); },
        pi, qi);
    worst = std::max(worst,
                     (closed - contour).frobenius_norm() /
                         std::max(closed.frobenius_norm(), 1e-300));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("cauchy term j=1, density seed: vanishing ++/-- blocks") {
  SpatialGrid g(16, 12.0, 3.0);
  PhysicalParams p;
  p.alpha = 0.02;
  p.lambda = 1e3;
  auto d = dress(p);
  GridDirac gd(g, d);
  auto rho = gaussian_density(g, 1.0, 1.0);
  CauchyOptions co;
  co.nquad = 48;
  co.rank_cap = 40;
  auto res = cauchy_term(1, nullptr, &rho, g, gd, co);
  auto blocks = block_hs_norms(g, gd, res.kernel); // --, -+, +-, ++
  const double total = std::sqrt(hs_norm2(g, res.kernel));
  MESSAGE("blocks: ", blocks[0], " ", blocks[1], " ", blocks[2], " ", blocks[3]);
  CHECK(blocks[0] <= 1e-8 * total);
  CHECK(blocks[3] <= 1e-8 * total);
  CHECK(res.report.discarded_weight < 1e-6);
}

TEST_CASE("furry: the pure-v j=2 term has vanishing density") {
  SpatialGrid g(16, 12.0, 3.0);
  PhysicalParams p;
  p.alpha = 0.02;
  p.lambda = 1e3;
  auto d = dress(p);
  GridDirac gd(g, d);
  auto rho = gaussian_density(g, 1.0, 1.0);
  CauchyOptions co;
  co.nquad = 48;
  co.rank_cap = 48;
  co.drop_tol = 1e-12;
  auto q02 = cauchy_term(2, nullptr, &rho, g, gd, co);
  auto dq = density_of(g, q02.kernel);
  double l2 = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    l2 += dq.density.values[i] * dq.density.values[i];
    ref += rho.values[i] * rho.values[i];
  }
  // the term enters the iteration as alpha^2 Q_02; its density contribution
  // must stay below 1e-8 of the total density norm
  const double rel = p.alpha * p.alpha * std::sqrt(l2) / std::sqrt(ref);
  MESSAGE("alpha^2 |rho(Q_02)| / |rho| = ", rel);
  CHECK(rel < 1e-8);
}

TEST_CASE("compression reports loss and can throw") {
  SpatialGrid g(16, 12.0, 3.0);
  auto q = random_state(g, 6, 77);
  CompressOptions co;
  co.rank_cap = 2;
  co.loss_tol = 1e-12; // cannot hold 6 orthonormal directions in rank 2
  CHECK_THROWS_AS(compress(g, q, co), CompressionLoss);
  auto q2 = random_state(g, 6, 77);
  CompressOptions ok;
  ok.rank_cap = 6;
  auto rep = compress(g, q2, ok);
  CHECK(rep.rank_after == 6);
  CHECK(rep.discarded_weight < 1e-12);
}

TEST_CASE("k constant: closed form, quadrature, asymptotics") {
  CHECK(k_constant(2.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(k_constant(3.0) ==
        doctest::Approx(k_constant_quadrature(3.0)).epsilon(1e-10));
  CHECK_THROWS_AS(k_constant(1.0), NumericalError);
  // K_a sqrt(a) bounded as a grows
  double prev = 1e300;
  for (double a : {10.0, 100.0, 1000.0}) {
    const double v = k_constant(a) * std::sqrt(a);
    CHECK(v < 1.0);
    CHECK(v > 0.1);
    prev = v;
  }
  (void)prev;
}

TEST_CASE("density translation covariance") {
  SpatialGrid g(24, 16.0, 3.5);
  auto a = gaussian_density(g, 1.0, 0.8, {0, 0, 0});
  auto b = gaussian_density(g, 1.0, 0.8, {2.0, 0.0, 0.0}); // grid-commensurate
  CHECK(a.integral_real(g) == doctest::Approx(b.integral_real(g)).epsilon(1e-12));
  CHECK(coulomb_bilinear(g, a, a) ==
        doctest::Approx(coulomb_bilinear(g, b, b)).epsilon(1e-10));
}
