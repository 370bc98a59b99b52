#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bdf/errors.hpp"
#include "bdf/quadrature.hpp"
#include "bdf/vacuum_polarization.hpp"

#include <cmath>

using namespace bdf;

TEST_CASE("B(0) against the free-operator radial oracle") {
  // for g0 = 1, g1 = p the full 2-d lens integral collapses to
  // (1/pi) int_0^L u^2 (1 + 2u^2/3) / E(u)^5 du; evaluate it independently
  for (double lambda : {1e2, 1e3}) {
    PhysicalParams p;
    p.alpha = 0.0;
    p.lambda = lambda;
    auto d = dress(p);
    const double b0 = vpol::compute_B(0.0, d);
    auto rule = quad::composite(12, quad::log_breaks(1e-6, lambda, 10));
    const double oracle = quad::integrate(rule, [](double u) {
                            const double E = std::sqrt(1.0 + u * u);
                            return u * u * (1.0 + 2.0 * u * u / 3.0) / std::pow(E, 5.0);
                          }) /
                          M_PI;
    CHECK(b0 == doctest::Approx(oracle).epsilon(1e-8));
  }
}

TEST_CASE("B: support, small-k continuity, recorded monotonicity") {
  PhysicalParams p;
  p.alpha = 0.02;
  p.lambda = 100.0;
  auto d = dress(p);
  CHECK(vpol::compute_B(200.0, d) == 0.0);
  CHECK_THROWS_AS(vpol::compute_B(201.0, d), CutoffViolation);
  CHECK_THROWS_AS(vpol::compute_B(-1.0, d), CutoffViolation);

  // the k -> 0 Taylor branch joins the finite-k branch smoothly
  const double b0 = vpol::compute_B(0.0, d);
  const double beps = vpol::compute_B(1e-7, d);
  CHECK(b0 == doctest::Approx(beps).epsilon(1e-9));

  double prev = 1e300;
  bool monotone = true;
  for (double k : {0.0, 0.5, 2.0, 10.0, 50.0, 120.0, 199.0}) {
    const double b = vpol::compute_B(k, d);
    if (b > prev + 1e-12) monotone = false;
    prev = b;
  }
  MESSAGE("B monotone decreasing: ", monotone);
  CHECK(monotone); // recorded; holds comfortably away from k ~ 0
}

TEST_CASE("radiality: matrix Monte-Carlo along three directions") {
  PhysicalParams p;
  p.alpha = 0.05;
  p.lambda = 10.0;
  auto d = dress(p);
  const double k = 3.0;
  const double det = vpol::compute_B(k, d);
  const double s3 = 1.0 / std::sqrt(3.0);
  for (const Vec3& e : {Vec3{0, 0, 1}, Vec3{1, 0, 0}, Vec3{s3, s3, s3}}) {
    auto mc = vpol::compute_B_mc(k, e, d, 200000, 7);
    CHECK(std::abs(mc.value - det) < 3.5 * mc.stderr_);
  }
}

TEST_CASE("J = 1 term: deterministic vs Monte-Carlo estimators") {
  PhysicalParams p;
  p.alpha = 0.05;
  p.lambda = 10.0;
  auto d = dress(p);
  for (double k : {0.0, 1.0}) {
    auto det = vpol::compute_f_term(1, k, d);
    vpol::VpolOptions o;
    o.mc_samples = 400000;
    o.seed = 42;
    auto mc = vpol::compute_f_term_mc(1, k, d, o);
    CHECK(std::abs(det.value - mc.value) < 3.5 * mc.stderr_ + 2e-3 * std::abs(det.value));
  }
  CHECK_THROWS_AS(vpol::compute_f_term(4, 0.0, d), UnsupportedOrder);
}

TEST_CASE("J = 2: Monte-Carlo vs coarse nested quadrature within 3 sigma") {
  PhysicalParams p;
  p.alpha = 0.08;
  p.lambda = 6.0;
  auto d = dress(p);
  vpol::VpolOptions o;
  o.mc_samples = 500000;
  o.seed = 5;
  auto mc = vpol::compute_f_term(2, 0.5, d, o);
  vpol::VpolOptions no;
  no.u_gl = 3;
  no.u_per_decade = 3;
  no.ell_cos_gl = 6;
  no.ell_phi_gl = 4;
  no.ell_ray_gl = 3;
  const double nested = vpol::compute_f_term2_nested(0.5, d, no);
  MESSAGE("mc = ", mc.value, " +- ", mc.stderr_, ", nested = ", nested);
  CHECK(std::abs(mc.value - nested) < 3.0 * mc.stderr_ + 0.05 * std::abs(nested));
}

TEST_CASE("assemble: series structure, Neumann identity, Z3, L1 norm") {
  PhysicalParams p;
  p.alpha = 0.02;
  p.lambda = 50.0;
  auto d = dress(p);
  vpol::VpolOptions o;
  o.jmax = 0;
  auto rf0 = vpol::assemble(d, p, o);

  // jmax = 0: f = alpha B exactly
  for (std::size_t i = 0; i < rf0.kgrid.size(); ++i)
    CHECK(rf0.f[i] == doctest::Approx(p.alpha * rf0.B[i]).epsilon(1e-14));

  // alpha = 0: f = 0, F = 0, Z3 = 1
  PhysicalParams p0;
  p0.alpha = 0.0;
  p0.lambda = 50.0;
  auto rfz = vpol::assemble(dress(p0), p0, o);
  CHECK(rfz.z3 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rfz.checkF_L1 == doctest::Approx(0.0).epsilon(1e-12));

  o.jmax = 1;
  o.f_coarse_nodes = 5;
  auto rf1 = vpol::assemble(d, p, o);
  // adding J = 1 changes f(0) by O(alpha^2 log Lambda); record the constant
  const double delta = std::abs(rf1.f0() - rf0.f0());
  const double K = delta / (p.alpha * p.alpha * std::log(p.lambda));
  MESSAGE("J=1 shift constant K = ", K);
  CHECK(K < 5.0);

  // Neumann partial sums against f/(1+f) wherever f(0) < 1/2
  for (std::size_t i = 0; i < rf1.kgrid.size(); ++i) {
    const double f = rf1.f[i];
    REQUIRE(f < 0.5);
    double sum = 0.0, term = f;
    int l = 1;
    while (std::abs(term) >= 1e-10 && l < 200) {
      sum += (l % 2 == 1 ? term : -term);
      term *= f;
      ++l;
    }
    CHECK(std::abs(rf1.F[i] - sum) < 1e-9);
  }

  // f >= 0 on the grid and support inside [0, 2 Lambda]
  for (double f : rf1.f) CHECK(f >= -1e-12);
  CHECK(rf1.f_at(2.0 * p.lambda + 1.0) == 0.0);

  // z3 and the alternative convention are both reported and differ by design
  CHECK(rf1.z3 == doctest::Approx(1.0 / (1.0 + rf1.f0())).epsilon(1e-14));
  CHECK(rf1.z3_alt == doctest::Approx(1.0 / (1.0 + p.alpha * rf1.f0())).epsilon(1e-14));

  // measured L1 norm of the inverse transform stays within 3 L
  MESSAGE("||Fcheck||_L1 / L = ", rf1.checkF_L1 / rf1.L);
  CHECK(rf1.checkF_L1 / rf1.L <= 3.0);
}

TEST_CASE("k-grid refinement moves Z3 by less than 1e-3 relative") {
  PhysicalParams p;
  p.alpha = 0.02;
  p.lambda = 50.0;
  auto d = dress(p);
  vpol::VpolOptions co;
  co.jmax = 0;
  co.k_per_decade = 10;
  vpol::VpolOptions fo;
  fo.jmax = 0;
  fo.k_per_decade = 20;
  const double z1 = vpol::assemble(d, p, co).z3;
  const double z2 = vpol::assemble(d, p, fo).z3;
  CHECK(std::abs(z1 - z2) / z2 < 1e-3);
}
