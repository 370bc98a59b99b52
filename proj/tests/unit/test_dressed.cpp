#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bdf/dressed_dirac.hpp"
#include "bdf/errors.hpp"
#include "bdf/rng.hpp"

#include <cmath>

using namespace bdf;

TEST_CASE("free operator reproduced exactly") {
  PhysicalParams p;
  p.alpha = 0.0;
  p.lambda = 1e3;
  auto d = dress(p);
  CHECK(d.iterations() == 1);
  CHECK(d.g0(7.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d.g1(7.5) == doctest::Approx(7.5).epsilon(1e-14));
  CHECK(d.m() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("dressed solution: gstar bounds, threshold, convergence") {
  PhysicalParams p;
  p.alpha = 0.02;
  p.lambda = 1e3;
  auto d = dress(p);
  CHECK(d.residual() < 1e-10);
  CHECK(d.iterations() <= 50);
  CHECK(d.m() == doctest::Approx(d.g0(0.0)).epsilon(1e-12));

  const double C = gstar_fit_constant(d);
  MESSAGE("gstar constant: ", C);
  CHECK(C > 0.0);
  CHECK(C <= 1.0);

  // residuals decrease monotonically after the first 3 iterations
  const auto& rh = d.residual_history();
  for (std::size_t i = 4; i < rh.size(); ++i) CHECK(rh[i] <= rh[i - 1]);
}

TEST_CASE("grid refinement changes g0(0) below 1e-4 relative") {
  PhysicalParams p;
  p.alpha = 0.02;
  p.lambda = 1e3;
  DressOptions a;
  a.nodes = 256;
  DressOptions b;
  b.nodes = 512;
  auto da = dress(p, a);
  auto db = dress(p, b);
  CHECK(std::abs(da.g0(0.0) - db.g0(0.0)) / db.g0(0.0) < 1e-4);
}

TEST_CASE("error paths") {
  PhysicalParams p;
  p.alpha = 0.02;
  p.lambda = 1e3;
  DressOptions coarse;
  coarse.nodes = 32;
  CHECK_THROWS_AS(dress(p, coarse), ResolutionError);

  DressOptions impossible;
  impossible.max_iter = 2;
  impossible.tol = 1e-14;
  try {
    dress(p, impossible);
    FAIL("expected DivergenceError");
  } catch (const DivergenceError& e) {
    CHECK(e.residual_history.size() == 2);
  }
}

TEST_CASE("smoothness probe: O(alpha) and O(L) derivative bounds") {
  PhysicalParams p;
  p.alpha = 0.02;
  p.lambda = 1e3;
  auto d = dress(p);
  auto pr = smoothness_probe(d, 2);
  MESSAGE("max|dg0| / alpha = ", pr.max_dg0 / p.alpha);
  MESSAGE("max|dg1 - 1| / L = ", pr.max_dg1_minus1 / p.L());
  CHECK(pr.max_dg0 / p.alpha < 5.0);
  CHECK(pr.max_dg1_minus1 / p.L() < 5.0);

  // zero coupling: flat g0
  PhysicalParams p0;
  p0.alpha = 0.0;
  p0.lambda = 1e3;
  CHECK(smoothness_probe(dress(p0)).max_dg0 < 1e-14);

  // doubling the resolution changes the probe by < 1%
  DressOptions fine;
  fine.nodes = 1024;
  auto pr2 = smoothness_probe(dress(p, fine), 1);
  CHECK(std::abs(pr2.max_dg0 - pr.max_dg0) / pr.max_dg0 < 0.01);
}

TEST_CASE("projectors: idempotent, orthogonal, complete, Lipschitz") {
  PhysicalParams p;
  p.alpha = 0.02;
  p.lambda = 100.0;
  auto d = dress(p);
  auto one = clifford::DiracElement::identity();

  // free case at p = 0: (I +- beta)/2
  PhysicalParams pf;
  pf.alpha = 0.0;
  pf.lambda = 100.0;
  auto df = dress(pf);
  auto pp = df.projector({0, 0, 0}, +1);
  auto pm = df.projector({0, 0, 0}, -1);
  CHECK((pp - (one + clifford::make_dirac_basis().beta) * clifford::cxd(0.5)).max_abs() <
        1e-14);

  rng::Counter rc{23, 0, 0};
  double worst_idem = 0.0, worst_orth = 0.0, worst_sum = 0.0, clip = 0.0;
  for (int t = 0; t < 300; ++t) {
    const double r = p.lambda * std::cbrt(rc.next_double());
    const double ct = 2.0 * rc.next_double() - 1.0;
    const double ph = 2.0 * M_PI * rc.next_double();
    const double st = std::sqrt(1.0 - ct * ct);
    Vec3 q{r * st * std::cos(ph), r * st * std::sin(ph), r * ct};
    auto Pp = d.projector(q, +1);
    auto Pm = d.projector(q, -1);
    worst_idem = std::max(worst_idem, (Pp * Pp - Pp).max_abs());
    worst_orth = std::max(worst_orth, (Pp * Pm).max_abs());
    worst_sum = std::max(worst_sum, (Pp + Pm - one).max_abs());

    const double r2 = p.lambda * std::cbrt(rc.next_double());
    Vec3 q2{r2 * st * std::cos(ph + 0.3), r2 * st * std::sin(ph + 0.3), r2 * ct};
    const double diff = (d.projector(q, -1) - d.projector(q2, -1)).frobenius_norm();
    const double denom =
        norm(q - q2) / std::max(d.e_script(norm(q)), d.e_script(norm(q2)));
    if (denom > 1e-12) clip = std::max(clip, diff / denom);
  }
  CHECK(worst_idem < 1e-12);
  CHECK(worst_orth < 1e-12);
  CHECK(worst_sum < 1e-14);
  MESSAGE("projector Lipschitz constant: ", clip);
  CHECK(clip < 4.0);
}

TEST_CASE("gstar bounds over the (alpha, lambda) test matrix") {
  for (double alpha : {0.005, 0.02, 0.05})
    for (double lambda : {1e2, 1e3, 1e4}) {
      PhysicalParams p;
      p.alpha = alpha;
      p.lambda = lambda;
      DressOptions o;
      o.nodes = 192; // keep the matrix cheap; refinement tested elsewhere
      auto d = dress(p, o);
      const double C = gstar_fit_constant(d);
      CHECK(C > 0.0);
      CHECK(C <= 1.0);
      CHECK(d.m() == doctest::Approx(d.g0(0.0)).epsilon(1e-12));
    }
}
