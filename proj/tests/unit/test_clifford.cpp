#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bdf/clifford.hpp"
#include "bdf/dressed_dirac.hpp"
#include "bdf/errors.hpp"
#include "bdf/rng.hpp"

#include <cmath>

using namespace bdf;
using namespace bdf::clifford;

namespace {

Vec3 random_momentum(rng::Counter& rc, double lambda) {
  const double r = lambda * std::cbrt(rc.next_double());
  const double ct = 2.0 * rc.next_double() - 1.0;
  const double ph = 2.0 * M_PI * rc.next_double();
  const double st = std::sqrt(1.0 - ct * ct);
  return {r * st * std::cos(ph), r * st * std::sin(ph), r * ct};
}

double op_norm_est(const DiracElement& m) { return m.frobenius_norm(); }

} // namespace

TEST_CASE("generator identities") {
  const auto& b = make_dirac_basis();
  const std::array<const DiracElement*, 4> g = {&b.alpha1, &b.alpha2, &b.alpha3, &b.beta};
  auto one = DiracElement::identity();

  CHECK(std::abs(b.beta.trace()) == 0.0);
  CHECK((b.beta * b.beta - one).max_abs() == 0.0);
  CHECK((b.alpha1 * b.alpha2 + b.alpha2 * b.alpha1).max_abs() == 0.0);

  for (int i = 0; i < 4; ++i) {
    CHECK((g[i]->adjoint() - *g[i]).max_abs() == 0.0); // Hermitian
    for (int j = 0; j < 4; ++j) {
      auto anti = (*g[i]) * (*g[j]) + (*g[j]) * (*g[i]);
      if (i == j)
        CHECK((anti - one * cxd(2.0)).max_abs() == 0.0);
      else
        CHECK(anti.max_abs() == 0.0);
    }
  }
}

TEST_CASE("furry exhaustive words up to length 5, exact arithmetic") {
  auto res = furry_exhaustive(5);
  CHECK(res.words_checked == 4ull + 16 + 64 + 256 + 1024);
  CHECK(res.odd_violations == 0);
}

TEST_CASE("grading composition over random pure products") {
  const auto& b = make_dirac_basis();
  const std::array<const DiracElement*, 4> g = {&b.alpha1, &b.alpha2, &b.alpha3, &b.beta};
  rng::Counter rc{17, 0, 0};
  for (int t = 0; t < 10000; ++t) {
    const int len = 1 + int(rc.next_double() * 5);
    DiracElement prod = DiracElement::identity();
    int parity = 0;
    for (int i = 0; i < len; ++i) {
      prod = prod * (*g[std::size_t(rc.next_double() * 4) & 3]);
      parity ^= 1;
    }
    const Grading expect = parity ? Grading::Odd : Grading::Even;
    CHECK(prod.grading == expect);
    CHECK(classify(prod) == expect);
    if (expect == Grading::Odd) CHECK(std::abs(prod.trace()) == 0.0);
  }
}

TEST_CASE("furry_trace_check rejects mixed input") {
  const auto& b = make_dirac_basis();
  auto mixed = b.alpha1 + DiracElement::identity();
  CHECK(mixed.grading == Grading::Mixed);
  CHECK_THROWS_AS(furry_trace_check({mixed}), GradingError);
  auto wt = furry_trace_check({b.alpha1});
  CHECK(wt.grading == Grading::Odd);
  CHECK(std::abs(wt.trace) == 0.0);
  auto wt2 = furry_trace_check({b.alpha1, b.alpha1});
  CHECK(wt2.grading == Grading::Even);
  CHECK(std::abs(wt2.trace - cxd(4.0)) < 1e-15);
  auto wt3 = furry_trace_check({b.beta, b.alpha1, b.alpha2});
  CHECK(wt3.grading == Grading::Odd);
  CHECK(std::abs(wt3.trace) < 1e-15);
}

TEST_CASE("sign matrix properties on a dressed operator") {
  PhysicalParams p;
  p.alpha = 0.05;
  p.lambda = 100.0;
  auto d = dress(p);
  auto one = DiracElement::identity();

  // free operator at p = 0 gives beta
  PhysicalParams pf;
  pf.alpha = 0.0;
  pf.lambda = 100.0;
  auto dfree = dress(pf);
  auto s0 = dfree.sign_matrix({0.0, 0.0, 0.0});
  CHECK((s0 - make_dirac_basis().beta).max_abs() < 1e-14);

  rng::Counter rc{3, 0, 0};
  double worst_sq = 0.0, worst_herm = 0.0;
  for (int t = 0; t < 200; ++t) {
    Vec3 q = random_momentum(rc, p.lambda);
    auto s = d.sign_matrix(q);
    CHECK(s.grading == Grading::Odd);
    worst_sq = std::max(worst_sq, (s * s - one).max_abs());
    worst_herm = std::max(worst_herm, (s.adjoint() - s).max_abs());
  }
  CHECK(worst_sq < 1e-12);
  CHECK(worst_herm < 1e-14);

  CHECK_THROWS_AS(d.sign_matrix({2.0 * p.lambda, 0.0, 0.0}), CutoffViolation);
}

TEST_CASE("sign matrix Lipschitz constant stays below 4") {
  PhysicalParams p;
  p.alpha = 0.05;
  p.lambda = 100.0;
  auto d = dress(p);
  rng::Counter rc{5, 0, 0};
  double cs = 0.0;
  for (int t = 0; t < 1000; ++t) {
    Vec3 a = random_momentum(rc, p.lambda);
    Vec3 b = random_momentum(rc, p.lambda);
    const double diff = op_norm_est(d.sign_matrix(a) - d.sign_matrix(b));
    const double denom = norm(a - b) / std::max(d.e_script(norm(a)), d.e_script(norm(b)));
    if (denom > 1e-12) cs = std::max(cs, diff / denom);
  }
  MESSAGE("fitted C_s = ", cs);
  CHECK(cs <= 4.0);
}

TEST_CASE("calcul identities on 1000 random momentum triples") {
  PhysicalParams p;
  p.alpha = 0.05;
  p.lambda = 100.0;
  auto d = dress(p);
  const auto& beta = make_dirac_basis().beta;

  // beta-only case computable by hand
  auto rb = calcul_identity_check(beta, beta, beta, 1.0, 1.0);
  CHECK(rb.residual < 1e-14);
  CHECK(rb.max_combination_trace < 1e-14);

  rng::Counter rc{7, 0, 0};
  double worst = 0.0, worst_trace = 0.0;
  for (int t = 0; t < 1000; ++t) {
    auto sp = d.sign_matrix(random_momentum(rc, p.lambda));
    auto s1 = d.sign_matrix(random_momentum(rc, p.lambda));
    auto sq = d.sign_matrix(random_momentum(rc, p.lambda));
    cxd v1(rc.normal(), rc.normal()), v2(rc.normal(), rc.normal());
    auto res = calcul_identity_check(sp, s1, sq, v1, v2);
    worst = std::max(worst, res.residual);
    worst_trace = std::max(worst_trace, res.max_combination_trace);
    CHECK(res.combination_grading == Grading::Odd);
  }
  CHECK(worst <= 1e-12);
  CHECK(worst_trace <= 1e-12);
}

TEST_CASE("a_transport: substitution, grading, nesting") {
  PhysicalParams p;
  p.alpha = 0.05;
  p.lambda = 50.0;
  auto d = dress(p);
  rng::Counter rc{11, 0, 0};
  const Vec3 pm = random_momentum(rc, 5.0);
  const Vec3 qm = random_momentum(rc, 5.0);
  auto sp = d.sign_matrix(pm);
  auto sq = d.sign_matrix(qm);

  // K == I, l = 0: I - s_p s_q
  auto one = DiracElement::identity();
  auto out = a_transport(one, sp, sq);
  CHECK((out - (one - sp * sq)).max_abs() == 0.0);

  // even kernels stay even
  auto even = sp * sq; // product of two odd elements
  CHECK(a_transport(even, sp, sq).grading == Grading::Even);
  CHECK(classify(a_transport(even, sp, sq)) == Grading::Even);

  // nested A2 equals two manual A1 applications
  const Vec3 l1 = random_momentum(rc, 1.0);
  const Vec3 l2 = random_momentum(rc, 1.0);
  auto kernel = [&](const Vec3& a, const Vec3& b) {
    // smooth even-graded test kernel
    return d.sign_matrix(a) * d.sign_matrix(b) * cxd(std::exp(-0.1 * dot(a - b, a - b)));
  };
  auto inner = [&](const Vec3& a, const Vec3& b) {
    return a_transport(kernel(a - l2, b - l2), d.sign_matrix(a), d.sign_matrix(b));
  };
  auto nested = a_transport(inner(pm - l1, qm - l1), sp, sq);
  // manual unroll
  auto k2 = kernel(pm - l1 - l2, qm - l1 - l2);
  auto sp1 = d.sign_matrix(pm - l1);
  auto sq1 = d.sign_matrix(qm - l1);
  auto manual_inner = k2 - sp1 * k2 * sq1;
  auto manual = manual_inner - sp * manual_inner * sq;
  CHECK((nested - manual).max_abs() < 1e-14);
}
