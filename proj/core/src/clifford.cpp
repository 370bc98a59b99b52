#include "bdf/clifford.hpp"

#include "bdf/errors.hpp"

#include <cmath>

namespace bdf::clifford {

Grading compose(Grading a, Grading b) {
  if (a == Grading::Mixed || b == Grading::Mixed) return Grading::Mixed;
  return (a == b) ? Grading::Even : Grading::Odd;
}

DiracElement DiracElement::zero(Grading g) {
  DiracElement e;
  e.grading = g;
  return e;
}

DiracElement DiracElement::identity() {
  DiracElement e;
  e.grading = Grading::Even;
  for (int i = 0; i < 4; ++i) e(i, i) = 1.0;
  return e;
}

DiracElement DiracElement::operator*(const DiracElement& o) const {
  DiracElement r;
  r.grading = compose(grading, o.grading);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      cxd s = 0.0;
      for (int k = 0; k < 4; ++k) s += (*this)(i, k) * o(k, j);
      r(i, j) = s;
    }
  return r;
}

DiracElement DiracElement::operator+(const DiracElement& o) const {
  DiracElement r;
  r.grading = (grading == o.grading) ? grading : Grading::Mixed;
  for (int i = 0; i < 16; ++i) r.m[i] = m[i] + o.m[i];
  return r;
}

DiracElement DiracElement::operator-(const DiracElement& o) const {
  DiracElement r;
  r.grading = (grading == o.grading) ? grading : Grading::Mixed;
  for (int i = 0; i < 16; ++i) r.m[i] = m[i] - o.m[i];
  return r;
}

DiracElement DiracElement::operator*(cxd s) const {
  DiracElement r;
  r.grading = grading;
  for (int i = 0; i < 16; ++i) r.m[i] = m[i] * s;
  return r;
}

DiracElement operator*(cxd s, const DiracElement& e) { return e * s; }

DiracElement DiracElement::adjoint() const {
  DiracElement r;
  r.grading = grading;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = std::conj((*this)(j, i));
  return r;
}

cxd DiracElement::trace() const { return m[0] + m[5] + m[10] + m[15]; }

double DiracElement::max_abs() const {
  double mx = 0.0;
  for (const auto& v : m) mx = std::max(mx, std::abs(v));
  return mx;
}

double DiracElement::frobenius_norm() const {
  double s = 0.0;
  for (const auto& v : m) s += std::norm(v);
  return std::sqrt(s);
}

namespace {

DiracBasis build_basis() {
  const cxd I(0.0, 1.0);
  DiracBasis b;
  b.alpha1 = DiracElement::zero(Grading::Odd);
  b.alpha2 = DiracElement::zero(Grading::Odd);
  b.alpha3 = DiracElement::zero(Grading::Odd);
  b.beta = DiracElement::zero(Grading::Odd);
  // alpha_j = [[0, sigma_j], [sigma_j, 0]], beta = diag(1,1,-1,-1)
  // sigma_1
  b.alpha1(0, 3) = 1.0; b.alpha1(1, 2) = 1.0;
  b.alpha1(2, 1) = 1.0; b.alpha1(3, 0) = 1.0;
  // sigma_2
  b.alpha2(0, 3) = -I; b.alpha2(1, 2) = I;
  b.alpha2(2, 1) = -I; b.alpha2(3, 0) = I;
  // sigma_3
  b.alpha3(0, 2) = 1.0; b.alpha3(1, 3) = -1.0;
  b.alpha3(2, 0) = 1.0; b.alpha3(3, 1) = -1.0;
  b.beta(0, 0) = 1.0; b.beta(1, 1) = 1.0;
  b.beta(2, 2) = -1.0; b.beta(3, 3) = -1.0;
  return b;
}

// All 16 words I, g_i, g_i g_j (i<j), ... with their parity, used by classify.
struct WordTable {
  std::array<DiracElement, 16> word;
  std::array<bool, 16> odd;
};

const WordTable& word_table() {
  static const WordTable t = [] {
    WordTable t;
    const DiracBasis& b = build_basis();
    const std::array<const DiracElement*, 4> g = {&b.alpha1, &b.alpha2, &b.alpha3, &b.beta};
    int idx = 0;
    for (unsigned mask = 0; mask < 16; ++mask) {
      DiracElement w = DiracElement::identity();
      int len = 0;
      for (int k = 0; k < 4; ++k)
        if (mask & (1u << k)) {
          w = w * (*g[k]);
          ++len;
        }
      t.word[idx] = w;
      t.odd[idx] = (len % 2) != 0;
      ++idx;
    }
    return t;
  }();
  return t;
}

} // namespace

const DiracBasis& make_dirac_basis() {
  static const DiracBasis b = build_basis();
  return b;
}

DiracElement sign_from_sigma(double sigma0, const std::array<double, 3>& sv) {
  const DiracBasis& b = make_dirac_basis();
  DiracElement s = b.beta * cxd(sigma0) + b.alpha1 * cxd(sv[0]) +
                   b.alpha2 * cxd(sv[1]) + b.alpha3 * cxd(sv[2]);
  s.grading = Grading::Odd;
  return s;
}

Grading classify(const DiracElement& e, double tol) {
  const WordTable& t = word_table();
  double even_part = 0.0, odd_part = 0.0;
  for (int k = 0; k < 16; ++k) {
    // words are trace-orthogonal with Tr(w^dag w) = 4
    cxd c = (t.word[k].adjoint() * e).trace() / 4.0;
    (t.odd[k] ? odd_part : even_part) += std::norm(c);
  }
  even_part = std::sqrt(even_part);
  odd_part = std::sqrt(odd_part);
  if (even_part <= tol && odd_part <= tol) return Grading::Even; // zero element
  if (odd_part <= tol) return Grading::Even;
  if (even_part <= tol) return Grading::Odd;
  return Grading::Mixed;
}

WordTrace furry_trace_check(const std::vector<DiracElement>& word) {
  if (word.empty()) throw std::invalid_argument("furry_trace_check: empty word");
  DiracElement prod = DiracElement::identity();
  Grading g = Grading::Even;
  for (const auto& e : word) {
    if (e.grading == Grading::Mixed)
      throw GradingError("furry_trace_check: mixed-graded element in word");
    prod = prod * e;
    g = compose(g, e.grading);
  }
  return {prod.trace(), g};
}

CalculResult calcul_identity_check(const DiracElement& A, const DiracElement& B,
                                   const DiracElement& C, cxd v1, cxd v2) {
  const DiracElement one = DiracElement::identity();
  const DiracElement Ap = one + A, Am = one - A;
  const DiracElement Bp = one + B, Bm = one - B;
  const DiracElement Cp = one + C, Cm = one - C;
  const cxd v = v1 * v2;
  const cxd half(0.5);

  // identity 1: +-- vs -++
  DiracElement l1 = (Ap * (Bm * Cm) - Am * (Bp * Cp)) * (half * v);
  DiracElement r1 = (A * B * C + A - C - B) * v;
  // identity 2: +-+ vs -+-
  DiracElement l2 = (Ap * (Bm * Cp) - Am * (Bp * Cm)) * (half * v);
  DiracElement r2 = (A * B * C * cxd(-1.0) + A + C - B) * v;
  // identity 3: --+ vs ++-
  DiracElement l3 = (Am * (Bm * Cp) - Ap * (Bp * Cm)) * (half * v);
  DiracElement r3 = (A * B * C - A + C - B) * v;

  CalculResult res;
  res.residual = std::max({(l1 - r1).max_abs(), (l2 - r2).max_abs(), (l3 - r3).max_abs()});
  res.max_combination_trace =
      std::max({std::abs(r1.trace()), std::abs(r2.trace()), std::abs(r3.trace())});
  Grading g1 = classify(r1), g2 = classify(r2), g3 = classify(r3);
  res.combination_grading =
      (g1 == g2 && g2 == g3) ? g1 : Grading::Mixed;
  return res;
}

DiracElement a_transport(const DiracElement& shifted_kernel, const DiracElement& s_p,
                         const DiracElement& s_q) {
  DiracElement out = shifted_kernel - s_p * shifted_kernel * s_q;
  out.grading = shifted_kernel.grading; // odd * g * odd = g
  return out;
}

// ---- exact mode ----------------------------------------------------------

ExactElement ExactElement::identity() {
  ExactElement e;
  for (int i = 0; i < 4; ++i) e.re[4 * i + i] = 1;
  return e;
}

ExactElement ExactElement::operator*(const ExactElement& o) const {
  ExactElement r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      std::int64_t sre = 0, sim = 0;
      for (int k = 0; k < 4; ++k) {
        const std::int64_t ar = re[4 * i + k], ai = im[4 * i + k];
        const std::int64_t br = o.re[4 * k + j], bi = o.im[4 * k + j];
        sre += ar * br - ai * bi;
        sim += ar * bi + ai * br;
      }
      r.re[4 * i + j] = sre;
      r.im[4 * i + j] = sim;
    }
  return r;
}

std::pair<std::int64_t, std::int64_t> ExactElement::trace() const {
  std::int64_t tr = 0, ti = 0;
  for (int i = 0; i < 4; ++i) {
    tr += re[4 * i + i];
    ti += im[4 * i + i];
  }
  return {tr, ti};
}

const ExactBasis& make_exact_basis() {
  static const ExactBasis b = [] {
    ExactBasis b;
    auto& [a1, a2, a3, be] = b.gen;
    a1.re[0 * 4 + 3] = 1; a1.re[1 * 4 + 2] = 1; a1.re[2 * 4 + 1] = 1; a1.re[3 * 4 + 0] = 1;
    a2.im[0 * 4 + 3] = -1; a2.im[1 * 4 + 2] = 1; a2.im[2 * 4 + 1] = -1; a2.im[3 * 4 + 0] = 1;
    a3.re[0 * 4 + 2] = 1; a3.re[1 * 4 + 3] = -1; a3.re[2 * 4 + 0] = 1; a3.re[3 * 4 + 1] = -1;
    be.re[0 * 4 + 0] = 1; be.re[1 * 4 + 1] = 1; be.re[2 * 4 + 2] = -1; be.re[3 * 4 + 3] = -1;
    return b;
  }();
  return b;
}

namespace {

void furry_recurse(const ExactElement& prod, int len, int max_len, FurryExhaustive& out) {
  if (len > 0) {
    ++out.words_checked;
    if (len % 2 == 1) {
      auto [tr, ti] = prod.trace();
      if (tr != 0 || ti != 0) ++out.odd_violations;
    } else {
      ++out.even_words;
    }
  }
  if (len == max_len) return;
  const ExactBasis& b = make_exact_basis();
  for (const auto& g : b.gen) furry_recurse(prod * g, len + 1, max_len, out);
}

} // namespace

FurryExhaustive furry_exhaustive(int max_len) {
  FurryExhaustive out;
  furry_recurse(ExactElement::identity(), 0, max_len, out);
  return out;
}

} // namespace bdf::clifford
