#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace bdf::clifford {

using cxd = std::complex<double>;

enum class Grading { Even, Odd, Mixed };

Grading compose(Grading a, Grading b);

// 4x4 complex matrix with a grading tag relative to the even/odd split of the
// algebra generated by alpha_1, alpha_2, alpha_3, beta. The tag is carried as
// metadata; classify() recomputes it by projection for validation.
struct DiracElement {
  std::array<cxd, 16> m{}; // row-major
  Grading grading = Grading::Mixed;

  cxd& operator()(int i, int j) { return m[4 * i + j]; }
  const cxd& operator()(int i, int j) const { return m[4 * i + j]; }

  static DiracElement zero(Grading g = Grading::Even);
  static DiracElement identity();

  DiracElement operator*(const DiracElement& o) const;
  DiracElement operator+(const DiracElement& o) const;
  DiracElement operator-(const DiracElement& o) const;
  DiracElement operator*(cxd s) const;
  DiracElement adjoint() const;

  cxd trace() const;
  double max_abs() const;        // max entrywise modulus
  double frobenius_norm() const;
};

DiracElement operator*(cxd s, const DiracElement& e);

// The four generators built from the Pauli blocks; all odd.
struct DiracBasis {
  DiracElement alpha1, alpha2, alpha3, beta;
};
const DiracBasis& make_dirac_basis();

// s = sigma0 * beta + sigma . alpha for a unit 4-vector (sigma0, sigma).
DiracElement sign_from_sigma(double sigma0, const std::array<double, 3>& sigma_vec);

// Projection of an element onto the even/odd subalgebras (via the trace inner
// product against the 16 basis words). Returns the grading implied by the
// larger component; tol decides when a component counts as zero.
Grading classify(const DiracElement& e, double tol = 1e-12);

// Trace and composed grading of a product of pure-graded elements.
// Throws GradingError on mixed input. If the composed grading is odd the
// returned trace is asserted tiny by callers (Furry).
struct WordTrace {
  cxd trace;
  Grading grading;
};
WordTrace furry_trace_check(const std::vector<DiracElement>& word);

// Both sides of the three algebraic identities behind the Furry argument:
//   1/2[(1+A) v1 (1-B) v2 (1-C) - (1-A) v1 (1+B) v2 (1+C)] =  ABC + A - C - B   (v1 v2 factored)
//   1/2[(1+A) v1 (1-B) v2 (1+C) - (1-A) v1 (1+B) v2 (1-C)] = -ABC + A + C - B
//   1/2[(1-A) v1 (1-B) v2 (1+C) - (1+A) v1 (1+B) v2 (1-C)] =  ABC - A + C - B
// Returns the max entrywise residual over the three, and the worst |trace| of
// the right-hand combinations (they are odd, so traces vanish).
struct CalculResult {
  double residual;
  double max_combination_trace;
  Grading combination_grading;
};
CalculResult calcul_identity_check(const DiracElement& s_p, const DiracElement& s_p1,
                                   const DiracElement& s_q, cxd v1, cxd v2);

// One step of the recursion behind the iterated kernel maps:
//   (A_1^l K)(p,q) = K(p-l, q-l) - s_p K(p-l, q-l) s_q
// The caller supplies the already-shifted sample K(p-l, q-l) together with
// s_p and s_q; pure grading is preserved.
DiracElement a_transport(const DiracElement& shifted_kernel, const DiracElement& s_p,
                         const DiracElement& s_q);

// ---- exact mode ----------------------------------------------------------
// Entries of any word in the generators are Gaussian integers, so the
// exhaustive Furry suite can run in exact arithmetic.
struct ExactElement {
  std::array<std::int64_t, 16> re{};
  std::array<std::int64_t, 16> im{};

  static ExactElement identity();
  ExactElement operator*(const ExactElement& o) const;
  std::pair<std::int64_t, std::int64_t> trace() const; // (re, im)
};

struct ExactBasis {
  std::array<ExactElement, 4> gen; // alpha1, alpha2, alpha3, beta
};
const ExactBasis& make_exact_basis();

// Exhaustively multiplies all words of length 1..max_len over the four
// generators in exact arithmetic and returns the number of odd-length words
// with nonzero trace (must be 0) and the number of words checked.
struct FurryExhaustive {
  std::uint64_t words_checked = 0;
  std::uint64_t odd_violations = 0;
  std::uint64_t even_words = 0;
};
FurryExhaustive furry_exhaustive(int max_len);

} // namespace bdf::clifford
