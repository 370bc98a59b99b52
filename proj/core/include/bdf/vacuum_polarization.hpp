#pragma once

#include "bdf/dressed_dirac.hpp"
#include "bdf/params.hpp"
#include "bdf/vec3.hpp"

#include <cstdint>
#include <vector>

namespace bdf::vpol {

struct VpolOptions {
  double tol = 1e-5;        // relative quadrature target for B
  int jmax = 1;             // truncation order of the f series (0..3)
  int gl = 6;               // Gauss-Legendre points per panel (B integrals)
  int per_decade = 6;       // radial panels per decade (B integrals)
  int u_gl = 3;             // outer-u quadrature of the J=1 term
  int u_per_decade = 3;
  int ell_cos_gl = 8;       // direction quadrature of the J=1 term
  int ell_phi_gl = 6;
  int ell_ray_gl = 4;       // ray panels use per_decade-style refinement
  std::uint64_t seed = 1;   // Monte-Carlo orders
  std::uint64_t mc_samples = 400000;
  int f_coarse_nodes = 9;   // k-subgrid for the J >= 1 terms
  double k_min = 1e-3;      // first positive node of the k grid
  int k_per_decade = 18;
};

// B_Lambda(k): the J = 0 vacuum-polarization bubble,
//   B(k) = 1/(4 pi^2 k^2) int_{|u +- k/2 e| < Lambda} du
//          Tr_C4(1 - s_{u-k/2 e} s_{u+k/2 e}) / (E(u+k/2 e) + E(u-k/2 e)).
// The normalization 1/(4 pi^2) reproduces the slope B(0) ~ (2/3pi) log Lambda.
// The k -> 0 limit is taken through first-order differences of the unit
// 4-vector sigma = (g0, g1 omega)/E, so small k costs no precision.
double compute_B(double k, const DressedDirac& d, const VpolOptions& opts = {});

// Monte-Carlo estimate of the same integral with explicit 4x4 sign matrices
// and an arbitrary direction e; used to verify radiality against compute_B.
struct McEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
};
McEstimate compute_B_mc(double k, const Vec3& e, const DressedDirac& d,
                        std::uint64_t samples, std::uint64_t seed);

// Coefficient b_J(k) of the alpha^(J+1) term of f_Lambda (b_0 = B_Lambda).
// J = 1 is deterministic nested quadrature; J = 2, 3 are Monte-Carlo over
// (u, l_1..l_J) with a counter-based generator. J > 3 is unsupported.
McEstimate compute_f_term(int J, double k, const DressedDirac& d,
                          const VpolOptions& opts = {});
// Monte-Carlo route for any J in 1..3 (cross-check for the J = 1 quadrature).
McEstimate compute_f_term_mc(int J, double k, const DressedDirac& d,
                             const VpolOptions& opts = {});

// Coarse deterministic nested-ray quadrature for J = 2; an independent
// estimator used to validate the Monte-Carlo route at small Lambda.
double compute_f_term2_nested(double k, const DressedDirac& d,
                              const VpolOptions& opts = {});

struct RenormFunctions {
  std::vector<double> kgrid;              // [0, 2 Lambda]
  std::vector<double> B;                  // B_Lambda on kgrid
  std::vector<std::vector<double>> terms; // alpha^(J+1) b_J on kgrid, J = 0..jmax
  std::vector<double> f;                  // f_Lambda = sum of terms
  std::vector<double> F;                  // f/(1+f)
  double lambda = 0.0;
  double alpha = 0.0;
  double L = 0.0;
  double z3 = 1.0;        // 1/(1 + f(0))
  double z3_alt = 1.0;    // 1/(1 + alpha f(0)), the other convention in the literature
  double checkF_L1 = 0.0; // numerically integrated L1 norm of the inverse transform

  double f_at(double k) const;
  double F_at(double k) const;
  double B_at(double k) const;
  double f0() const { return f.empty() ? 0.0 : f.front(); }
};

RenormFunctions assemble(const DressedDirac& d, const PhysicalParams& params,
                         const VpolOptions& opts = {});

// sqrt(2/pi)/r * int_0^{2L} k F(k) sin(kr) dk via exact integration of the
// piecewise-linear interpolant (Filon), plus the L1 norm 4pi int r^2 |.| dr.
struct RadialTransform {
  std::vector<double> r;
  std::vector<double> value;
  double l1_norm = 0.0;
};
RadialTransform inverse_radial_transform(const std::vector<double>& kgrid,
                                         const std::vector<double>& Fk,
                                         double r_max = 200.0, int nr = 400);

} // namespace bdf::vpol
