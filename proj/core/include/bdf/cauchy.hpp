#pragma once

#include "bdf/clifford.hpp"
#include "bdf/energy.hpp"
#include "bdf/operator_kernel.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace bdf::ops {

struct CauchyOptions {
  int nquad = 64;              // eta nodes after eta = tan(theta)
  std::size_t rank_cap = 64;
  std::size_t oversample = 8;  // extra probes for the range finder
  double drop_tol = 1e-10;
  double loss_tol = 1e-3;      // CompressionLoss above this discarded weight
  std::uint64_t seed = 12345;
};

// j-th Cauchy-expansion term with B = v[rho] - R_Q:
//   Q_j = (-1)^(j+1)/(2 pi) int d eta (D0+i eta)^(-1) (B (D0+i eta)^(-1))^j,
// the sign fixed so that the pure-R part of Q_1 is
//   (1/2) (E_p + E_q)^(-1) (Rhat - s_p Rhat s_q).
// The eta integral uses nquad Gauss-Legendre nodes after eta = tan(theta);
// the result is compressed to a rank-limited kernel via a randomized range
// finder, with the discarded weight reported.
struct CauchyResult {
  OperatorKernel kernel;
  CompressReport report;
};
CauchyResult cauchy_term(int j, const OperatorKernel* q, const Density* rho,
                         const SpatialGrid& g, const GridDirac& gd,
                         const CauchyOptions& opts = {});

// One application of Q_j to a field (no compression); exposed for tests and
// for the density updates of the fixed-point scheme.
Field4 cauchy_apply(int j, const OperatorKernel* q, const std::vector<double>* v,
                    const Field4& h, const SpatialGrid& g, const GridDirac& gd,
                    const CauchyOptions& opts, bool adjoint_op = false);

// 4x4 matrix element T(p_idx, q_idx) of a linear operator, obtained by
// applying it to the four plane-wave spinors at mode q_idx.
using FieldOp = std::function<Field4(const Field4&)>;
clifford::DiracElement kernel_element(const SpatialGrid& g, const FieldOp& op,
                                      std::size_t p_idx, std::size_t q_idx);

// Rhat(p,q) of R_Q and the closed-form Fourier kernel
// (1/2)(E_p+E_q)^(-1)(Rhat - s_p Rhat s_q) it enters.
clifford::DiracElement rhat_element(const SpatialGrid& g, const OperatorKernel& q,
                                    std::size_t p_idx, std::size_t q_idx);
clifford::DiracElement q10_closed_form_element(const SpatialGrid& g,
                                               const GridDirac& gd,
                                               const OperatorKernel& q,
                                               std::size_t p_idx, std::size_t q_idx);

// ---- Schatten-norm growth diagnostic -------------------------------------
// Radial rank-3 probe kernels Q(p,q) = sum_i w_i u_i(|p|) v_i(|q|) I_4 with
// log-spread profiles; the Hilbert-Schmidt norm of F_{1,0}(Q) reduces to a
// 6-d integral evaluated by Monte-Carlo over (p,q) with an inner ray
// quadrature for the Coulomb convolution.
struct RadialProfile {
  struct Bump {
    double c, mu, s; // c * exp(-(ln r - mu)^2 / (2 s^2))
  };
  std::vector<Bump> bumps;
  double operator()(double r) const;
};

struct GrowthOptions {
  int n_kernels = 4;
  std::uint64_t seed = 99;
  std::uint64_t mc_pairs = 3000;
  int ray_cos_gl = 10;
  int ray_phi_gl = 6;
  int ray_panels_per_decade = 2;
  double r0 = 1e-2;
};

// Two quantities per probe kernel:
//  - ratio_raw = ||F10 Q||_2 / ||Q||_2 (stays bounded; its exponent must not
//    exceed the sqrt(log) law), and
//  - ratio_bound = |||D0|^(-1/2) R_Q |D0|^(-1/2)||_2 / ||Q||_2, the weighted
//    exchange-kernel norm that dominates ||F10 Q||_2 and carries the
//    sqrt(log Lambda) growth.
struct GrowthResult {
  std::vector<double> lambdas;
  std::vector<double> max_ratio;     // bound functional, per lambda
  std::vector<double> max_ratio_raw; // direct F10 ratio, per lambda
  double exponent = 0.0;     // slope of ln(max_ratio) vs ln(ln lambda)
  double exponent_raw = 0.0; // same for the direct ratio
};
GrowthResult f10_growth_diagnostic(const std::vector<const DressedDirac*>& dressed,
                                   const GrowthOptions& opts = {});

} // namespace bdf::ops
