#pragma once

#include "bdf/spatial_grid.hpp"

#include <cstdint>
#include <vector>

namespace bdf::ops {

// Rank-limited Hilbert-Schmidt operator Q = sum_i w_i |f_i><g_i| with
// band-limited C^4 orbital pairs. Pair fields are stored in Fourier
// representation and masked after every operation.
struct OperatorKernel {
  struct Pair {
    Field4 left, right;
    double weight = 1.0;
  };
  std::vector<Pair> pairs;
  bool hermitian = false;

  std::size_t rank() const { return pairs.size(); }

  static OperatorKernel projector_state(const SpatialGrid& g,
                                        std::vector<Field4> orbitals);
};

Field4 apply(const SpatialGrid& g, const OperatorKernel& q, const Field4& h);
Field4 apply_adjoint(const SpatialGrid& g, const OperatorKernel& q, const Field4& h);

OperatorKernel adjoint(const OperatorKernel& q);

// ||Q||_2^2 = sum_ij w_i w_j <g_i, g_j> <f_j, f_i>
double hs_norm2(const SpatialGrid& g, const OperatorKernel& q);

// rho(x) = sum_i w_i <g_i(x), f_i(x)>_C4; imaginary part returned separately
// as a diagnostic (vanishes for Hermitian kernels).
struct DensityResult {
  Density density;
  double max_imag = 0.0;
};
DensityResult density_of(const SpatialGrid& g, const OperatorKernel& q);

// Tr(Q) = sum_i w_i <g_i, f_i>
cxd trace_of(const SpatialGrid& g, const OperatorKernel& q);
// Tr0 = Tr(P- Q P-) + Tr(P+ Q P+)
double blockwise_trace(const SpatialGrid& g, const GridDirac& gd,
                       const OperatorKernel& q);
// Hilbert-Schmidt norms of the four projector blocks (--, -+, +-, ++)
std::array<double, 4> block_hs_norms(const SpatialGrid& g, const GridDirac& gd,
                                     const OperatorKernel& q);

struct CompressOptions {
  std::size_t rank_cap = 64;
  double drop_tol = 1e-10;       // relative singular value cut
  double loss_tol = 1e-3;        // throw CompressionLoss above this
  bool enforce_hermitian = false;
};

struct CompressReport {
  double discarded_weight = 0.0; // relative HS weight of dropped singular values
  std::size_t rank_before = 0, rank_after = 0;
};

CompressReport compress(const SpatialGrid& g, OperatorKernel& q,
                        const CompressOptions& opts = {});

// q <- (q + q^dag)/2 (cheap, doubles the pair list; compress afterwards)
void hermitize(OperatorKernel& q);

} // namespace bdf::ops
