#pragma once

#include "bdf/cauchy.hpp"
#include "bdf/vacuum_polarization.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace bdf::fp {

struct IterationRecord {
  int iter = 0;
  double residual = 0.0;     // ||Delta gamma'||_2
  double ratio = 0.0;        // residual / previous residual (0 on first step)
  double total_charge = 0.0; // int rho'' = int (rho_gamma + n - nu)
};

struct ScfState {
  ops::OperatorKernel N;     // electron projector, rank M, held fixed
  ops::OperatorKernel gamma; // vacuum correction
  ops::Density n;            // rho_N
  ops::Density nu;           // external density
  ops::Density rho_pp;       // rho'' = rho_gamma + n - nu
  std::vector<IterationRecord> history;
  bool converged = false;
};

struct ScfOptions {
  int order = 2; // series truncation, 1..3
  double tol = 1e-6;
  int max_iter = 30;
  ops::CauchyOptions cauchy{};
};

// M orthonormal band-limited orbitals in the + sector (Gaussian envelopes of
// staggered widths), assembled as a rank-M projector kernel.
ops::OperatorKernel make_electron_projector(const ops::SpatialGrid& g,
                                            const ops::GridDirac& gd, int M,
                                            std::uint64_t seed = 1);

ScfState scf_initial_state(const ops::SpatialGrid& g, ops::OperatorKernel N,
                           ops::Density nu);

// One application of F1 = F1_Q x F1_rho:
//   F1_Q   = N + sum_l alpha^l Q_l(Q', rho'')
//   F1_rho = [nhat'' + alpha rho10(Q') + sum_{l>=2} alpha^l rho_l] / (1 + alpha B(k))
void f1_step(ScfState& state, const PhysicalParams& params, const ops::SpatialGrid& g,
             const ops::GridDirac& gd, const vpol::RenormFunctions& renorm,
             const ScfOptions& opts);

ScfState scf_solve(const PhysicalParams& params, const ops::SpatialGrid& g,
                   const ops::GridDirac& gd, const vpol::RenormFunctions& renorm,
                   ops::OperatorKernel N, ops::Density nu, const ScfOptions& opts);

// leading-order vacuum density in Fourier space:
// rho_lin^hat(k) = -F(k) (nhat(k) - nuhat(k)); the t_N correction is optional.
ops::Density linear_response_density(const ops::SpatialGrid& g, const ops::Density& n,
                                     const ops::Density& nu,
                                     const vpol::RenormFunctions& renorm);

// optional tau diagnostic: adds (1 - F(k)) that_N(k) with t_N truncated at
// second order in alpha
ops::Density linear_response_density_with_tn(
    const ops::SpatialGrid& g, const ops::GridDirac& gd, const ops::OperatorKernel& N,
    const ops::Density& n, const ops::Density& nu, const vpol::RenormFunctions& renorm,
    double alpha, const ops::CauchyOptions& copts);

struct RenormRow {
  double alpha = 0.0, lambda = 0.0, L = 0.0, f0 = 0.0;
  double z3_formula = 1.0;
  double z3_quadrature = 1.0;
  double tol = 0.01;
  bool neutral = false; // M == Z: ratio undefined
};

struct RenormTableOptions {
  int M = 1;
  double Z = 0.0;
  int jmax = 1;
  int grid_n = 32;
  double grid_extent = 20.0;
  double grid_cutoff = 4.0;
  std::uint64_t seed = 1;
  vpol::VpolOptions vpol{};
};

std::vector<RenormRow> renorm_table(const std::vector<double>& alphas,
                                    const std::vector<double>& lambdas,
                                    const RenormTableOptions& opts);

} // namespace bdf::fp
