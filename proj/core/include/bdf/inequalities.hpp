#pragma once

#include "bdf/operator_kernel.hpp"

#include <cstdint>
#include <vector>

namespace bdf::ops {

// Radial Gaussian mixture phi(x) = sum_i c_i exp(-b_i r^2). All the moments
// entering Kato/Hardy/Sobolev-type inequalities are analytic for this family,
// so the test orbitals carry no quadrature error. Spectral tails beyond any
// practical cutoff are below machine precision (numerically band-limited).
struct GaussianMixture {
  std::vector<double> c, b;

  double norm2() const;            // <phi, phi>
  double coulomb_moment() const;   // int |phi|^2 / r
  double hardy_moment() const;     // int |phi|^2 / r^2
  double laplace_moment() const;   // <-Delta phi, phi>
  double halfgrad_moment() const;  // <|grad| phi, phi>
  double grad_power_moment(double s) const; // < |grad|^{2s} >, 2s > -3
  double lp_norm(double p) const;  // ||phi||_p by radial quadrature
  double value(double r) const;
  // potential of the density |phi|^2 (analytic, via erf)
  double density_potential(double r) const;
  // Coulomb norm^2 of the density |phi|^2
  double density_coulomb_norm2() const;
  // || v_{|phi|^2} phi ||_2 by radial quadrature
  double v_phi_l2() const;

  static GaussianMixture random(std::uint64_t seed, std::uint64_t stream,
                                int n_terms = 4);
};

struct InequalityReport {
  // worst-case LHS/RHS over the sampled orbitals (must stay <= 1)
  double kato_worst = 0.0;   // int|phi|^2/r  vs (pi/2) <|grad|>
  double hardy_worst = 0.0;  // int|phi|^2/r^2 vs 4 <-Delta>
  // fitted constants (sup of LHS/assumed-RHS-shape)
  double sobolev6 = 0.0;  // ||f||_6 / ||grad f||_2
  double sobolev4 = 0.0;  // ||f||_4 / |||grad|^{3/4} f||_2
  double sobolev3 = 0.0;  // ||f||_3 / |||grad|^{1/2} f||_2
  double vphi = 0.0;      // ||v_rho phi||_2 / (||rho||_C |||grad|^{1/2}phi||_2)
  double exch = 0.0;      // |||grad|^{-1/2} R_Q||_2 / sqrt(Tr(R_Q^* Q))
  std::uint64_t samples = 0;
  // analytic single-Gaussian reference values (phi = pi^{-3/4} e^{-r^2/2})
  double gauss_kato_lhs = 0.0;  // 2/sqrt(pi)
  double gauss_kato_rhs = 0.0;  // sqrt(pi)
  double gauss_hardy_lhs = 0.0; // 2
  double gauss_hardy_rhs = 0.0; // 6
};

struct InequalityOptions {
  std::uint64_t samples = 1000;
  std::uint64_t seed = 2024;
  // grid used for the exchange-kernel bound
  int grid_n = 24;
  double grid_extent = 20.0;
  double grid_cutoff = 3.2;
  int exch_kernels = 5;
  int hutchinson_probes = 16;
};

InequalityReport inequality_suite(const InequalityOptions& opts = {});

} // namespace bdf::ops
