#pragma once

#include "bdf/operator_kernel.hpp"
#include "bdf/params.hpp"

namespace bdf::ops {

// D(rho1, rho2) = 4 pi int rho1hat(k) rho2hat(k)* / k^2 dk, evaluated with the
// truncated Coulomb multiplier of the grid.
double coulomb_bilinear(const SpatialGrid& g, const Density& a, const Density& b);

// v_rho = rho * 1/|x| as a real-space potential field
std::vector<double> coulomb_potential(const SpatialGrid& g, const Density& rho);

// (R_Q h)(x) = sum_i w_i f_i(x) (conj(g_i) . h * 1/|x|)(x); h in Fourier rep
Field4 exchange_apply(const SpatialGrid& g, const OperatorKernel& q, const Field4& h);

// Ex[Q] = Tr(R_Q^* Q) = iint |Q(x,y)|^2/|x-y|
double exchange_energy(const SpatialGrid& g, const OperatorKernel& q);

// Tr(|grad| Q^2) for Hermitian Q (Kato bound right-hand side)
double kinetic_grad_norm(const SpatialGrid& g, const OperatorKernel& q);

struct BdfEnergyBreakdown {
  double kinetic = 0.0;  // Tr0(D0 Q), blockwise
  double external = 0.0; // -alpha D(rho_Q, nu)
  double direct = 0.0;   // +alpha/2 D(rho_Q, rho_Q)
  double exchange = 0.0; // -alpha/2 Ex[Q]
  double total() const { return kinetic + external + direct + exchange; }
};

BdfEnergyBreakdown bdf_energy(const SpatialGrid& g, const GridDirac& gd,
                              const OperatorKernel& q, const Density& nu,
                              const PhysicalParams& params);

// K_a = (1/2pi) int (1+eta^2)^(-a/2) d eta; closed Beta-function form checked
// against the tan-substitution quadrature to 1e-10.
double k_constant(double a);
double k_constant_quadrature(double a, int n = 200);

} // namespace bdf::ops
