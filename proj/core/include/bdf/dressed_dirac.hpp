#pragma once

#include "bdf/clifford.hpp"
#include "bdf/params.hpp"
#include "bdf/radial.hpp"
#include "bdf/vec3.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace bdf {

struct DressOptions {
  std::size_t nodes = 512;
  double tol = 1e-10;     // relative sup-norm change per iteration
  int max_iter = 50;
  double mixing = 1.0;    // plain Picard by default
  int gl_points = 8;      // per radial panel
  double r_min = 1e-4;    // first positive grid node
};

// The dressed free Dirac operator: radial functions g0, g1 on [0, Lambda]
// solving  ghat(p) = D0hat(p) + (alpha/4pi^2) int_{|q|<Lambda} s(q)/|p-q|^2 dq.
// E_script(p) = sqrt(g0^2 + g1^2) >= 1, threshold m = inf E_script.
class DressedDirac {
public:
  DressedDirac(RadialGrid grid, std::vector<double> g0, std::vector<double> g1,
               double alpha, double lambda, int iterations, double residual,
               std::vector<double> residual_history);

  double alpha() const { return alpha_; }
  double lambda() const { return lambda_; }
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }
  const std::vector<double>& residual_history() const { return residual_history_; }

  const RadialGrid& grid() const { return grid_; }
  const std::vector<double>& g0_nodes() const { return g0_; }
  const std::vector<double>& g1_nodes() const { return g1_; }

  double g0(double p) const { return sg0_(p); }
  double g1(double p) const { return sg1_(p); }
  double dg0(double p) const { return sg0_.derivative(p); }
  double dg1(double p) const { return sg1_.derivative(p); }
  double e_script(double p) const;
  double m() const { return m_; } // threshold, = g0(0) in the regime

  // unit 4-vector (sigma_beta, sigma_vec) with sigma_vec along p/|p|
  std::array<double, 4> sigma4(const Vec3& p) const;
  // radial components and their radial derivatives
  double sigma0(double p) const;
  double sigma1(double p) const;
  double dsigma0(double p) const;
  double dsigma1(double p) const;

  // sign(D0)^hat(p); throws CutoffViolation for |p| > Lambda (with slack eps)
  clifford::DiracElement sign_matrix(const Vec3& p) const;
  // directional derivative of the sign matrix along unit vector e at u
  clifford::DiracElement dsign(const Vec3& u, const Vec3& e) const;
  // spectral projector (1 +/- s_p)/2
  clifford::DiracElement projector(const Vec3& p, int sign) const;

  void check_cutoff(const Vec3& p) const;

private:
  RadialGrid grid_;
  std::vector<double> g0_, g1_;
  CubicSpline sg0_, sg1_;
  double alpha_, lambda_, m_;
  int iterations_;
  double residual_;
  std::vector<double> residual_history_;
};

DressedDirac dress(const PhysicalParams& params, const DressOptions& opts = {});

struct SmoothnessProbe {
  double max_dg0;        // sup |g0'|
  double max_dg1_minus1; // sup |g1' - 1|
  double max_d2g0;       // order 2 only
  double max_d2g1;
};
SmoothnessProbe smoothness_probe(const DressedDirac& d, int order = 1);

// Node-wise check of the bounds |p| <= g1 <= g0 |p| and
// 1 <= g0 <= 1 + C alpha log(Lambda); returns the fitted C (sup of
// (g0-1)/(alpha log Lambda)) or -1 if an ordering bound fails.
double gstar_fit_constant(const DressedDirac& d);

} // namespace bdf
