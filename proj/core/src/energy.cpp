#include "bdf/energy.hpp"

#include "bdf/errors.hpp"
#include "bdf/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace bdf::ops {

double coulomb_bilinear(const SpatialGrid& g, const Density& a, const Density& b) {
  if (a.values.size() != g.size() || b.values.size() != g.size())
    throw std::invalid_argument("coulomb_bilinear: density/grid mismatch");
  const auto& fa = a.fourier(g);
  const auto& fb = b.fourier(g);
  const auto& vk = g.coulomb_multiplier();
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    s += vk[i] * (fa[i] * std::conj(fb[i])).real();
  return s * g.dk3();
}

std::vector<double> coulomb_potential(const SpatialGrid& g, const Density& rho) {
  std::vector<cxd> v(rho.fourier(g));
  const auto& vk = g.coulomb_multiplier();
  for (std::size_t i = 0; i < g.size(); ++i) v[i] *= vk[i];
  g.fft_backward(v);
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = v[i].real();
  return out;
}

Field4 exchange_apply(const SpatialGrid& g, const OperatorKernel& q, const Field4& h) {
  Field4 hr = h;
  hr.to_real(g);
  Field4 out = Field4::zero(g, Rep::Real);
  std::vector<cxd> s(g.size());
  const auto& vk = g.coulomb_multiplier();
  for (const auto& p : q.pairs) {
    Field4 fr = p.left, gr = p.right;
    fr.to_real(g);
    gr.to_real(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      cxd acc = 0.0;
      for (int c = 0; c < 4; ++c) acc += std::conj(gr.comp[c][i]) * hr.comp[c][i];
      s[i] = acc;
    }
    g.fft_forward(s);
    for (std::size_t i = 0; i < g.size(); ++i) s[i] *= vk[i];
    g.fft_backward(s);
    for (int c = 0; c < 4; ++c)
      for (std::size_t i = 0; i < g.size(); ++i)
        out.comp[c][i] += p.weight * fr.comp[c][i] * s[i];
  }
  out.to_fourier(g);
  out.mask(g);
  return out;
}

double exchange_energy(const SpatialGrid& g, const OperatorKernel& q) {
  // Ex = sum_ij w_i w_j D_c(A_ij, G_ij) with the scalar cross densities
  // A_ij = <f_j, f_i>(x), G_ij = <g_j, g_i>(y)
  const std::size_t r = q.rank();
  std::vector<Field4> fr(r), gr(r);
  for (std::size_t i = 0; i < r; ++i) {
    fr[i] = q.pairs[i].left;
    fr[i].to_real(g);
    gr[i] = q.pairs[i].right;
    gr[i].to_real(g);
  }
  const auto& vk = g.coulomb_multiplier();
  std::vector<cxd> A(g.size()), G(g.size());
  cxd total = 0.0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      for (std::size_t x = 0; x < g.size(); ++x) {
        cxd a = 0.0, b = 0.0;
        for (int c = 0; c < 4; ++c) {
          a += std::conj(fr[j].comp[c][x]) * fr[i].comp[c][x];
          b += std::conj(gr[j].comp[c][x]) * gr[i].comp[c][x];
        }
        A[x] = a;
        G[x] = b;
      }
      g.fft_forward(A);
      g.fft_forward(G);
      cxd s = 0.0;
      for (std::size_t x = 0; x < g.size(); ++x)
        s += vk[x] * A[x] * std::conj(G[x]);
      total += q.pairs[i].weight * q.pairs[j].weight * s * g.dk3();
    }
  return total.real();
}

double kinetic_grad_norm(const SpatialGrid& g, const OperatorKernel& q) {
  // Tr(|grad| Q^2) = sum_ij w_i w_j <g_i, g_j> <f_j, |k| f_i>   (Hermitian Q)
  const std::size_t r = q.rank();
  double s = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    Field4 kf = q.pairs[i].left;
    for (int c = 0; c < 4; ++c)
      for (std::size_t x = 0; x < g.size(); ++x)
        kf.comp[c][x] *= std::sqrt(g.k2()[x]);
    for (std::size_t j = 0; j < r; ++j) {
      const cxd gij = dot(g, q.pairs[i].right, q.pairs[j].right);
      const cxd fji = dot(g, q.pairs[j].left, kf);
      s += (q.pairs[i].weight * q.pairs[j].weight * gij * fji).real();
    }
  }
  return s;
}

BdfEnergyBreakdown bdf_energy(const SpatialGrid& g, const GridDirac& gd,
                              const OperatorKernel& q, const Density& nu,
                              const PhysicalParams& params) {
  if (!q.hermitian)
    throw std::invalid_argument("bdf_energy: kernel must be Hermitian");
  BdfEnergyBreakdown out;
  // kinetic: Tr{P- (D Q) P-} + Tr{P+ (D Q) P+} evaluated blockwise
  for (int sign : {-1, +1}) {
    for (const auto& p : q.pairs) {
      Field4 l = p.left, r = p.right;
      gd.apply_projector(l, sign);
      gd.apply_dirac(l);
      gd.apply_projector(r, sign);
      out.kinetic += (p.weight * dot(g, r, l)).real();
    }
  }
  auto rho = density_of(g, q);
  out.external = -params.alpha * coulomb_bilinear(g, rho.density, nu);
  out.direct = 0.5 * params.alpha * coulomb_bilinear(g, rho.density, rho.density);
  out.exchange = -0.5 * params.alpha * exchange_energy(g, q);
  return out;
}

double k_constant(double a) {
  if (a <= 1.0) throw NumericalError("k_constant: integral diverges for a <= 1");
  const double closed =
      std::exp(std::lgamma(0.5) + std::lgamma(0.5 * (a - 1.0)) - std::lgamma(0.5 * a)) /
      (2.0 * M_PI);
  const double quad = k_constant_quadrature(a);
  if (std::abs(closed - quad) > 1e-10 * std::max(1.0, std::abs(closed)))
    throw QuadratureError("k_constant: closed form and quadrature disagree",
                          std::abs(closed - quad));
  return closed;
}

double k_constant_quadrature(double a, int n) {
  auto r = quad::tan_contour(n);
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i)
    s += r.w[i] * std::pow(1.0 + r.x[i] * r.x[i], -0.5 * a);
  return s / (2.0 * M_PI);
}

} // namespace bdf::ops
