#include "bdf/operator_kernel.hpp"

#include "bdf/errors.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace bdf::ops {

OperatorKernel OperatorKernel::projector_state(const SpatialGrid& g,
                                               std::vector<Field4> orbitals) {
  OperatorKernel q;
  q.hermitian = true;
  for (auto& f : orbitals) {
    f.to_fourier(g);
    f.mask(g);
    Pair p;
    p.right = f;
    p.left = std::move(f);
    p.weight = 1.0;
    q.pairs.push_back(std::move(p));
  }
  return q;
}

Field4 apply(const SpatialGrid& g, const OperatorKernel& q, const Field4& h) {
  Field4 out = Field4::zero(g, Rep::Fourier);
  for (const auto& p : q.pairs) {
    const cxd c = p.weight * dot(g, p.right, h);
    out.axpy(c, p.left);
  }
  return out;
}

Field4 apply_adjoint(const SpatialGrid& g, const OperatorKernel& q, const Field4& h) {
  Field4 out = Field4::zero(g, Rep::Fourier);
  for (const auto& p : q.pairs) {
    const cxd c = p.weight * dot(g, p.left, h);
    out.axpy(c, p.right);
  }
  return out;
}

OperatorKernel adjoint(const OperatorKernel& q) {
  OperatorKernel a;
  a.hermitian = q.hermitian;
  a.pairs.reserve(q.pairs.size());
  for (const auto& p : q.pairs) a.pairs.push_back({p.right, p.left, p.weight});
  return a;
}

double hs_norm2(const SpatialGrid& g, const OperatorKernel& q) {
  const std::size_t r = q.rank();
  cxd s = 0.0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      const cxd gij = dot(g, q.pairs[i].right, q.pairs[j].right);
      const cxd fji = dot(g, q.pairs[j].left, q.pairs[i].left);
      s += q.pairs[i].weight * q.pairs[j].weight * gij * fji;
    }
  return std::max(s.real(), 0.0);
}

DensityResult density_of(const SpatialGrid& g, const OperatorKernel& q) {
  DensityResult out;
  out.density = Density::zero(g);
  std::vector<double> imag(g.size(), 0.0);
  for (const auto& p : q.pairs) {
    Field4 f = p.left, gg = p.right;
    f.to_real(g);
    gg.to_real(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      cxd s = 0.0;
      for (int c = 0; c < 4; ++c) s += std::conj(gg.comp[c][i]) * f.comp[c][i];
      out.density.values[i] += p.weight * s.real();
      imag[i] += p.weight * s.imag();
    }
  }
  for (double v : imag) out.max_imag = std::max(out.max_imag, std::abs(v));
  out.density.invalidate();
  return out;
}

cxd trace_of(const SpatialGrid& g, const OperatorKernel& q) {
  cxd s = 0.0;
  for (const auto& p : q.pairs) s += p.weight * dot(g, p.right, p.left);
  return s;
}

double blockwise_trace(const SpatialGrid& g, const GridDirac& gd,
                       const OperatorKernel& q) {
  double s = 0.0;
  for (int sign : {-1, +1}) {
    for (const auto& p : q.pairs) {
      Field4 l = p.left, r = p.right;
      gd.apply_projector(l, sign);
      gd.apply_projector(r, sign);
      s += (p.weight * dot(g, r, l)).real();
    }
  }
  return s;
}

std::array<double, 4> block_hs_norms(const SpatialGrid& g, const GridDirac& gd,
                                     const OperatorKernel& q) {
  std::array<double, 4> out{};
  int slot = 0;
  for (int s1 : {-1, +1})
    for (int s2 : {-1, +1}) {
      OperatorKernel blk;
      blk.pairs.reserve(q.pairs.size());
      for (const auto& p : q.pairs) {
        Field4 l = p.left, r = p.right;
        gd.apply_projector(l, s1);
        gd.apply_projector(r, s2);
        blk.pairs.push_back({std::move(l), std::move(r), p.weight});
      }
      out[slot++] = std::sqrt(hs_norm2(g, blk));
    }
  return out;
}

namespace {

using Mat = Eigen::MatrixXcd;

// orthonormal basis of the span of the given fields; returns the basis and
// the coefficient matrix C with fields[j] = sum_m basis[m] C(m, j)
std::pair<std::vector<Field4>, Mat> orthonormalize(const SpatialGrid& g,
                                                   const std::vector<const Field4*>& f,
                                                   double tol) {
  std::vector<Field4> basis;
  const std::size_t n = f.size();
  Mat C = Mat::Zero(n, n);
  double scale = 0.0;
  for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, norm2(g, *f[j]));
  scale = std::sqrt(std::max(scale, 1e-300));
  for (std::size_t j = 0; j < n; ++j) {
    Field4 v = *f[j];
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t m = 0; m < basis.size(); ++m) {
        const cxd c = dot(g, basis[m], v);
        v.axpy(-c, basis[m]);
        C(m, j) += c;
      }
    const double nv = std::sqrt(std::max(norm2(g, v), 0.0));
    if (nv > tol * scale) {
      v.scale(1.0 / nv);
      C(basis.size(), j) = nv;
      basis.push_back(std::move(v));
    }
  }
  return {std::move(basis), C.topRows(std::max<std::size_t>(basis.size(), 1))};
}

} // namespace

CompressReport compress(const SpatialGrid& g, OperatorKernel& q,
                        const CompressOptions& opts) {
  CompressReport rep;
  rep.rank_before = q.rank();
  if (q.pairs.empty()) return rep;

  std::vector<const Field4*> lf, rf;
  for (const auto& p : q.pairs) {
    lf.push_back(&p.left);
    rf.push_back(&p.right);
  }
  auto [lbasis, LC] = orthonormalize(g, lf, 1e-13);
  auto [rbasis, RC] = orthonormalize(g, rf, 1e-13);
  if (lbasis.empty() || rbasis.empty()) {
    q.pairs.clear();
    rep.rank_after = 0;
    return rep;
  }

  // core matrix: Q = sum_j w_j (L C_j)(R C_j)^dag = Lbasis * M * Rbasis^dag
  Mat M = Mat::Zero(lbasis.size(), rbasis.size());
  for (std::size_t j = 0; j < q.pairs.size(); ++j)
    M += q.pairs[j].weight * LC.col(j) * RC.col(j).adjoint();

  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double total2 = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) total2 += sv[i] * sv[i];

  std::size_t keep = 0;
  while (keep < std::size_t(sv.size()) && keep < opts.rank_cap &&
         sv[keep] > opts.drop_tol * sv[0])
    ++keep;
  double dropped2 = 0.0;
  for (std::size_t i = keep; i < std::size_t(sv.size()); ++i) dropped2 += sv[i] * sv[i];
  rep.discarded_weight = (total2 > 0.0) ? std::sqrt(dropped2 / total2) : 0.0;
  if (rep.discarded_weight > opts.loss_tol)
    throw CompressionLoss("compress: rank cap discards too much weight",
                          rep.discarded_weight);

  std::vector<OperatorKernel::Pair> out;
  out.reserve(keep);
  for (std::size_t m = 0; m < keep; ++m) {
    Field4 l = Field4::zero(g, Rep::Fourier);
    Field4 r = Field4::zero(g, Rep::Fourier);
    for (std::size_t i = 0; i < lbasis.size(); ++i) l.axpy(svd.matrixU()(i, m), lbasis[i]);
    for (std::size_t i = 0; i < rbasis.size(); ++i) r.axpy(svd.matrixV()(i, m), rbasis[i]);
    out.push_back({std::move(l), std::move(r), sv[m]});
  }
  q.pairs = std::move(out);
  rep.rank_after = q.rank();
  if (opts.enforce_hermitian) q.hermitian = true;
  return rep;
}

void hermitize(OperatorKernel& q) {
  std::vector<OperatorKernel::Pair> extra;
  extra.reserve(q.pairs.size());
  for (auto& p : q.pairs) {
    p.weight *= 0.5;
    extra.push_back({p.right, p.left, p.weight});
  }
  q.pairs.insert(q.pairs.end(), std::make_move_iterator(extra.begin()),
                 std::make_move_iterator(extra.end()));
  q.hermitian = true;
}

} // namespace bdf::ops
