#include "bdf/spatial_grid.hpp"

#include "bdf/errors.hpp"
#include "bdf/rng.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace bdf::ops {

SpatialGrid::SpatialGrid(int n, double extent, double cutoff)
    : n_(n), extent_(extent), cutoff_(cutoff) {
  if (n < 4) throw std::invalid_argument("SpatialGrid: n too small");
  if (!(extent > 0.0)) throw std::invalid_argument("SpatialGrid: bad extent");
  if (cutoff > nyquist() * (1.0 + 1e-12))
    throw ResolutionError("SpatialGrid: cutoff ball outside the Nyquist ball");

  const std::size_t N = size();
  k2_.resize(N);
  mask_.resize(N);
  coulomb_.resize(N);
  const double rc = 0.5 * extent_;
  const double c2 = cutoff_ * cutoff_;
  std::size_t idx = 0;
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b)
      for (int c = 0; c < n_; ++c, ++idx) {
        auto freq = [this](int m) {
          return (m <= n_ / 2) ? double(m) : double(m - n_);
        };
        const double kx = dk() * freq(a), ky = dk() * freq(b), kz = dk() * freq(c);
        const double kk = kx * kx + ky * ky + kz * kz;
        k2_[idx] = kk;
        mask_[idx] = (kk <= c2 * (1.0 + 1e-12)) ? 1 : 0;
        if (mask_[idx]) ++n_masked_;
        if (kk > 0.0) {
          const double k = std::sqrt(kk);
          coulomb_[idx] = 4.0 * M_PI * (1.0 - std::cos(k * rc)) / kk;
        } else {
          coulomb_[idx] = 2.0 * M_PI * rc * rc;
        }
      }

  buf_.resize(N);
  // FFTW_ESTIMATE keeps planning deterministic (no timing-dependent choices)
  fwd_ = fftw_plan_dft_3d(n_, n_, n_, reinterpret_cast<fftw_complex*>(buf_.data()),
                          reinterpret_cast<fftw_complex*>(buf_.data()), FFTW_FORWARD,
                          FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_3d(n_, n_, n_, reinterpret_cast<fftw_complex*>(buf_.data()),
                          reinterpret_cast<fftw_complex*>(buf_.data()), FFTW_BACKWARD,
                          FFTW_ESTIMATE);
  if (!fwd_ || !bwd_) throw std::runtime_error("SpatialGrid: fftw plan failed");
}

SpatialGrid::~SpatialGrid() {
  if (fwd_) fftw_destroy_plan(fwd_);
  if (bwd_) fftw_destroy_plan(bwd_);
}

Vec3 SpatialGrid::mode(std::size_t idx) const {
  const int c = int(idx % n_);
  const int b = int((idx / n_) % n_);
  const int a = int(idx / (std::size_t(n_) * n_));
  auto freq = [this](int m) { return (m <= n_ / 2) ? double(m) : double(m - n_); };
  return {dk() * freq(a), dk() * freq(b), dk() * freq(c)};
}

Vec3 SpatialGrid::point(std::size_t idx) const {
  const int c = int(idx % n_);
  const int b = int((idx / n_) % n_);
  const int a = int(idx / (std::size_t(n_) * n_));
  auto coord = [this](int m) {
    double x = spacing() * m;
    return (x >= 0.5 * extent_) ? x - extent_ : x;
  };
  return {coord(a), coord(b), coord(c)};
}

void SpatialGrid::fft_forward(std::vector<cxd>& f) const {
  if (f.size() != size()) throw std::invalid_argument("fft_forward: size mismatch");
  std::memcpy(buf_.data(), f.data(), sizeof(cxd) * f.size());
  fftw_execute_dft(fwd_, reinterpret_cast<fftw_complex*>(buf_.data()),
                   reinterpret_cast<fftw_complex*>(buf_.data()));
  const double s = cell_volume() * std::pow(2.0 * M_PI, -1.5);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = buf_[i] * s;
}

void SpatialGrid::fft_backward(std::vector<cxd>& f) const {
  if (f.size() != size()) throw std::invalid_argument("fft_backward: size mismatch");
  std::memcpy(buf_.data(), f.data(), sizeof(cxd) * f.size());
  fftw_execute_dft(bwd_, reinterpret_cast<fftw_complex*>(buf_.data()),
                   reinterpret_cast<fftw_complex*>(buf_.data()));
  const double s = dk3() * std::pow(2.0 * M_PI, -1.5);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = buf_[i] * s;
}

Field4 Field4::zero(const SpatialGrid& g, Rep rep) {
  Field4 f;
  f.rep = rep;
  for (auto& c : f.comp) c.assign(g.size(), cxd(0.0));
  return f;
}

void Field4::to_fourier(const SpatialGrid& g) {
  if (rep == Rep::Fourier) return;
  for (auto& c : comp) g.fft_forward(c);
  rep = Rep::Fourier;
}

void Field4::to_real(const SpatialGrid& g) {
  if (rep == Rep::Real) return;
  for (auto& c : comp) g.fft_backward(c);
  rep = Rep::Real;
}

void Field4::mask(const SpatialGrid& g) {
  if (rep != Rep::Fourier) throw std::logic_error("Field4::mask: need Fourier rep");
  const auto& m = g.mask();
  for (auto& c : comp)
    for (std::size_t i = 0; i < c.size(); ++i)
      if (!m[i]) c[i] = 0.0;
}

void Field4::scale(cxd s) {
  for (auto& c : comp)
    for (auto& v : c) v *= s;
}

void Field4::axpy(cxd a, const Field4& x) {
  for (int c = 0; c < 4; ++c)
    for (std::size_t i = 0; i < comp[c].size(); ++i) comp[c][i] += a * x.comp[c][i];
}

cxd dot(const SpatialGrid& g, const Field4& a, const Field4& b) {
  if (a.rep != b.rep) throw std::logic_error("dot: representation mismatch");
  cxd s = 0.0;
  for (int c = 0; c < 4; ++c)
    for (std::size_t i = 0; i < a.comp[c].size(); ++i)
      s += std::conj(a.comp[c][i]) * b.comp[c][i];
  return s * ((a.rep == Rep::Real) ? g.cell_volume() : g.dk3());
}

double norm2(const SpatialGrid& g, const Field4& a) { return dot(g, a, a).real(); }

Field4 random_band_limited(const SpatialGrid& g, std::uint64_t seed,
                           std::uint64_t stream) {
  Field4 f = Field4::zero(g, Rep::Fourier);
  const auto& m = g.mask();
  rng::Counter rc{seed, stream, 0};
  for (int c = 0; c < 4; ++c)
    for (std::size_t i = 0; i < g.size(); ++i)
      if (m[i]) f.comp[c][i] = cxd(rc.normal(), rc.normal());
  return f;
}

Density Density::zero(const SpatialGrid& g) {
  Density d;
  d.values.assign(g.size(), 0.0);
  return d;
}

const std::vector<cxd>& Density::fourier(const SpatialGrid& g) const {
  if (!have_fourier_) {
    fourier_.assign(values.begin(), values.end());
    g.fft_forward(fourier_);
    have_fourier_ = true;
  }
  return fourier_;
}

double Density::integral_real(const SpatialGrid& g) const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * g.cell_volume();
}

double Density::integral_fourier(const SpatialGrid& g) const {
  return fourier(g)[0].real() * std::pow(2.0 * M_PI, 1.5);
}

Density gaussian_density(const SpatialGrid& g, double charge, double width,
                         const Vec3& center) {
  Density d = Density::zero(g);
  const double norm = charge / std::pow(2.0 * M_PI * width * width, 1.5);
  for (std::size_t i = 0; i < g.size(); ++i) {
    Vec3 x = g.point(i) - center;
    // minimum image
    for (auto& xi : x) {
      if (xi > 0.5 * g.extent()) xi -= g.extent();
      if (xi < -0.5 * g.extent()) xi += g.extent();
    }
    d.values[i] = norm * std::exp(-bdf::dot(x, x) / (2.0 * width * width));
  }
  return d;
}

GridDirac::GridDirac(const SpatialGrid& g, const DressedDirac& d) : grid_(&g) {
  const std::size_t N = g.size();
  sig_.resize(N);
  esc_.resize(N);
  m_ = d.m();
  for (std::size_t i = 0; i < N; ++i) {
    Vec3 k = g.mode(i);
    const double K = std::min(norm(k), d.lambda());
    if (norm(k) > 0.0 && K < norm(k)) k = (K / norm(k)) * k; // clamp outside modes
    sig_[i] = d.sigma4(k);
    esc_[i] = d.e_script(K);
  }
}

namespace {

// w = (sigma . Gamma) v with Gamma = (beta, alpha_1..3)
inline void sigma_mul(const std::array<double, 4>& s, const cxd* v, cxd* w) {
  const cxd i(0.0, 1.0);
  w[0] = s[0] * v[0] + s[1] * v[3] - i * s[2] * v[3] + s[3] * v[2];
  w[1] = s[0] * v[1] + s[1] * v[2] + i * s[2] * v[2] - s[3] * v[3];
  w[2] = -s[0] * v[2] + s[1] * v[1] - i * s[2] * v[1] + s[3] * v[0];
  w[3] = -s[0] * v[3] + s[1] * v[0] + i * s[2] * v[0] - s[3] * v[1];
}

} // namespace

void GridDirac::apply_sign(Field4& f) const {
  if (f.rep != Rep::Fourier) throw std::logic_error("apply_sign: need Fourier rep");
  const std::size_t N = grid_->size();
  cxd v[4], w[4];
  for (std::size_t i = 0; i < N; ++i) {
    for (int c = 0; c < 4; ++c) v[c] = f.comp[c][i];
    sigma_mul(sig_[i], v, w);
    for (int c = 0; c < 4; ++c) f.comp[c][i] = w[c];
  }
}

void GridDirac::apply_projector(Field4& f, int sign) const {
  if (f.rep != Rep::Fourier) throw std::logic_error("apply_projector: need Fourier rep");
  const std::size_t N = grid_->size();
  const double sgn = (sign >= 0) ? 1.0 : -1.0;
  cxd v[4], w[4];
  for (std::size_t i = 0; i < N; ++i) {
    for (int c = 0; c < 4; ++c) v[c] = f.comp[c][i];
    sigma_mul(sig_[i], v, w);
    for (int c = 0; c < 4; ++c) f.comp[c][i] = 0.5 * (v[c] + sgn * w[c]);
  }
}

void GridDirac::apply_dirac(Field4& f) const {
  if (f.rep != Rep::Fourier) throw std::logic_error("apply_dirac: need Fourier rep");
  const std::size_t N = grid_->size();
  cxd v[4], w[4];
  for (std::size_t i = 0; i < N; ++i) {
    for (int c = 0; c < 4; ++c) v[c] = f.comp[c][i];
    sigma_mul(sig_[i], v, w);
    for (int c = 0; c < 4; ++c) f.comp[c][i] = esc_[i] * w[c];
  }
}

void GridDirac::apply_resolvent(Field4& f, double eta) const {
  if (f.rep != Rep::Fourier) throw std::logic_error("apply_resolvent: need Fourier rep");
  const std::size_t N = grid_->size();
  const cxd ieta(0.0, eta);
  cxd v[4], w[4];
  for (std::size_t i = 0; i < N; ++i) {
    const double E = esc_[i];
    const cxd scale = 1.0 / (E * E + eta * eta);
    for (int c = 0; c < 4; ++c) v[c] = f.comp[c][i];
    sigma_mul(sig_[i], v, w);
    for (int c = 0; c < 4; ++c) f.comp[c][i] = scale * (E * w[c] - ieta * v[c]);
  }
}

void GridDirac::apply_resolvent_adjoint(Field4& f, double eta) const {
  apply_resolvent(f, -eta);
}

} // namespace bdf::ops
