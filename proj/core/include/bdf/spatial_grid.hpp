#pragma once

#include "bdf/dressed_dirac.hpp"
#include "bdf/vec3.hpp"

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

// forward-declare the FFTW plan type
extern "C" {
typedef struct fftw_plan_s* fftw_plan;
}

namespace bdf::ops {

using cxd = std::complex<double>;

// Periodic cubic grid. Fields live either in real space or as Fourier
// coefficients with the continuum-like normalization
//   fhat(k) = (2pi)^(-3/2) h^3 sum_x f(x) e^(-ikx),
//   f(x)    = (2pi)^(-3/2) dk^3 sum_k fhat(k) e^(+ikx).
// The momentum cutoff is enforced by zeroing coefficients with |k| > cutoff;
// the cutoff ball must sit inside the Nyquist ball.
class SpatialGrid {
public:
  SpatialGrid(int n, double extent, double cutoff);
  ~SpatialGrid();
  SpatialGrid(const SpatialGrid&) = delete;
  SpatialGrid& operator=(const SpatialGrid&) = delete;

  int n() const { return n_; }
  std::size_t size() const { return std::size_t(n_) * n_ * n_; }
  double extent() const { return extent_; }
  double cutoff() const { return cutoff_; }
  double spacing() const { return extent_ / n_; }
  double cell_volume() const { return spacing() * spacing() * spacing(); }
  double dk() const { return 2.0 * M_PI / extent_; }
  double dk3() const { return dk() * dk() * dk(); }
  double nyquist() const { return M_PI * n_ / extent_; }

  Vec3 mode(std::size_t idx) const;
  Vec3 point(std::size_t idx) const; // coordinates in [-L/2, L/2)
  const std::vector<double>& k2() const { return k2_; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  std::size_t n_masked_modes() const { return n_masked_; }

  // spherically truncated Coulomb kernel (R_c = extent/2):
  // 4 pi (1 - cos(|k| R_c))/k^2, value 2 pi R_c^2 at k = 0
  const std::vector<double>& coulomb_multiplier() const { return coulomb_; }

  void fft_forward(std::vector<cxd>& f) const;  // real -> fourier (in place)
  void fft_backward(std::vector<cxd>& f) const; // fourier -> real

private:
  int n_;
  double extent_, cutoff_;
  std::vector<double> k2_, coulomb_;
  std::vector<std::uint8_t> mask_;
  std::size_t n_masked_ = 0;
  fftw_plan fwd_ = nullptr, bwd_ = nullptr;
  mutable std::vector<cxd> buf_;
};

enum class Rep { Real, Fourier };

// C^4-valued field on the grid.
struct Field4 {
  std::array<std::vector<cxd>, 4> comp;
  Rep rep = Rep::Fourier;

  static Field4 zero(const SpatialGrid& g, Rep rep = Rep::Fourier);
  void to_fourier(const SpatialGrid& g);
  void to_real(const SpatialGrid& g);
  void mask(const SpatialGrid& g); // requires Fourier rep
  void scale(cxd s);
  void axpy(cxd a, const Field4& x);
};

// <f, g> = h^3 sum <f(x), g(x)>_C4 (real rep) or dk^3 sum (fourier rep);
// the two agree by Parseval. Both fields must be in the same representation.
cxd dot(const SpatialGrid& g, const Field4& a, const Field4& b);
double norm2(const SpatialGrid& g, const Field4& a);

// random band-limited field (unit-variance coefficients inside the cutoff),
// reproducible via the counter RNG
Field4 random_band_limited(const SpatialGrid& g, std::uint64_t seed,
                           std::uint64_t stream);

// scalar density on the grid
struct Density {
  std::vector<double> values;          // real space
  mutable std::vector<cxd> fourier_;   // cached transform
  mutable bool have_fourier_ = false;

  static Density zero(const SpatialGrid& g);
  const std::vector<cxd>& fourier(const SpatialGrid& g) const;
  void invalidate() { have_fourier_ = false; }
  double integral_real(const SpatialGrid& g) const;
  double integral_fourier(const SpatialGrid& g) const; // from the k = 0 mode
};

Density gaussian_density(const SpatialGrid& g, double charge, double width,
                         const Vec3& center = {0.0, 0.0, 0.0});

// dressed operator sampled on the grid modes
class GridDirac {
public:
  GridDirac(const SpatialGrid& g, const DressedDirac& d);

  const SpatialGrid& grid() const { return *grid_; }
  double escript(std::size_t idx) const { return esc_[idx]; }
  const std::array<double, 4>& sigma(std::size_t idx) const { return sig_[idx]; }
  double m() const { return m_; }

  // all of these act in Fourier representation
  void apply_sign(Field4& f) const;
  void apply_projector(Field4& f, int sign) const;
  void apply_dirac(Field4& f) const;                  // multiply by E s
  void apply_resolvent(Field4& f, double eta) const;  // (D + i eta)^(-1)
  void apply_resolvent_adjoint(Field4& f, double eta) const; // (D - i eta)^(-1)

private:
  const SpatialGrid* grid_;
  std::vector<std::array<double, 4>> sig_;
  std::vector<double> esc_;
  double m_ = 1.0;
};

} // namespace bdf::ops
