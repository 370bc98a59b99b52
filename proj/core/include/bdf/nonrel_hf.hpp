#pragma once

#include "bdf/vec3.hpp"

#include <vector>

namespace bdf::nrhf {

struct BasisSpec {
  double a0 = 0.02;  // smallest exponent
  double beta = 2.2; // even-tempered ratio
  int n = 14;

  std::vector<double> exponents() const;
};

// s-type Gaussian basis over one or more centers; all one- and two-electron
// integrals are closed-form.
struct SBasis {
  std::vector<double> exps;
  std::vector<Vec3> centers;
  std::size_t size() const { return exps.size(); }

  static SBasis radial(const BasisSpec& spec);
};

struct Integrals {
  // row-major nb x nb
  std::vector<double> S, T, V; // overlap, kinetic, sum of nuclear attraction
  std::vector<double> eri;     // (ij|kl), nb^4
  std::size_t nb = 0;
  double s(std::size_t i, std::size_t j) const { return S[i * nb + j]; }
  double t(std::size_t i, std::size_t j) const { return T[i * nb + j]; }
  double v(std::size_t i, std::size_t j) const { return V[i * nb + j]; }
  double g(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return eri[((i * nb + j) * nb + k) * nb + l];
  }
};

struct Nucleus {
  Vec3 pos{0, 0, 0};
  double charge = 0.0;
};

Integrals build_integrals(const SBasis& basis, const std::vector<Nucleus>& nuclei);

// Spin-orbitals live in the lower two spinor components only
// ((1+beta)/2 Gamma = 0 by construction); within this module each orbital is
// a spatial vector with a spin tag and an occupation in [0, 1].
struct NrState {
  double a = 0.0; // screening constant in [0, 1)
  double Z = 0.0;
  double M = 0.0; // possibly fractional
  std::vector<std::vector<double>> orbitals[2]; // per spin: list of coeff vectors
  std::vector<double> occ[2];                   // occupations per spin channel
  std::vector<double> eps[2];                   // orbital eigenvalues
  double energy = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct NrOptions {
  BasisSpec basis{};
  double tol = 1e-9;    // max |FPS - SPF| element
  int max_iter = 200;
  double damping = 0.5; // density mixing 0 < theta <= 1
  double level_shift = 0.0;
  bool diis = true;     // commutator-DIIS acceleration on the Fock matrices
  int diis_depth = 8;
};

// E_nr(Gamma) = 1/2 Tr(-D Gamma) - Z(1-a) Tr(Gamma/r)
//              + (1-a)/2 D(rho,rho) - 1/2 Ex[Gamma]
double nr_energy(const NrState& state, const Integrals& ints);

NrState scf_minimize(double Z, double M, double a, const NrOptions& opts = {});

// dE/d lambda of the dilated minimizer at lambda = 1 (virial-style probe)
double dilation_derivative(const NrState& state, const NrOptions& opts);

struct BindingReport {
  double E_M = 0.0;       // E(M)
  double E_M1 = 0.0;      // E(M-1)
  double E0_1 = 0.0;      // E^0(1), Pekar-type
  double gap = 0.0;       // E(M-1) + E0(1) - E(M), > 0 means binding
  double trial_energy = 0.0; // separated-cluster upper bound
  bool trial_above_min = false;
  bool degenerate = false;   // a = 0, Z = 0 free-particle case
};
BindingReport binding_test(double Z, int M, double a, const NrOptions& opts = {},
                           double cluster_R = 20.0);

struct ConcavityReport {
  std::vector<double> M_grid;
  std::vector<double> energies;
  double max_second_difference = 0.0; // discrete concavity if <= tol
};
ConcavityReport concavity_probe(double Z, double a, const std::vector<double>& M_grid,
                                const NrOptions& opts = {});

// radial profile of the occupied orbitals, for CSV output
struct RadialProfilePoint {
  double r;
  std::vector<double> phi; // one column per occupied spin-orbital
};
std::vector<RadialProfilePoint> orbital_profiles(const NrState& state,
                                                 const NrOptions& opts, int nr = 120,
                                                 double rmax = 40.0);

} // namespace bdf::nrhf
