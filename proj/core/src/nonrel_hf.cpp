#include "bdf/nonrel_hf.hpp"

#include "bdf/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace bdf::nrhf {

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

double boys0(double t) {
  if (t < 1e-12) return 1.0 - t / 3.0;
  return 0.5 * std::sqrt(M_PI / t) * std::erf(std::sqrt(t));
}

Mat to_mat(const std::vector<double>& v, std::size_t nb) {
  Mat m(nb, nb);
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = 0; j < nb; ++j) m(i, j) = v[i * nb + j];
  return m;
}

} // namespace

std::vector<double> BasisSpec::exponents() const {
  std::vector<double> e(n);
  double a = a0;
  for (int i = 0; i < n; ++i) {
    e[i] = a;
    a *= beta;
  }
  return e;
}

SBasis SBasis::radial(const BasisSpec& spec) {
  SBasis b;
  b.exps = spec.exponents();
  b.centers.assign(b.exps.size(), Vec3{0.0, 0.0, 0.0});
  return b;
}

Integrals build_integrals(const SBasis& basis, const std::vector<Nucleus>& nuclei) {
  const std::size_t nb = basis.size();
  Integrals I;
  I.nb = nb;
  I.S.assign(nb * nb, 0.0);
  I.T.assign(nb * nb, 0.0);
  I.V.assign(nb * nb, 0.0);
  I.eri.assign(nb * nb * nb * nb, 0.0);

  // normalized primitives: N e^{-a r^2} with <g|g> = 1
  std::vector<double> nrm(nb);
  for (std::size_t i = 0; i < nb; ++i)
    nrm[i] = std::pow(2.0 * basis.exps[i] / M_PI, 0.75);

  struct PairData {
    double p, K, pref;
    Vec3 P;
  };
  std::vector<PairData> pd(nb * nb);
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      const double a = basis.exps[i], b = basis.exps[j];
      const Vec3 A = basis.centers[i], B = basis.centers[j];
      const double p = a + b, mu = a * b / p;
      const Vec3 AB = A - B;
      const double R2 = bdf::dot(AB, AB);
      const double K = std::exp(-mu * R2);
      PairData& d = pd[i * nb + j];
      d.p = p;
      d.K = K;
      d.P = (1.0 / p) * (a * A + (b * B - Vec3{0, 0, 0}));
      d.P = {(a * A[0] + b * B[0]) / p, (a * A[1] + b * B[1]) / p,
             (a * A[2] + b * B[2]) / p};
      d.pref = std::pow(M_PI / p, 1.5) * K;
      const double nn = nrm[i] * nrm[j];
      I.S[i * nb + j] = nn * d.pref;
      I.T[i * nb + j] = nn * mu * (3.0 - 2.0 * mu * R2) * d.pref;
      double v = 0.0;
      for (const auto& nuc : nuclei) {
        const Vec3 PC = d.P - nuc.pos;
        v += nuc.charge * (2.0 * M_PI / p) * K * boys0(p * bdf::dot(PC, PC));
      }
      I.V[i * nb + j] = nn * v;
    }

  for (std::size_t ij = 0; ij < nb * nb; ++ij)
    for (std::size_t kl = 0; kl <= ij; ++kl) {
      const PairData& dij = pd[ij];
      const PairData& dkl = pd[kl];
      const Vec3 PQ = dij.P - dkl.P;
      const double p = dij.p, q = dkl.p;
      const std::size_t i1 = ij / nb, j1 = ij % nb, k1 = kl / nb, l1 = kl % nb;
      const double val = nrm[i1] * nrm[j1] * nrm[k1] * nrm[l1] * 2.0 *
                         std::pow(M_PI, 2.5) / (p * q * std::sqrt(p + q)) * dij.K *
                         dkl.K * boys0(p * q / (p + q) * bdf::dot(PQ, PQ));
      I.eri[ij * nb * nb + kl] = val;
      I.eri[kl * nb * nb + ij] = val;
    }
  return I;
}

namespace {

Mat build_J(const Integrals& I, const Mat& P) {
  const std::size_t nb = I.nb;
  Mat J = Mat::Zero(nb, nb);
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) s += P(k, l) * I.g(i, j, k, l);
      J(i, j) = s;
    }
  return J;
}

Mat build_K(const Integrals& I, const Mat& P) {
  const std::size_t nb = I.nb;
  Mat K = Mat::Zero(nb, nb);
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) s += P(k, l) * I.g(i, k, j, l);
      K(i, j) = s;
    }
  return K;
}

struct SpinDensities {
  Mat P[2];
};

double energy_from(const Integrals& I, const Mat& h, const SpinDensities& sd,
                   double a) {
  const Mat Ptot = sd.P[0] + sd.P[1];
  const Mat J = build_J(I, Ptot);
  double E = (Ptot.cwiseProduct(h)).sum();
  E += 0.5 * (1.0 - a) * (Ptot.cwiseProduct(J)).sum();
  for (int s = 0; s < 2; ++s) {
    const Mat K = build_K(I, sd.P[s]);
    E -= 0.5 * (sd.P[s].cwiseProduct(K)).sum();
  }
  return E;
}

} // namespace

double nr_energy(const NrState& state, const Integrals& I) {
  const std::size_t nb = I.nb;
  const Mat T = to_mat(I.T, nb), V = to_mat(I.V, nb);
  const Mat h = T - (1.0 - state.a) * V; // V carries the nuclear charge
  SpinDensities sd;
  for (int s = 0; s < 2; ++s) {
    sd.P[s] = Mat::Zero(nb, nb);
    for (std::size_t o = 0; o < state.orbitals[s].size(); ++o) {
      Vec c(nb);
      for (std::size_t i = 0; i < nb; ++i) c[i] = state.orbitals[s][o][i];
      sd.P[s] += state.occ[s][o] * c * c.transpose();
    }
  }
  return energy_from(I, h, sd, state.a);
}

NrState scf_minimize(double Z, double M, double a, const NrOptions& opts) {
  if (a < 0.0 || a >= 1.0) throw std::invalid_argument("scf_minimize: need 0 <= a < 1");
  if (M < 0.0 || M > 2.0 * opts.basis.n)
    throw std::invalid_argument("scf_minimize: bad electron count");

  SBasis basis = SBasis::radial(opts.basis);
  std::vector<Nucleus> nuclei;
  if (Z != 0.0) nuclei.push_back({{0, 0, 0}, Z});
  Integrals I = build_integrals(basis, nuclei);
  const std::size_t nb = I.nb;

  const Mat S = to_mat(I.S, nb);
  {
    Eigen::SelfAdjointEigenSolver<Mat> es(S);
    const double cond = es.eigenvalues().maxCoeff() /
                        std::max(es.eigenvalues().minCoeff(), 1e-300);
    if (!(es.eigenvalues().minCoeff() > 0.0) || cond > 1e10)
      throw BasisError("scf_minimize: near-linear-dependent basis (cond > 1e10)");
  }
  const Mat T = to_mat(I.T, nb), V = to_mat(I.V, nb);
  const Mat h = T - (1.0 - a) * V;

  NrState st;
  st.a = a;
  st.Z = Z;
  st.M = M;

  SpinDensities sd;
  sd.P[0] = Mat::Zero(nb, nb);
  sd.P[1] = Mat::Zero(nb, nb);

  std::vector<double> residuals;
  double err = 1.0;
  int it = 0;
  Mat C[2];
  Vec eps[2];
  std::vector<std::array<Mat, 2>> fock_hist;
  std::vector<std::array<Mat, 2>> err_hist;
  for (it = 1; it <= opts.max_iter; ++it) {
    const Mat Ptot = sd.P[0] + sd.P[1];
    const Mat J = build_J(I, Ptot);
    err = 0.0;
    SpinDensities nd;
    std::array<Mat, 2> fock, comm;
    for (int s = 0; s < 2; ++s) {
      Mat F = h + (1.0 - a) * J - build_K(I, sd.P[s]);
      if (opts.level_shift > 0.0)
        F += opts.level_shift * (S - S * sd.P[s] * S);
      comm[s] = F * sd.P[s] * S - S * sd.P[s] * F;
      err = std::max(err, comm[s].cwiseAbs().maxCoeff());
      fock[s] = std::move(F);
    }
    if (opts.diis && it > 1 && err > 0.0) {
      fock_hist.push_back(fock);
      err_hist.push_back(comm);
      if (int(fock_hist.size()) > opts.diis_depth) {
        fock_hist.erase(fock_hist.begin());
        err_hist.erase(err_hist.begin());
      }
      const int m = int(fock_hist.size());
      if (m >= 2) {
        Mat B = Mat::Zero(m + 1, m + 1);
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j)
            B(i, j) = (err_hist[i][0].cwiseProduct(err_hist[j][0])).sum() +
                      (err_hist[i][1].cwiseProduct(err_hist[j][1])).sum();
        const double bscale = B.topLeftCorner(m, m).cwiseAbs().maxCoeff();
        if (bscale > 0.0) B.topLeftCorner(m, m) /= bscale;
        for (int i = 0; i < m; ++i) B(i, m) = B(m, i) = 1.0;
        Vec rhs = Vec::Zero(m + 1);
        rhs[m] = 1.0;
        Eigen::FullPivLU<Mat> lu(B);
        if (lu.isInvertible()) {
          Vec cvec = lu.solve(rhs);
          for (int s = 0; s < 2; ++s) {
            fock[s] = Mat::Zero(nb, nb);
            for (int i = 0; i < m; ++i) fock[s] += cvec[i] * fock_hist[i][s];
          }
        }
      }
    }
    for (int s = 0; s < 2; ++s) {
      Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(fock[s], S);
      C[s] = ges.eigenvectors();
      eps[s] = ges.eigenvalues();
      nd.P[s] = Mat::Zero(nb, nb);
    }
    // aufbau over the joint spin-orbital list, capacity 1 each
    struct Slot {
      double e;
      int spin, idx;
    };
    std::vector<Slot> slots;
    for (int s = 0; s < 2; ++s)
      for (std::size_t o = 0; o < nb; ++o) slots.push_back({eps[s][o], s, int(o)});
    std::stable_sort(slots.begin(), slots.end(), [](const Slot& x, const Slot& y) {
      if (x.e != y.e) return x.e < y.e;
      return x.spin < y.spin;
    });
    double left = M;
    st.orbitals[0].clear();
    st.orbitals[1].clear();
    st.occ[0].clear();
    st.occ[1].clear();
    st.eps[0].clear();
    st.eps[1].clear();
    for (const auto& sl : slots) {
      if (left <= 1e-14) break;
      const double f = std::min(1.0, left);
      left -= f;
      const Vec c = C[sl.spin].col(sl.idx);
      nd.P[sl.spin] += f * c * c.transpose();
      std::vector<double> cv(nb);
      for (std::size_t i = 0; i < nb; ++i) cv[i] = c[i];
      st.orbitals[sl.spin].push_back(std::move(cv));
      st.occ[sl.spin].push_back(f);
      st.eps[sl.spin].push_back(sl.e);
    }
    const double th = opts.diis ? 1.0 : opts.damping;
    for (int s = 0; s < 2; ++s) sd.P[s] = (1.0 - th) * sd.P[s] + th * nd.P[s];
    residuals.push_back(err);
    if (err < opts.tol && it > 2) break;
  }
  if (err >= opts.tol)
    throw DivergenceError("scf_minimize: SCF did not converge", residuals);

  // energy of the aufbau state itself (undamped densities)
  SpinDensities fin;
  for (int s = 0; s < 2; ++s) {
    fin.P[s] = Mat::Zero(nb, nb);
    for (std::size_t o = 0; o < st.orbitals[s].size(); ++o) {
      Vec c(nb);
      for (std::size_t i = 0; i < nb; ++i) c[i] = st.orbitals[s][o][i];
      fin.P[s] += st.occ[s][o] * c * c.transpose();
    }
  }
  st.energy = energy_from(I, h, fin, a);
  st.iterations = it;
  st.converged = true;
  return st;
}

double dilation_derivative(const NrState& state, const NrOptions& opts) {
  auto energy_at = [&](double lam) {
    BasisSpec bs = opts.basis;
    bs.a0 = opts.basis.a0 * lam * lam;
    // beta unchanged: exponents scale uniformly, phi -> lam^{3/2} phi(lam x)
    SBasis basis = SBasis::radial(bs);
    std::vector<Nucleus> nuclei;
    if (state.Z != 0.0) nuclei.push_back({{0, 0, 0}, state.Z});
    Integrals I = build_integrals(basis, nuclei);
    // with unit-normalized primitives the dilated orbital keeps the same
    // coefficients in the exponent-scaled basis
    return nr_energy(state, I);
  };
  const double dl = 1e-4;
  return (energy_at(1.0 + dl) - energy_at(1.0 - dl)) / (2.0 * dl);
}

BindingReport binding_test(double Z, int M, double a, const NrOptions& opts,
                           double cluster_R) {
  if (M < 1) throw std::invalid_argument("binding_test: M >= 1 required");
  BindingReport rep;

  auto stM = scf_minimize(Z, M, a, opts);
  rep.E_M = stM.energy;
  NrState stM1;
  if (M - 1 > 0) {
    stM1 = scf_minimize(Z, M - 1, a, opts);
    rep.E_M1 = stM1.energy;
  } else {
    stM1.a = a;
    stM1.Z = Z;
    rep.E_M1 = 0.0;
  }

  NrOptions pekar_opts = opts;
  if (a > 0.0) {
    pekar_opts.basis.a0 = 0.02 * a * a;
    auto st0 = scf_minimize(0.0, 1.0, a, pekar_opts);
    rep.E0_1 = st0.energy;

    // separated-cluster trial state: the E(M-1) minimizer at the origin plus
    // the Pekar orbital translated to 5R along z, opposite spin channel
    const Vec3 shift{0.0, 0.0, 5.0 * cluster_R};
    SBasis combined = SBasis::radial(opts.basis);
    const std::size_t nb1 = combined.size();
    SBasis pb = SBasis::radial(pekar_opts.basis);
    for (std::size_t i = 0; i < pb.size(); ++i) {
      combined.exps.push_back(pb.exps[i]);
      combined.centers.push_back(shift);
    }
    std::vector<Nucleus> nuclei;
    if (Z != 0.0) nuclei.push_back({{0, 0, 0}, Z});
    Integrals I = build_integrals(combined, nuclei);
    const std::size_t nb = combined.size();

    NrState trial;
    trial.a = a;
    trial.Z = Z;
    trial.M = M;
    int spin_counts[2] = {int(stM1.orbitals[0].size()), int(stM1.orbitals[1].size())};
    for (int s = 0; s < 2; ++s)
      for (std::size_t o = 0; o < stM1.orbitals[s].size(); ++o) {
        std::vector<double> c(nb, 0.0);
        for (std::size_t i = 0; i < nb1; ++i) c[i] = stM1.orbitals[s][o][i];
        trial.orbitals[s].push_back(std::move(c));
        trial.occ[s].push_back(stM1.occ[s][o]);
      }
    const int extra_spin = (spin_counts[1] < spin_counts[0]) ? 1 : 0;
    {
      auto st0 = scf_minimize(0.0, 1.0, a, pekar_opts);
      std::vector<double> c(nb, 0.0);
      const auto& src = st0.orbitals[0].empty() ? st0.orbitals[1][0] : st0.orbitals[0][0];
      for (std::size_t i = 0; i < pb.size(); ++i) c[nb1 + i] = src[i];
      trial.orbitals[extra_spin].push_back(std::move(c));
      trial.occ[extra_spin].push_back(1.0);
    }

    // Loewdin-orthonormalize the occupied set within each spin channel
    const Mat S = to_mat(I.S, nb);
    for (int s = 0; s < 2; ++s) {
      const std::size_t no = trial.orbitals[s].size();
      if (no < 2) {
        if (no == 1) {
          Vec c(nb);
          for (std::size_t i = 0; i < nb; ++i) c[i] = trial.orbitals[s][0][i];
          const double n = std::sqrt(c.dot(S * c));
          for (auto& x : trial.orbitals[s][0]) x /= n;
        }
        continue;
      }
      Mat C(nb, no);
      for (std::size_t o = 0; o < no; ++o)
        for (std::size_t i = 0; i < nb; ++i) C(i, o) = trial.orbitals[s][o][i];
      Mat O = C.transpose() * S * C;
      Eigen::SelfAdjointEigenSolver<Mat> es(O);
      Mat Oinvsqrt = es.eigenvectors() *
                     es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                     es.eigenvectors().transpose();
      Mat Cn = C * Oinvsqrt;
      for (std::size_t o = 0; o < no; ++o)
        for (std::size_t i = 0; i < nb; ++i) trial.orbitals[s][o][i] = Cn(i, o);
    }
    rep.trial_energy = nr_energy(trial, I);
    rep.trial_above_min = rep.trial_energy >= rep.E_M - 1e-9 * std::abs(rep.E_M);
  } else {
    rep.E0_1 = 0.0;
    rep.degenerate = (Z == 0.0);
    rep.trial_energy = rep.E_M1;
    rep.trial_above_min = true;
  }
  rep.gap = rep.E_M1 + rep.E0_1 - rep.E_M;
  return rep;
}

ConcavityReport concavity_probe(double Z, double a, const std::vector<double>& M_grid,
                                const NrOptions& opts) {
  ConcavityReport rep;
  rep.M_grid = M_grid;
  for (double m : M_grid) rep.energies.push_back(scf_minimize(Z, m, a, opts).energy);
  rep.max_second_difference = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < rep.energies.size(); ++i) {
    const double d2 = rep.energies[i - 1] - 2.0 * rep.energies[i] + rep.energies[i + 1];
    rep.max_second_difference = std::max(rep.max_second_difference, d2);
  }
  if (!std::isfinite(rep.max_second_difference)) rep.max_second_difference = 0.0;
  return rep;
}

std::vector<RadialProfilePoint> orbital_profiles(const NrState& state,
                                                 const NrOptions& opts, int nr,
                                                 double rmax) {
  const auto exps = opts.basis.exponents();
  std::vector<RadialProfilePoint> out;
  for (int j = 0; j < nr; ++j) {
    RadialProfilePoint pt;
    pt.r = rmax * double(j) / (nr - 1);
    for (int s = 0; s < 2; ++s)
      for (const auto& orb : state.orbitals[s]) {
        double v = 0.0;
        for (std::size_t i = 0; i < exps.size() && i < orb.size(); ++i)
          v += orb[i] * std::pow(2.0 * exps[i] / M_PI, 0.75) *
               std::exp(-exps[i] * pt.r * pt.r);
        pt.phi.push_back(v);
      }
    out.push_back(std::move(pt));
  }
  return out;
}

} // namespace bdf::nrhf
