#include "bdf/vacuum_polarization.hpp"

#include "bdf/clifford.hpp"
#include "bdf/errors.hpp"
#include "bdf/quadrature.hpp"
#include "bdf/radial.hpp"
#include "bdf/rng.hpp"

#include <algorithm>
#include <cmath>

namespace bdf::vpol {

namespace {

using clifford::DiracElement;

constexpr double kNorm = 1.0 / (4.0 * M_PI * M_PI);

// sigma 4-vectors at w +- (k/2) e and their difference divided by k.
// Delta/k stays finite and fully accurate down to k = 0, where it becomes the
// directional derivative (the Taylor form that removes the 0/0 at k -> 0).
struct SigmaDelta {
  std::array<double, 4> sp, sq; // sigma(w + h), sigma(w - h)
  std::array<double, 4> dk;     // (sigma(w+h) - sigma(w-h)) / k
  double denom;                 // E(|w+h|) + E(|w-h|)
};

SigmaDelta sigma_delta(const DressedDirac& d, const Vec3& w, const Vec3& e, double k) {
  const Vec3 h = (0.5 * k) * e;
  const Vec3 p = w + h, q = w - h;
  const double P = std::max(norm(p), 1e-300);
  const double Q = std::max(norm(q), 1e-300);
  const double s0p = d.sigma0(P), s1p = d.sigma1(P);
  const double s0q = d.sigma0(Q), s1q = d.sigma1(Q);

  SigmaDelta out;
  out.sp = {s0p, s1p * p[0] / P, s1p * p[1] / P, s1p * p[2] / P};
  out.sq = {s0q, s1q * q[0] / Q, s1q * q[1] / Q, s1q * q[2] / Q};
  out.denom = d.e_script(P) + d.e_script(Q);

  const double dP_over_k = 2.0 * dot(w, e) / (P + Q); // (P - Q)/k, exact
  const double dP = k * dP_over_k;
  double ds0k, ds1k;
  if (std::abs(dP) < 5e-6 * (P + Q)) {
    const double mid = 0.5 * (P + Q);
    ds0k = d.dsigma0(mid) * dP_over_k;
    ds1k = d.dsigma1(mid) * dP_over_k;
  } else {
    ds0k = (s0p - s0q) / k;
    ds1k = (s1p - s1q) / k;
  }
  // (p/P - q/Q)/k = (-w (P-Q)/k + (e/2)(P+Q)) / (P Q)
  const double invPQ = 1.0 / (P * Q);
  std::array<double, 3> domega;
  for (int j = 0; j < 3; ++j)
    domega[j] = (-w[j] * dP_over_k + 0.5 * e[j] * (P + Q)) * invPQ;

  out.dk[0] = ds0k;
  for (int j = 0; j < 3; ++j)
    out.dk[j + 1] = ds1k * p[j] / P + s1q * domega[j];
  return out;
}

double dot4(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

// wedge of two R^4 vectors, components (01,02,03,12,13,23)
std::array<double, 6> wedge4(const std::array<double, 4>& a,
                             const std::array<double, 4>& b) {
  return {a[0] * b[1] - a[1] * b[0], a[0] * b[2] - a[2] * b[0],
          a[0] * b[3] - a[3] * b[0], a[1] * b[2] - a[2] * b[1],
          a[1] * b[3] - a[3] * b[1], a[2] * b[3] - a[3] * b[2]};
}

double dot6(const std::array<double, 6>& a, const std::array<double, 6>& b) {
  double s = 0.0;
  for (int i = 0; i < 6; ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> lens_breaks(double lo_scale, double hi, int per_decade) {
  std::vector<double> br{0.0};
  if (hi <= 0.0) return br;
  const double a = std::min(1e-3 * std::min(1.0, hi), 0.5 * hi) * std::max(lo_scale, 1.0);
  auto geo = quad::log_breaks(std::min(a, 0.5 * hi), hi, per_decade);
  br.insert(br.end(), geo.begin(), geo.end());
  return br;
}

// single pass of the 2-d lens integral behind B(k)
double b_integral_pass(double k, const DressedDirac& d, int gl, int per_decade) {
  const double lambda = d.lambda();
  const double z0 = lambda - 0.5 * k;
  if (z0 <= 0.0) return 0.0;
  const Vec3 e{0.0, 0.0, 1.0};

  auto zr = quad::composite(gl, lens_breaks(1.0, z0, per_decade));
  double total = 0.0;
  for (std::size_t iz = 0; iz < zr.size(); ++iz) {
    const double z = zr.x[iz];
    const double rmax2 = lambda * lambda - (z + 0.5 * k) * (z + 0.5 * k);
    if (rmax2 <= 0.0) continue;
    const double rmax = std::sqrt(rmax2);
    auto rr = quad::composite(gl, lens_breaks(1.0, rmax, per_decade));
    double zsum = 0.0;
    for (std::size_t ir = 0; ir < rr.size(); ++ir) {
      const double r = rr.x[ir];
      const Vec3 w{r, 0.0, z};
      SigmaDelta sd = sigma_delta(d, w, e, k);
      const double t_over_k2 = 2.0 * dot4(sd.dk, sd.dk); // Tr(1 - s s)/k^2
      zsum += rr.w[ir] * r * t_over_k2 / sd.denom;
    }
    total += zr.w[iz] * zsum;
  }
  // int du = 2 pi * (2 * int_{z>0}) in the folded coordinates
  return kNorm * 4.0 * M_PI * total;
}

// exit length of the ray w + rho n from the lens {|m +- h| <= Lambda}
double ray_exit(const Vec3& w, const Vec3& n, const Vec3& h, double lambda) {
  double rho = std::numeric_limits<double>::max();
  for (int s = -1; s <= 1; s += 2) {
    const Vec3 c = w + double(s) * h;
    const double beta = dot(c, n);
    const double gap = lambda * lambda - dot(c, c);
    const double disc = beta * beta + std::max(gap, 0.0);
    rho = std::min(rho, -beta + std::sqrt(std::max(disc, 0.0)));
  }
  return std::max(rho, 0.0);
}

// ray panels refined toward the closest approach to the origin
std::vector<double> ray_breaks(const Vec3& w, const Vec3& n, double rho_max) {
  std::vector<double> br{0.0, rho_max};
  const double tstar = -dot(w, n);
  auto ladder = [&](double from, double toward) {
    const double len = std::abs(toward - from);
    if (len <= 0.0) return;
    double step = 0.02 * (1.0 + std::sqrt(std::abs(dot(w, w) - tstar * tstar)));
    step = std::min(step, 0.45 * len);
    double x = step;
    while (x < len) {
      br.push_back(toward + (from > toward ? x : -x));
      x *= 3.0;
    }
  };
  if (tstar > 0.0 && tstar < rho_max) {
    br.push_back(tstar);
    ladder(0.0, tstar);
    ladder(rho_max, tstar);
  } else {
    // still refine near rho = 0 where the sigma factors of w vary
    double x = 0.02 * (1.0 + norm(w));
    while (x < rho_max) {
      br.push_back(x);
      x *= 3.0;
    }
  }
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  return br;
}

// deterministic J = 1 term at momentum k (e = z axis)
double f1_deterministic(double k, const DressedDirac& d, const VpolOptions& o) {
  const double lambda = d.lambda();
  const double z0 = lambda - 0.5 * k;
  if (z0 <= 0.0) return 0.0;
  const Vec3 e{0.0, 0.0, 1.0};
  const Vec3 h = (0.5 * k) * e;

  auto zr = quad::composite(o.u_gl, lens_breaks(1.0, z0, o.u_per_decade));
  const auto& cosr = quad::gauss_legendre(o.ell_cos_gl);
  auto phir = quad::gauss_legendre(o.ell_phi_gl, 0.0, M_PI);

  double total = 0.0;
  for (std::size_t iz = 0; iz < zr.size(); ++iz) {
    const double z = zr.x[iz];
    const double rmax2 = lambda * lambda - (z + 0.5 * k) * (z + 0.5 * k);
    if (rmax2 <= 0.0) continue;
    auto rr = quad::composite(o.u_gl, lens_breaks(1.0, std::sqrt(rmax2), o.u_per_decade));
    for (std::size_t ir = 0; ir < rr.size(); ++ir) {
      const double r = rr.x[ir];
      const Vec3 u{r, 0.0, z};
      SigmaDelta su = sigma_delta(d, u, e, k);
      const double xu = 0.5 * dot4(su.dk, su.dk);
      const auto wu = wedge4(su.sp, su.dk);

      double inner = 0.0;
      for (std::size_t ic = 0; ic < cosr.size(); ++ic) {
        const double ct = cosr.x[ic], st = std::sqrt(1.0 - ct * ct);
        for (std::size_t ip = 0; ip < phir.size(); ++ip) {
          const Vec3 n{st * std::cos(phir.x[ip]), st * std::sin(phir.x[ip]), ct};
          const double rho_max = ray_exit(u, n, h, lambda);
          if (rho_max <= 0.0) continue;
          auto rhor = quad::composite(o.ell_ray_gl, ray_breaks(u, n, rho_max));
          double ray = 0.0;
          for (std::size_t iq = 0; iq < rhor.size(); ++iq) {
            const Vec3 m = u + rhor.x[iq] * n;
            SigmaDelta sm = sigma_delta(d, m, e, k);
            const double xm = 0.5 * dot4(sm.dk, sm.dk);
            const auto wm = wedge4(sm.sp, sm.dk);
            const double g_over_k2 =
                4.0 * (k * k * xu * xm + dot6(wu, wm));
            ray += rhor.w[iq] * g_over_k2 / sm.denom;
          }
          // phi folded over [0, pi] x 2
          inner += cosr.w[ic] * phir.w[ip] * 2.0 * ray;
        }
      }
      total += zr.w[iz] * rr.w[ir] * r * inner / su.denom;
    }
  }
  // u measure: 2 pi (azimuth) * 2 (z fold)
  return kNorm * kNorm * 4.0 * M_PI * total;
}

DiracElement mat4(const std::array<double, 4>& v) {
  const auto& b = clifford::make_dirac_basis();
  auto out = b.beta * clifford::cxd(v[0]) + b.alpha1 * clifford::cxd(v[1]) +
             b.alpha2 * clifford::cxd(v[2]) + b.alpha3 * clifford::cxd(v[3]);
  out.grading = clifford::Grading::Odd;
  return out;
}

// inverse-CDF sampler for |u| with density ~ U^2/E(U)^3 on [0, umax]
struct RadialSampler {
  std::vector<double> u, cdf;
  explicit RadialSampler(double umax) {
    const int n = 2048;
    u.resize(n);
    cdf.resize(n);
    double acc = 0.0, prev = 0.0, uprev = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = umax * double(i) / (n - 1);
      const double pdf = x * x / std::pow(1.0 + x * x, 1.5);
      if (i > 0) acc += 0.5 * (pdf + prev) * (x - uprev);
      u[i] = x;
      cdf[i] = acc;
      prev = pdf;
      uprev = x;
    }
    norm_ = acc;
    for (auto& c : cdf) c /= norm_;
  }
  double norm_ = 1.0;
  double pdf(double x) const { return x * x / std::pow(1.0 + x * x, 1.5) / norm_; }
  double sample(double xi) const {
    auto it = std::lower_bound(cdf.begin(), cdf.end(), xi);
    std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - cdf.begin(), 1),
                                          cdf.size() - 1);
    const double c0 = cdf[i - 1], c1 = cdf[i];
    const double t = (c1 > c0) ? (xi - c0) / (c1 - c0) : 0.0;
    return u[i - 1] + t * (u[i] - u[i - 1]);
  }
};

McEstimate f_term_mc_impl(int J, double k, const DressedDirac& d, const VpolOptions& o) {
  const double lambda = d.lambda();
  const Vec3 e{0.0, 0.0, 1.0};
  const Vec3 h = (0.5 * k) * e;
  RadialSampler rs(lambda + 0.5 * k);

  const double pref = -std::pow(kNorm, J + 1);
  double sum = 0.0, sum2 = 0.0;
  const std::uint64_t N = o.mc_samples;
  for (std::uint64_t s = 0; s < N; ++s) {
    rng::Counter rc{o.seed, s, 0};
    const double U = rs.sample(rc.next_double());
    const double ct = 2.0 * rc.next_double() - 1.0;
    const double ph = 2.0 * M_PI * rc.next_double();
    const double st = std::sqrt(1.0 - ct * ct);
    const Vec3 u{U * st * std::cos(ph), U * st * std::sin(ph), U * ct};

    double val = 0.0;
    if (norm(u + h) <= lambda && norm(u - h) <= lambda) {
      double weight = 1.0 / std::max(rs.pdf(U) / (4.0 * M_PI * U * U), 1e-300);
      SigmaDelta su = sigma_delta(d, u, e, k);
      DiracElement left = mat4(su.sq) * mat4(su.dk) * clifford::cxd(-1.0);
      double denom = su.denom;
      Vec3 m = u;
      DiracElement chainseed;
      std::vector<std::array<DiracElement, 2>> sandwich;
      bool ok = true;
      for (int j = 1; j <= J; ++j) {
        const double c2 = 2.0 * rc.next_double() - 1.0;
        const double p2 = 2.0 * M_PI * rc.next_double();
        const double s2 = std::sqrt(1.0 - c2 * c2);
        const Vec3 n{s2 * std::cos(p2), s2 * std::sin(p2), c2};
        const double rho_max = ray_exit(m, n, h, lambda);
        if (rho_max <= 0.0) {
          ok = false;
          break;
        }
        const double rho = rho_max * rc.next_double();
        weight *= 4.0 * M_PI * rho_max;
        m = m + rho * n;
        SigmaDelta sm = sigma_delta(d, m, e, k);
        denom *= sm.denom;
        if (j < J) {
          sandwich.push_back({mat4(sm.sp), mat4(sm.sq)});
        } else {
          chainseed = mat4(sm.sp) * mat4(sm.dk) * clifford::cxd(-1.0);
        }
      }
      if (ok) {
        DiracElement c = chainseed;
        for (auto it = sandwich.rbegin(); it != sandwich.rend(); ++it)
          c = c - (*it)[0] * c * (*it)[1];
        const double t_over_k2 = (left * c).trace().real();
        val = pref * weight * t_over_k2 / denom;
      }
    }
    sum += val;
    sum2 += val * val;
  }
  McEstimate est;
  est.value = sum / double(N);
  const double var = std::max(sum2 / double(N) - est.value * est.value, 0.0);
  est.stderr_ = std::sqrt(var / double(N));
  return est;
}

} // namespace

double compute_B(double k, const DressedDirac& d, const VpolOptions& opts) {
  if (k < 0.0 || k > 2.0 * d.lambda() * (1.0 + 1e-12))
    throw CutoffViolation("compute_B: k outside [0, 2 Lambda]");
  if (k >= 2.0 * d.lambda()) return 0.0;
  const double coarse = b_integral_pass(k, d, opts.gl, opts.per_decade);
  const double fine = b_integral_pass(k, d, opts.gl + 2, opts.per_decade + 2);
  const double err = std::abs(fine - coarse);
  if (err > opts.tol * (std::abs(fine) + 1e-8))
    throw QuadratureError("compute_B: quadrature failed to reach tolerance",
                          err / (std::abs(fine) + 1e-300));
  return fine;
}

McEstimate compute_B_mc(double k, const Vec3& e, const DressedDirac& d,
                        std::uint64_t samples, std::uint64_t seed) {
  const double lambda = d.lambda();
  const Vec3 h = (0.5 * k) * e;
  const double R = lambda + 0.5 * k;
  const double vol = 4.0 / 3.0 * M_PI * R * R * R;
  double sum = 0.0, sum2 = 0.0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    rng::Counter rc{seed, s, 0};
    // uniform point in the bounding ball
    const double U = R * std::cbrt(rc.next_double());
    const double ct = 2.0 * rc.next_double() - 1.0;
    const double ph = 2.0 * M_PI * rc.next_double();
    const double st = std::sqrt(1.0 - ct * ct);
    const Vec3 u{U * st * std::cos(ph), U * st * std::sin(ph), U * ct};
    double val = 0.0;
    const Vec3 p = u + h, q = u - h;
    if (norm(p) <= lambda && norm(q) <= lambda) {
      auto sp = d.sign_matrix(p);
      auto sq = d.sign_matrix(q);
      const double tr = 4.0 - (sq * sp).trace().real();
      val = vol * kNorm / (k * k) * tr / (d.e_script(norm(p)) + d.e_script(norm(q)));
    }
    sum += val;
    sum2 += val * val;
  }
  McEstimate est;
  est.value = sum / double(samples);
  const double var = std::max(sum2 / double(samples) - est.value * est.value, 0.0);
  est.stderr_ = std::sqrt(var / double(samples));
  return est;
}

McEstimate compute_f_term(int J, double k, const DressedDirac& d,
                          const VpolOptions& opts) {
  if (J < 1 || J > 3)
    throw UnsupportedOrder("compute_f_term: only orders 1..3 are supported");
  if (k >= 2.0 * d.lambda()) return {0.0, 0.0};
  if (J == 1) return {f1_deterministic(k, d, opts), 0.0};
  return f_term_mc_impl(J, k, d, opts);
}

McEstimate compute_f_term_mc(int J, double k, const DressedDirac& d,
                             const VpolOptions& opts) {
  if (J < 1 || J > 3)
    throw UnsupportedOrder("compute_f_term_mc: only orders 1..3 are supported");
  if (k >= 2.0 * d.lambda()) return {0.0, 0.0};
  return f_term_mc_impl(J, k, d, opts);
}

double compute_f_term2_nested(double k, const DressedDirac& d,
                              const VpolOptions& o) {
  const double lambda = d.lambda();
  const double z0 = lambda - 0.5 * k;
  if (z0 <= 0.0) return 0.0;
  const Vec3 e{0.0, 0.0, 1.0};
  const Vec3 h = (0.5 * k) * e;

  auto zr = quad::composite(o.u_gl, lens_breaks(1.0, z0, o.u_per_decade));
  const auto& cosr = quad::gauss_legendre(o.ell_cos_gl);
  auto phir = quad::gauss_legendre(o.ell_phi_gl, 0.0, 2.0 * M_PI);

  // direction x ray sampler relative to a base point
  auto over_rays = [&](const Vec3& base, auto&& fn) {
    for (std::size_t ic = 0; ic < cosr.size(); ++ic) {
      const double ct = cosr.x[ic], st = std::sqrt(1.0 - ct * ct);
      for (std::size_t ip = 0; ip < phir.size(); ++ip) {
        const Vec3 n{st * std::cos(phir.x[ip]), st * std::sin(phir.x[ip]), ct};
        const double rho_max = ray_exit(base, n, h, lambda);
        if (rho_max <= 0.0) continue;
        auto rr = quad::composite(o.ell_ray_gl, ray_breaks(base, n, rho_max));
        for (std::size_t iq = 0; iq < rr.size(); ++iq)
          fn(base + rr.x[iq] * n, cosr.w[ic] * phir.w[ip] * rr.w[iq]);
      }
    }
  };

  double total = 0.0;
  for (std::size_t iz = 0; iz < zr.size(); ++iz) {
    const double z = zr.x[iz];
    const double rmax2 = lambda * lambda - (z + 0.5 * k) * (z + 0.5 * k);
    if (rmax2 <= 0.0) continue;
    auto rr = quad::composite(o.u_gl, lens_breaks(1.0, std::sqrt(rmax2), o.u_per_decade));
    for (std::size_t ir = 0; ir < rr.size(); ++ir) {
      const Vec3 u{rr.x[ir], 0.0, z};
      SigmaDelta su = sigma_delta(d, u, e, k);
      const DiracElement left = mat4(su.sq) * mat4(su.dk) * clifford::cxd(-1.0);
      double acc_u = 0.0;
      over_rays(u, [&](const Vec3& m1, double w1) {
        SigmaDelta s1 = sigma_delta(d, m1, e, k);
        const DiracElement sp1 = mat4(s1.sp), sq1 = mat4(s1.sq);
        double acc_m1 = 0.0;
        over_rays(m1, [&](const Vec3& m2, double w2) {
          SigmaDelta s2 = sigma_delta(d, m2, e, k);
          const DiracElement seed = mat4(s2.sp) * mat4(s2.dk) * clifford::cxd(-1.0);
          const DiracElement chain = seed - sp1 * seed * sq1;
          acc_m1 += w2 * (left * chain).trace().real() / s2.denom;
        });
        acc_u += w1 * acc_m1 / s1.denom;
      });
      total += zr.w[iz] * rr.w[ir] * rr.x[ir] * acc_u / su.denom;
    }
  }
  // u measure 2 pi x 2 (z fold); sign: b_J = -(kNorm)^(J+1) integral
  return -std::pow(kNorm, 3) * 4.0 * M_PI * total;
}

namespace {

double interp_asinh(const std::vector<double>& kg, const std::vector<double>& v,
                    double k) {
  if (k <= kg.front()) return v.front();
  if (k >= kg.back()) return v.back();
  auto it = std::upper_bound(kg.begin(), kg.end(), k);
  const std::size_t i = std::size_t(it - kg.begin()) - 1;
  const double t0 = std::asinh(kg[i]), t1 = std::asinh(kg[i + 1]);
  const double t = (std::asinh(k) - t0) / (t1 - t0);
  return v[i] + t * (v[i + 1] - v[i]);
}

} // namespace

double RenormFunctions::f_at(double k) const {
  k = std::abs(k);
  if (k >= 2.0 * lambda) return 0.0;
  return interp_asinh(kgrid, f, k);
}

double RenormFunctions::F_at(double k) const {
  k = std::abs(k);
  if (k >= 2.0 * lambda) return 0.0;
  return interp_asinh(kgrid, F, k);
}

double RenormFunctions::B_at(double k) const {
  k = std::abs(k);
  if (k >= 2.0 * lambda) return 0.0;
  return interp_asinh(kgrid, B, k);
}

RenormFunctions assemble(const DressedDirac& d, const PhysicalParams& params,
                         const VpolOptions& opts) {
  if (opts.jmax < 0 || opts.jmax > 3)
    throw UnsupportedOrder("assemble: jmax must be in 0..3");
  RenormFunctions rf;
  rf.lambda = d.lambda();
  rf.alpha = params.alpha;
  rf.L = params.alpha * std::log(params.lambda);

  const double kmax = 2.0 * rf.lambda;
  rf.kgrid.push_back(0.0);
  for (double k : quad::log_breaks(opts.k_min, kmax, opts.k_per_decade))
    rf.kgrid.push_back(k);

  const std::size_t n = rf.kgrid.size();
  rf.B.resize(n);
  for (std::size_t i = 0; i < n; ++i) rf.B[i] = compute_B(rf.kgrid[i], d, opts);

  rf.terms.assign(std::size_t(opts.jmax) + 1, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) rf.terms[0][i] = params.alpha * rf.B[i];

  for (int J = 1; J <= opts.jmax; ++J) {
    // the alpha^(J+1) corrections are smooth in asinh(k): evaluate them on a
    // coarse subgrid and interpolate onto the main grid
    std::vector<double> ks{0.0}, bs;
    const int nc = std::max(opts.f_coarse_nodes - 1, 2);
    for (int i = 0; i < nc; ++i)
      ks.push_back(0.2 * std::pow(kmax / 0.2, double(i) / (nc - 1)));
    ks.back() = kmax;
    for (double kk : ks) bs.push_back(compute_f_term(J, kk, d, opts).value);
    const double w = std::pow(params.alpha, J + 1);
    for (std::size_t i = 0; i < n; ++i)
      rf.terms[J][i] = w * interp_asinh(ks, bs, rf.kgrid[i]);
  }

  rf.f.assign(n, 0.0);
  rf.F.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& t : rf.terms) rf.f[i] += t[i];
    rf.F[i] = rf.f[i] / (1.0 + rf.f[i]);
  }
  rf.z3 = 1.0 / (1.0 + rf.f.front());
  rf.z3_alt = 1.0 / (1.0 + params.alpha * rf.f.front());

  auto tr = inverse_radial_transform(rf.kgrid, rf.F);
  rf.checkF_L1 = tr.l1_norm;
  return rf;
}

RadialTransform inverse_radial_transform(const std::vector<double>& kgrid,
                                         const std::vector<double>& Fk,
                                         double r_max, int nr) {
  RadialTransform out;
  const std::size_t n = kgrid.size();
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = kgrid[i] * Fk[i];

  out.r.resize(nr);
  out.value.resize(nr);
  const double r0 = 1e-3;
  for (int j = 0; j < nr; ++j)
    out.r[j] = r0 * std::pow(r_max / r0, double(j) / (nr - 1));

  for (int j = 0; j < nr; ++j) {
    const double r = out.r[j];
    double I = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double k1 = kgrid[i], k2 = kgrid[i + 1], hh = k2 - k1;
      if (hh <= 0.0) continue;
      const double a = g[i], b = (g[i + 1] - g[i]) / hh;
      // int_{k1}^{k2} (a + b (k-k1)) sin(k r) dk, exact
      const double c1 = std::cos(k1 * r), c2 = std::cos(k2 * r);
      const double s1 = std::sin(k1 * r), s2 = std::sin(k2 * r);
      I += a * (c1 - c2) / r + b * ((s2 - s1) / (r * r) - hh * c2 / r);
    }
    out.value[j] = std::sqrt(2.0 / M_PI) * I / r;
  }

  double l1 = 0.0;
  for (int j = 0; j + 1 < nr; ++j) {
    const double f1 = 4.0 * M_PI * out.r[j] * out.r[j] * std::abs(out.value[j]);
    const double f2 = 4.0 * M_PI * out.r[j + 1] * out.r[j + 1] * std::abs(out.value[j + 1]);
    l1 += 0.5 * (f1 + f2) * (out.r[j + 1] - out.r[j]);
  }
  l1 += 4.0 / 3.0 * M_PI * r0 * r0 * r0 * std::abs(out.value.front());
  out.l1_norm = l1;
  return out;
}

} // namespace bdf::vpol
