#include "bdf/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace bdf::quad {

namespace {

Rule compute_gl(int n) {
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  // Newton iteration on P_n, standard symmetric construction.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return r;
}

} // namespace

const Rule& gauss_legendre(int n) {
  static std::map<int, Rule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lk(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gl(n)).first;
  return it->second;
}

Rule gauss_legendre(int n, double a, double b) {
  const Rule& base = gauss_legendre(n);
  Rule r;
  r.x.resize(base.size());
  r.w.resize(base.size());
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (std::size_t i = 0; i < base.size(); ++i) {
    r.x[i] = mid + half * base.x[i];
    r.w[i] = half * base.w[i];
  }
  return r;
}

Rule composite(int n_per_panel, const std::vector<double>& breaks) {
  Rule r;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    Rule p = gauss_legendre(n_per_panel, breaks[k], breaks[k + 1]);
    r.x.insert(r.x.end(), p.x.begin(), p.x.end());
    r.w.insert(r.w.end(), p.w.begin(), p.w.end());
  }
  return r;
}

std::vector<double> log_breaks(double a, double b, int per_decade) {
  if (!(a > 0.0) || !(b > a)) throw std::invalid_argument("log_breaks: need 0 < a < b");
  std::vector<double> br;
  br.push_back(a);
  const double step = std::pow(10.0, 1.0 / per_decade);
  double x = a;
  while (x * step < b) {
    x *= step;
    br.push_back(x);
  }
  br.push_back(b);
  return br;
}

Rule tan_contour(int n) {
  const Rule& base = gauss_legendre(n);
  Rule r;
  r.x.resize(base.size());
  r.w.resize(base.size());
  const double half = M_PI / 2.0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    double theta = half * base.x[i];
    double c = std::cos(theta);
    r.x[i] = std::tan(theta);
    r.w[i] = half * base.w[i] / (c * c);
  }
  return r;
}

double powlog_moment(int m, double a, double b, double p) {
  // primitive of u^m ln|u| is u^{m+1}/(m+1) (ln|u| - 1/(m+1)); u = q - p.
  auto prim = [m](double u) {
    if (u == 0.0) return 0.0;
    double um1 = std::pow(u, m + 1);
    return um1 / (m + 1.0) * (std::log(std::abs(u)) - 1.0 / (m + 1.0));
  };
  return prim(b - p) - prim(a - p);
}

} // namespace bdf::quad
