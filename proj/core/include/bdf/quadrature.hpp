#pragma once

#include <cstddef>
#include <vector>

namespace bdf::quad {

struct Rule {
  std::vector<double> x; // nodes
  std::vector<double> w; // weights
  std::size_t size() const { return x.size(); }
};

// Gauss-Legendre rule on [-1, 1].
const Rule& gauss_legendre(int n);

// Gauss-Legendre rule mapped to [a, b].
Rule gauss_legendre(int n, double a, double b);

// Composite rule over consecutive panels given by breakpoints.
Rule composite(int n_per_panel, const std::vector<double>& breaks);

// Geometric breakpoints: {0, a, a*r, ..., b} with |per-decade| panels per
// decade between a and b. Used for integrands that vary over decades.
std::vector<double> log_breaks(double a, double b, int per_decade);

// Nodes and weights for int_{-inf}^{inf} f(eta) d(eta) via eta = tan(theta).
// Weights already contain the sec^2 Jacobian.
Rule tan_contour(int n);

// int_a^b (q - p)^m * ln|q - p| dq, exact. Needs a,b on one side of p or
// p inside [a, b]; the integrand is integrable either way.
double powlog_moment(int m, double a, double b, double p);

template <class F>
double integrate(const Rule& r, F&& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(r.x[i]);
  return s;
}

} // namespace bdf::quad
