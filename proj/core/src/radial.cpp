#include "bdf/radial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bdf {

RadialGrid RadialGrid::geometric(double lambda, std::size_t n, double r_min) {
  if (n < 2) throw std::invalid_argument("RadialGrid: need at least 2 nodes");
  if (!(lambda > r_min)) throw std::invalid_argument("RadialGrid: lambda <= r_min");
  RadialGrid g;
  g.nodes.resize(n);
  g.nodes[0] = 0.0;
  const double ratio = std::pow(lambda / r_min, 1.0 / double(n - 2));
  double r = r_min;
  for (std::size_t i = 1; i < n; ++i) {
    g.nodes[i] = r;
    r *= ratio;
  }
  g.nodes[n - 1] = lambda; // kill accumulated rounding
  return g;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 3 || y_.size() != n) throw std::invalid_argument("CubicSpline: bad sizes");
  m_.assign(n, 0.0);
  std::vector<double> diag(n, 0.0), rhs(n, 0.0), sub(n, 0.0), sup(n, 0.0);
  diag[0] = diag[n - 1] = 1.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    sub[i] = h0 / 6.0;
    diag[i] = (h0 + h1) / 3.0;
    sup[i] = h1 / 6.0;
    rhs[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
  }
  // Thomas algorithm
  for (std::size_t i = 1; i < n; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  m_[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;)
    m_[i] = (rhs[i] - sup[i] * m_[i + 1]) / diag[i];
}

std::size_t CubicSpline::locate(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = (it == x_.begin()) ? 0 : std::size_t(it - x_.begin()) - 1;
  if (i + 1 >= x_.size()) i = x_.size() - 2;
  return i;
}

double CubicSpline::operator()(double x) const {
  const std::size_t i = locate(x);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - x) / h, b = (x - x_[i]) / h;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const {
  const std::size_t i = locate(x);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - x) / h, b = (x - x_[i]) / h;
  return (y_[i + 1] - y_[i]) / h +
         ((3.0 * b * b - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]) * h / 6.0;
}

double CubicSpline::second_derivative(double x) const {
  const std::size_t i = locate(x);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - x) / h, b = (x - x_[i]) / h;
  return a * m_[i] + b * m_[i + 1];
}

CubicSpline::Piece CubicSpline::piece(std::size_t i) const {
  const double h = x_[i + 1] - x_[i];
  Piece p;
  p.x0 = x_[i];
  p.a = y_[i];
  p.b = (y_[i + 1] - y_[i]) / h - h * (2.0 * m_[i] + m_[i + 1]) / 6.0;
  p.c = m_[i] / 2.0;
  p.d = (m_[i + 1] - m_[i]) / (6.0 * h);
  return p;
}

} // namespace bdf
