#pragma once

#include <cstddef>
#include <vector>

namespace bdf {

// Radial momentum grid on [0, Lambda]: node 0, then geometric spacing from
// r_min up to Lambda. Dense near 0 where the dressed functions bend.
struct RadialGrid {
  std::vector<double> nodes;

  static RadialGrid geometric(double lambda, std::size_t n, double r_min = 1e-4);

  double front() const { return nodes.front(); }
  double back() const { return nodes.back(); }
  std::size_t size() const { return nodes.size(); }
  double operator[](std::size_t i) const { return nodes[i]; }
};

// Natural cubic spline on an arbitrary monotone grid.
class CubicSpline {
public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;

  // Polynomial pieces: f(x) = a + b dx + c dx^2 + d dx^3 on [x_i, x_{i+1}],
  // dx = x - x_i. Exposed so kernel integrals can be done analytically.
  struct Piece {
    double x0, a, b, c, d;
  };
  Piece piece(std::size_t i) const;
  std::size_t n_pieces() const { return x_.size() - 1; }
  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& values() const { return y_; }

private:
  std::size_t locate(double x) const;
  std::vector<double> x_, y_, m_; // m_ = second derivatives at knots
};

} // namespace bdf
