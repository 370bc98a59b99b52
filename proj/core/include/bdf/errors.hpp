#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bdf {

// Base class for all numerical failures, so the CLI can map them to exit code 2.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Momentum outside the cutoff ball B(0, Lambda).
class CutoffViolation : public NumericalError {
public:
  using NumericalError::NumericalError;
};

// Fixed-point iteration failed to reach tolerance; carries the residual history.
class DivergenceError : public NumericalError {
public:
  DivergenceError(const std::string& what, std::vector<double> residuals)
      : NumericalError(what), residual_history(std::move(residuals)) {}
  std::vector<double> residual_history;
};

class ResolutionError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class QuadratureError : public NumericalError {
public:
  QuadratureError(const std::string& what, double achieved)
      : NumericalError(what), achieved_error(achieved) {}
  double achieved_error;
};

class UnsupportedOrder : public NumericalError {
public:
  using NumericalError::NumericalError;
};

// Rank cap exceeded while compressing an operator kernel.
class CompressionLoss : public NumericalError {
public:
  CompressionLoss(const std::string& what, double discarded)
      : NumericalError(what), discarded_weight(discarded) {}
  double discarded_weight;
};

class NonContractionError : public NumericalError {
public:
  NonContractionError(const std::string& what, std::vector<double> ratios)
      : NumericalError(what), ratio_history(std::move(ratios)) {}
  std::vector<double> ratio_history;
};

// Mixed-grade Dirac element where a pure grade is required.
class GradingError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class BasisError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

} // namespace bdf
