#pragma once

#include <cmath>
#include <string>

namespace bdf {

// External charge density profile, radial. "none" means Z = 0.
struct NuSpec {
  enum class Kind { None, Gaussian } kind = Kind::None;
  double width = 1.0;
  double charge = 0.0;

  static NuSpec none() { return {}; }
  static NuSpec gaussian(double charge, double width) {
    NuSpec s;
    s.kind = Kind::Gaussian;
    s.width = width;
    s.charge = charge;
    return s;
  }
};

struct PhysicalParams {
  double alpha = 0.02; // coupling
  double lambda = 1e3; // UV cutoff, > 1
  int M = 0;           // electron count
  NuSpec nu = NuSpec::none();

  double L() const { return alpha * std::log(lambda); }
  double Z() const { return nu.charge; }

  bool small_alpha() const { return alpha <= 0.1; }
  bool small_L() const { return L() <= 0.3; }
  bool in_regime() const { return small_alpha() && small_L(); }
};

} // namespace bdf
