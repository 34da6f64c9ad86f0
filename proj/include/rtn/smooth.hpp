#pragma once

#include <functional>
#include <optional>
#include <string>

#include "rtn/calculus.hpp"

// Constructive sup-norm approximation of smooth functions on boxes: local
// Taylor polynomials on an anisotropic grid, blended by a trapezoid partition
// of unity whose products are emulated with the multiplication gadget.

namespace rtn {

using MultiIndex = std::vector<int>;

struct SmoothTarget {
  Index dim = 1;
  Vec lo, hi;  // axis-aligned box
  std::function<double(const Vec&)> evaluator;
  int k = 2;                // smoothness order backing the rate
  double norm_bound = 1.0;  // declared W^{k,inf} bound on the box
  // Mixed partial oracle D^alpha f(x); absent entries fall back to finite
  // differences, which carry coefficients only up to second order.
  std::function<double(const Vec&, const MultiIndex&)> derivative_oracle;
  int oracle_order = 0;          // largest |alpha| the oracle supports
  double evaluator_noise = 1e-13;  // absolute noise floor of the evaluator
};

struct ApproxCertificate {
  double epsilon = 0.0;
  std::vector<long> grid_n;  // partition-of-unity resolution per axis
  int taylor_order = 0;      // degree of the local polynomials
  double taylor_budget = 0.0;
  double mul_budget = 0.0;       // epsilon share handed to product gadgets
  double remainder_bound = 0.0;  // certified Taylor + dropped-term remainder
  long nodes = 0;
  bool fast_path = false;  // exact affine/constant shortcut taken
  std::vector<std::string> warnings;
  SizeReport size;
};

std::pair<Network, ApproxCertificate> approx_smooth(const SmoothTarget& target,
                                                    double epsilon);

// Small library of one-dimensional analytic targets (exp, exp_neg) built by
// approx_smooth with exact derivative oracles.
Network approx_univariate_library(const std::string& name, double lo, double hi,
                                  double epsilon);

}  // namespace rtn
