#pragma once

#include <functional>
#include <map>
#include <optional>

#include "rtn/network.hpp"
#include "rtn/ode.hpp"

// Characteristic flow of a parametric transport field: numeric access to
// X(s,t,x,eta), the Jacobian factor J along the flow, analytic reference
// solutions for all equation variants, and the Gronwall-type bound
// calculator used by the builders.

namespace rtn {

enum class U0Kind { ramp, piecewise_affine, smooth };

struct InitialCondition {
  U0Kind kind = U0Kind::ramp;
  std::function<double(const Vec&)> eval;
  std::optional<Network> exact_net;  // present for ramp / piecewise affine
  double r = 0.0;                    // approximability exponent
  int s = 0;                         // smoothness order, smooth kind only
  double norm_bound = 0.0;           // W^{s,inf} bound, smooth kind only
  double sup_norm = 0.0;             // sup |u0| over the reachable ball
  std::optional<double> lip;
  std::optional<std::function<double(const Vec&, const std::vector<int>&)>>
      derivative;  // mixed partial by multi-index, smooth kind only
};

// Tent max(0, 1 - |x|_1) with the exact three-layer net (W = 4n + 2).
InitialCondition ramp_u0(Index n);
// One-dimensional piecewise affine interpolant of points (xi, yi), constant
// outside the outer breakpoints; exact net included.
InitialCondition piecewise_affine_u0(const std::vector<double>& xs,
                                     const std::vector<double>& ys);
InitialCondition smooth_u0(std::function<double(const Vec&)> eval, Index n, int s,
                           double norm_bound, double sup_norm, double lip);

using FieldFn = std::function<Vec(double t, const Vec& x, const Vec& eta)>;
using ScalarFieldFn = std::function<double(double t, const Vec& x, const Vec& eta)>;

struct VectorFieldProblem {
  Index n = 1;  // spatial dimension
  Index D = 1;  // parameter dimension
  double T = 1.0;
  FieldFn V;
  ScalarFieldFn div_V;  // may be empty
  ScalarFieldFn f;      // source, may be empty
  ScalarFieldFn a;      // damping, may be empty
  InitialCondition u0;
  double growth_C = 1.0;             // constant of the sublinear growth bound
  std::map<int, double> ck_norms;    // j -> declared ||V||_{C^j}
  int k = 1;                         // declared smoothness order of V
  Vec K_lo, K_hi;                    // spatial working box
  double K_radius = 0.0;             // sup |x| over K
  std::optional<double> lip_f, lip_a;
  std::optional<double> sup_f, sup_a;  // sup norms over the working domain
  std::string name;
};

struct FlowMap {
  const VectorFieldProblem* problem = nullptr;
  OdeOptions ode;
  bool allow_fd_divergence = true;
};

// Position at time s of the characteristic passing through x at time t.
Vec flow(const FlowMap& fm, double s, double t, const Vec& x, const Vec& eta);

// J(s,t,x,eta) = det D_x X via the Liouville identity
// exp(integral_t^s div V(tau, X(tau,t,x,eta), eta) dtau).
double jacobian_factor(const FlowMap& fm, double s, double t, const Vec& x,
                       const Vec& eta);

// Determinant of the finite-difference spatial Jacobian of the flow; test
// oracle for the Liouville route.
double jacobian_fd_det(const FlowMap& fm, double s, double t, const Vec& x,
                       const Vec& eta, double h = 1e-5);

enum class Variant { homogeneous, weak, source, conservative, damped };
Variant variant_from_string(const std::string& s);
std::string variant_name(Variant v);

// Ground truth by the method of characteristics; integral terms ride along
// the flow as one extra ODE component.
double reference_solution(const VectorFieldProblem& problem, Variant variant,
                          double t, const Vec& x, const Vec& eta,
                          const OdeOptions& ode = {});

struct CkBound {
  double G0 = 0.0;  // (|K| + C T) exp(C T)
  double G1 = 0.0;  // max{G0, ||V||_C1 exp(T ||V||_C1)}, clamped convention
  double Gk = 0.0;  // max{G0, 2^k T^{k-1} ||V||_Ck^{2k-1} exp((2k-1) T ||V||_C1)}
};

CkBound ck_bound(const VectorFieldProblem& problem, int k);

double hadamard_J_bound_from(double G1, Index n);
double hadamard_J_bound(const VectorFieldProblem& problem);

// Max finite-difference slope over a quasi-random sample of the box, times a
// declared safety factor; used when Lipschitz metadata is absent.
double estimate_lipschitz(const std::function<double(const Vec&)>& fn,
                          const Vec& lo, const Vec& hi, long samples = 10000,
                          double safety = 1.5);

}  // namespace rtn
