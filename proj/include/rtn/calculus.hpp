#pragma once

#include "rtn/network.hpp"

// The four composition operations on skip-connection ReLU networks plus the
// small helper nets used by the transport builders. Concatenation,
// parallelisation and sums are exact; multiplication carries an accuracy
// parameter and a bound on the factor magnitudes.

namespace rtn {

// Composition: realize(result) == realize(phi1) o realize(phi2), with
// depth(result) = depth(phi1) + depth(phi2) and
// weights(result) <= 2 weights(phi1) + 2 weights(phi2).
Network sparse_concat(const Network& phi1, const Network& phi2);

// Stacks networks with a common input dimension. Depth is the maximum of the
// individual depths and the weight count is exactly the sum; outputs are
// concatenated in argument order.
Network parallelize(const std::vector<Network>& phis);

// Pointwise sum of scalar-output networks over a common input. Depth is the
// max, weights add exactly when the final layers touch disjoint columns.
Network sum_nets(const Network& phi1, const Network& phi2);
Network sum_many(const std::vector<Network>& phis);

struct MulConfig {
  double epsilon = 1e-2;  // accuracy of the product on the declared domain
  double bound_M = 1.0;   // both factors stay within [-M, M] there
};

struct MulGadgetInfo {
  long stages = 0;          // sawtooth compositions per squaring branch
  double delivered = 0.0;   // certified product error 6 M^2 2^{-2m-2}
  long gadget_weights = 0;  // weights of the two-input product net alone
  long gadget_depth = 0;
};

MulGadgetInfo multiplier_info(const MulConfig& cfg);

// Two-input network approximating (a,b) -> a*b on [-M,M]^2 within epsilon.
// Exactly zero whenever either input is exactly zero.
Network multiplier_gadget(const MulConfig& cfg);

// Approximate product of two scalar-output networks over a common input:
// |realize(result) - realize(phi1)*realize(phi2)| <= cfg.epsilon wherever
// both factors stay within [-bound_M, bound_M]. The bound is the caller's
// contract and is not checked at build or evaluation time.
Network multiply_nets(const Network& phi1, const Network& phi2,
                      const MulConfig& cfg);

// Largest epsilon whose gadget still delivers a certified error <= target;
// lets callers with their own ledgers avoid overly deep gadgets.
double mul_eps_for_delivered(double target, double bound_M);

// One-layer net selecting coordinates [begin, end) of the input.
Network selector_net(Index input_dim, Index begin, Index end);

// One-layer net realizing the fixed affine map x -> A x + b exactly.
Network const_shift_net(Index input_dim, const Eigen::MatrixXd& A, const Vec& b);

}  // namespace rtn
