#pragma once

#include <Eigen/Core>

namespace rtn {

// Halton low-discrepancy sequence, used for deterministic quasi-random
// domain samples (estimation probes and high-dimensional validation grids).
inline double halton(long index, long base) {
  double f = 1.0, r = 0.0;
  long i = index + 1;  // skip the origin
  while (i > 0) {
    f /= (double)base;
    r += f * (double)(i % base);
    i /= base;
  }
  return r;
}

inline long nth_prime(int n) {
  static const long primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31,
                                37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79,
                                83, 89, 97, 101, 103, 107, 109, 113};
  return primes[n % 30];
}

inline Eigen::VectorXd halton_point(long index, const Eigen::VectorXd& lo,
                                    const Eigen::VectorXd& hi) {
  Eigen::VectorXd p(lo.size());
  for (Eigen::Index d = 0; d < lo.size(); ++d)
    p[d] = lo[d] + (hi[d] - lo[d]) * halton(index, nth_prime((int)d));
  return p;
}

}  // namespace rtn
