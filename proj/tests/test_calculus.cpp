#include <doctest.h>

#include <cmath>

#include "rtn/calculus.hpp"
#include "test_helpers.hpp"

using namespace rtn;
using rtn::testing::random_net;
using rtn::testing::random_point;

TEST_SUITE_BEGIN("calculus");

TEST_CASE("sparse concatenation composes exactly") {
  std::mt19937_64 rng(101);
  RealizeWorkspace ws;
  for (int rep = 0; rep < 50; ++rep) {
    const Index mid = 1 + (Index)(rep % 3);
    Network phi2 = random_net(rng, 2, mid);
    Network phi1 = random_net(rng, mid, 1);
    Network comp = sparse_concat(phi1, phi2);
    CHECK(comp.depth() == phi1.depth() + phi2.depth());
    CHECK(weight_count(comp) <= 2 * weight_count(phi1) + 2 * weight_count(phi2));
    for (int i = 0; i < 100; ++i) {
      Vec x = random_point(rng, 2);
      const double want = realize(phi1, realize(phi2, x, ws), ws)[0];
      const double got = realize(comp, x, ws)[0];
      CHECK(std::abs(want - got) <= 1e-12);
    }
  }
}

TEST_CASE("identity composed with identity is the identity") {
  Network comp = sparse_concat(identity_net(3), identity_net(3));
  Vec x(3);
  x << 0.5, -2.0, 7.0;
  Vec y = realize(comp, x);
  for (Index i = 0; i < 3; ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-15));
  CHECK(comp.depth() == 2);
}

TEST_CASE("composition of realizations is associative") {
  std::mt19937_64 rng(77);
  RealizeWorkspace ws;
  for (int rep = 0; rep < 30; ++rep) {
    Network A = random_net(rng, 2, 1);
    Network B = random_net(rng, 3, 2);
    Network C = random_net(rng, 2, 3);
    Network left = sparse_concat(sparse_concat(A, B), C);
    Network right = sparse_concat(A, sparse_concat(B, C));
    for (int i = 0; i < 30; ++i) {
      Vec x = random_point(rng, 2);
      CHECK(std::abs(realize(left, x, ws)[0] - realize(right, x, ws)[0]) <= 1e-12);
    }
  }
}

TEST_CASE("parallelisation stacks outputs and adds weights exactly") {
  std::mt19937_64 rng(55);
  RealizeWorkspace ws;
  for (int rep = 0; rep < 40; ++rep) {
    std::vector<Network> nets;
    const int n = 1 + rep % 4;
    long wsum = 0;
    for (int i = 0; i < n; ++i) {
      nets.push_back(random_net(rng, 3, 1 + (rep + i) % 2));
      wsum += weight_count(nets.back());
    }
    Network par = parallelize(nets);
    CHECK(weight_count(par) == wsum);
    Index maxL = 0;
    for (auto& p : nets) maxL = std::max(maxL, p.depth());
    CHECK(par.depth() == maxL);
    for (int i = 0; i < 25; ++i) {
      Vec x = random_point(rng, 3);
      Vec got = realize(par, x, ws);
      Index off = 0;
      for (auto& p : nets) {
        Vec want = realize(p, x, ws);
        for (Index j = 0; j < want.size(); ++j)
          CHECK(std::abs(got[off + j] - want[j]) <= 1e-12);
        off += want.size();
      }
    }
  }
}

TEST_CASE("parallelisation of a single identity realizes the identity") {
  Network par = parallelize({identity_net(2)});
  Vec x(2);
  x << -1.0, 4.0;
  Vec y = realize(par, x);
  CHECK(y[0] == -1.0);
  CHECK(y[1] == 4.0);
}

TEST_CASE("mismatched input dimensions are rejected") {
  CHECK_THROWS_AS(parallelize({identity_net(2), identity_net(3)}), DimensionError);
  CHECK_THROWS_AS(sparse_concat(identity_net(2), identity_net(3)), DimensionError);
}

TEST_CASE("sum of a net and its negation vanishes") {
  std::mt19937_64 rng(11);
  RealizeWorkspace ws;
  Network net = random_net(rng, 2, 1);
  Network minus = scale_output(net, -1.0);
  Network zero = sum_nets(net, minus);
  for (double u = -1.0; u <= 1.0; u += 0.125)
    for (double v = -1.0; v <= 1.0; v += 0.125) {
      Vec x(2);
      x << u, v;
      CHECK(std::abs(realize(zero, x, ws)[0]) <= 1e-12);
    }
}

TEST_CASE("sum depth is the max and realization adds") {
  std::mt19937_64 rng(13);
  RealizeWorkspace ws;
  for (int rep = 0; rep < 40; ++rep) {
    Network a = random_net(rng, 2, 1);
    Network b = random_net(rng, 2, 1);
    Network s = sum_nets(a, b);
    CHECK(s.depth() == std::max(a.depth(), b.depth()));
    CHECK(weight_count(s) <= weight_count(a) + weight_count(b));
    for (int i = 0; i < 25; ++i) {
      Vec x = random_point(rng, 2);
      const double want = realize(a, x, ws)[0] + realize(b, x, ws)[0];
      CHECK(std::abs(realize(s, x, ws)[0] - want) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(sum_nets(identity_net(2), identity_net(2)), ContractError);
}

TEST_CASE("sum weights add exactly for disjoint final supports") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 30; ++rep) {
    Network a = random_net(rng, 2, 1, 3, 3, true, /*final_reads_input=*/false);
    Network b = random_net(rng, 2, 1, 3, 3, true, /*final_reads_input=*/false);
    if (a.depth() < 2 || b.depth() < 2) continue;
    Network s = sum_nets(a, b);
    // matrix supports are disjoint; the two output biases fold into one
    const double ba = a.layers.back().bias[0], bb = b.layers.back().bias[0];
    const long bias_before = (ba != 0.0) + (bb != 0.0);
    const long bias_after = (ba + bb != 0.0) ? 1 : 0;
    CHECK(weight_count(s) ==
          weight_count(a) + weight_count(b) - bias_before + bias_after);
  }
}

TEST_CASE("parallelize then fold equals sum_nets") {
  std::mt19937_64 rng(19);
  RealizeWorkspace ws;
  Network a = random_net(rng, 2, 1);
  Network b = random_net(rng, 2, 1);
  Network s1 = sum_nets(a, b);
  Network s2 = sum_many({a, b});
  for (int i = 0; i < 50; ++i) {
    Vec x = random_point(rng, 2);
    CHECK(realize(s1, x, ws)[0] == realize(s2, x, ws)[0]);
  }
}

TEST_CASE("multiplication gadget approximates products of constants") {
  RealizeWorkspace ws;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    Network a = constant_net(1, 0.5);
    Network b = constant_net(1, 0.5);
    Network prod = multiply_nets(a, b, MulConfig{eps, 1.0});
    for (int i = 0; i <= 1000; ++i) {
      Vec x(1);
      x << -1.0 + 2e-3 * i;
      CHECK(std::abs(realize(prod, x, ws)[0] - 0.25) <= eps);
    }
  }
}

TEST_CASE("multiplication with a zero factor stays within epsilon") {
  RealizeWorkspace ws;
  std::mt19937_64 rng(23);
  Network z = constant_net(1, 0.0);
  Network g = random_net(rng, 1, 1);
  const double eps = 1e-2;
  Network prod = multiply_nets(g, z, MulConfig{eps, 4.0});
  for (int i = 0; i <= 200; ++i) {
    Vec x(1);
    x << -1.0 + 0.01 * i;
    CHECK(std::abs(realize(prod, x, ws)[0]) <= eps);
  }
}

TEST_CASE("multiplication is exactly zero when one input is exactly zero") {
  RealizeWorkspace ws;
  Network gadget = multiplier_gadget(MulConfig{1e-3, 2.0});
  for (double b : {0.5, -1.3, 1.9}) {
    Vec x(2);
    x << 0.0, b;
    CHECK(realize(gadget, x, ws)[0] == 0.0);
    x << b, 0.0;
    CHECK(realize(gadget, x, ws)[0] == 0.0);
  }
}

TEST_CASE("random constant pairs meet the product certificate") {
  std::mt19937_64 rng(29);
  RealizeWorkspace ws;
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  const double eps = 5e-3, M = 2.0;
  for (int rep = 0; rep < 10; ++rep) {
    const double av = val(rng), bv = val(rng);
    Network prod =
        multiply_nets(constant_net(1, av), constant_net(1, bv), MulConfig{eps, M});
    for (int i = 0; i <= 100; ++i) {
      Vec x(1);
      x << -1.0 + 0.02 * i;
      CHECK(std::abs(realize(prod, x, ws)[0] - av * bv) <= eps);
    }
  }
}

TEST_CASE("gadget weights grow affinely in log(1/eps)") {
  std::vector<double> lg, w;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    Network g = multiplier_gadget(MulConfig{eps, 2.0});
    lg.push_back(std::log(1.0 / eps));
    w.push_back((double)weight_count(g));
  }
  const size_t n = lg.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += lg[i];
    sy += w[i];
    sxx += lg[i] * lg[i];
    sxy += lg[i] * w[i];
  }
  const double beta = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double alpha = (sy - beta * sx) / n;
  double max_resid = 0, range = 0;
  for (size_t i = 0; i < n; ++i) {
    max_resid = std::max(max_resid, std::abs(w[i] - alpha - beta * lg[i]));
    range = std::max(range, w[i] - w[0]);
  }
  CHECK(beta > 0.0);
  CHECK(max_resid < 0.05 * range);
}

TEST_CASE("multiplication rejects bad configuration") {
  Network a = constant_net(1, 1.0);
  CHECK_THROWS_AS(multiply_nets(a, a, MulConfig{1.5, 1.0}), ConfigError);
  CHECK_THROWS_AS(multiply_nets(a, a, MulConfig{0.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(multiply_nets(a, identity_net(2), MulConfig{0.5, 1.0}),
                  ContractError);
}

TEST_CASE("selectors pick coordinates exactly") {
  Network tau = selector_net(4, 0, 1);
  Vec x(4);
  x << 0.7, 0.2, -3.0, 0.9;
  CHECK(realize(tau, x)[0] == 0.7);
  Network tail = selector_net(4, 2, 4);
  Vec y = realize(tail, x);
  CHECK(y[0] == -3.0);
  CHECK(y[1] == 0.9);
  CHECK(weight_count(tail) == 2);  // W of an m-coordinate selector is m
  CHECK_THROWS_AS(selector_net(3, 2, 5), ContractError);
}

TEST_CASE("duplication net maps (t,x,eta) to (t,t,x,eta)") {
  Eigen::MatrixXd A(4, 3);
  A.setZero();
  A(0, 0) = 1;
  A(1, 0) = 1;
  A(2, 1) = 1;
  A(3, 2) = 1;
  Network dup = const_shift_net(3, A, Vec::Zero(4));
  std::mt19937_64 rng(31);
  for (int i = 0; i < 20; ++i) {
    Vec x = random_point(rng, 3);
    Vec y = realize(dup, x);
    CHECK(y[0] == x[0]);
    CHECK(y[1] == x[0]);
    CHECK(y[2] == x[1]);
    CHECK(y[3] == x[2]);
  }
}

TEST_SUITE_END();
