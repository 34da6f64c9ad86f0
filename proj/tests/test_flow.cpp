#include <doctest.h>

#include <cmath>

#include "rtn/flow.hpp"
#include "test_helpers.hpp"

using namespace rtn;
using rtn::testing::random_point;

namespace {

VectorFieldProblem const_field_1d(double v) {
  VectorFieldProblem p;
  p.n = 1;
  p.D = 1;
  p.T = 1.0;
  p.V = [v](double, const Vec&, const Vec&) { return Vec::Constant(1, v); };
  p.div_V = [](double, const Vec&, const Vec&) { return 0.0; };
  p.u0 = ramp_u0(1);
  p.growth_C = std::max(1.0, std::abs(v));
  p.ck_norms = {{0, std::abs(v)}, {1, std::abs(v)}, {2, std::abs(v)}, {3, std::abs(v)}};
  p.k = 3;
  p.K_lo = Vec::Constant(1, -2.0);
  p.K_hi = Vec::Constant(1, 2.0);
  p.K_radius = 2.0;
  return p;
}

VectorFieldProblem linear_field_1d() {
  VectorFieldProblem p;
  p.n = 1;
  p.D = 1;
  p.T = 1.0;
  p.V = [](double, const Vec& x, const Vec&) { return x; };
  p.div_V = [](double, const Vec&, const Vec&) { return 1.0; };
  p.u0 = ramp_u0(1);
  p.growth_C = 1.0;
  p.ck_norms = {{0, 9.0}, {1, 9.0}, {2, 9.0}, {3, 9.0}};
  p.k = 3;
  p.K_lo = Vec::Constant(1, -2.0);
  p.K_hi = Vec::Constant(1, 2.0);
  p.K_radius = 2.0;
  return p;
}

VectorFieldProblem rotation_field(double omega) {
  VectorFieldProblem p;
  p.n = 2;
  p.D = 1;
  p.T = 1.0;
  p.V = [omega](double, const Vec& x, const Vec&) {
    Vec v(2);
    v << -omega * x[1], omega * x[0];
    return v;
  };
  p.div_V = [](double, const Vec&, const Vec&) { return 0.0; };
  p.u0 = ramp_u0(2);
  p.growth_C = std::max(1.0, omega);
  p.ck_norms = {{0, 3.0}, {1, 3.0}, {2, 3.0}, {3, 3.0}};
  p.k = 3;
  p.K_lo = Vec::Constant(2, -1.5);
  p.K_hi = Vec::Constant(2, 1.5);
  p.K_radius = 1.5 * std::sqrt(2.0);
  return p;
}

VectorFieldProblem param_shear_1d() {
  // V(t,x,eta) = mean(eta)
  VectorFieldProblem p;
  p.n = 1;
  p.D = 1;
  p.T = 1.0;
  p.V = [](double, const Vec&, const Vec& eta) {
    return Vec::Constant(1, eta.mean());
  };
  p.div_V = [](double, const Vec&, const Vec&) { return 0.0; };
  p.u0 = ramp_u0(1);
  p.growth_C = 1.0;
  p.ck_norms = {{0, 1.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}};
  p.k = 3;
  p.K_lo = Vec::Constant(1, -2.0);
  p.K_hi = Vec::Constant(1, 2.0);
  p.K_radius = 2.0;
  return p;
}

}  // namespace

TEST_SUITE_BEGIN("flow");

TEST_CASE("constant field flows along straight lines") {
  VectorFieldProblem p = const_field_1d(0.8);
  FlowMap fm{&p, {}};
  Vec eta = Vec::Constant(1, 0.5);
  for (double t : {0.2, 0.7, 1.0}) {
    Vec x(1);
    x << 0.4;
    CHECK(std::abs(flow(fm, 0.0, t, x, eta)[0] - (0.4 - 0.8 * t)) <= 1e-8);
  }
}

TEST_CASE("linear field flows exponentially") {
  VectorFieldProblem p = linear_field_1d();
  FlowMap fm{&p, {}};
  Vec eta = Vec::Constant(1, 0.0);
  for (double s : {0.0, 0.3, 1.0})
    for (double t : {0.0, 0.5, 1.0}) {
      Vec x(1);
      x << 1.2;
      CHECK(std::abs(flow(fm, s, t, x, eta)[0] - 1.2 * std::exp(s - t)) <= 1e-8);
    }
}

TEST_CASE("zero-length integration returns the anchor exactly") {
  VectorFieldProblem p = linear_field_1d();
  FlowMap fm{&p, {}};
  Vec x(1), eta(1);
  x << -0.7;
  eta << 0.3;
  CHECK(flow(fm, 0.4, 0.4, x, eta)[0] == -0.7);
}

TEST_CASE("Liouville Jacobian matches closed forms") {
  VectorFieldProblem p = linear_field_1d();
  FlowMap fm{&p, {}};
  Vec eta = Vec::Constant(1, 0.0);
  for (double t : {0.1, 0.6, 1.0}) {
    Vec x(1);
    x << 0.9;
    CHECK(std::abs(jacobian_factor(fm, 0.0, t, x, eta) - std::exp(-t)) <= 1e-8);
  }
  VectorFieldProblem rot = rotation_field(1.3);
  FlowMap fmr{&rot, {}};
  for (double t : {0.25, 0.9}) {
    Vec x(2);
    x << 0.4, -0.3;
    CHECK(std::abs(jacobian_factor(fmr, 0.0, t, x, eta) - 1.0) <= 1e-8);
  }
}

TEST_CASE("Liouville and finite-difference determinants agree") {
  std::mt19937_64 rng(41);
  for (VectorFieldProblem p : {linear_field_1d(), rotation_field(0.9)}) {
    FlowMap fm{&p, {}};
    for (int rep = 0; rep < 10; ++rep) {
      Vec x = random_point(rng, p.n, -1.0, 1.0);
      Vec eta = random_point(rng, p.D, 0.0, 1.0);
      const double t = 0.1 + 0.8 * (rep / 10.0);
      const double a = jacobian_factor(fm, 0.0, t, x, eta);
      const double b = jacobian_fd_det(fm, 0.0, t, x, eta);
      CHECK(std::abs(a - b) <= 1e-5);
    }
  }
}

TEST_CASE("finite-difference divergence fallback works and can be disabled") {
  VectorFieldProblem p = linear_field_1d();
  p.div_V = nullptr;
  FlowMap fm{&p, {}};
  Vec x(1), eta(1);
  x << 0.5;
  eta << 0.0;
  CHECK(std::abs(jacobian_factor(fm, 0.0, 0.5, x, eta) - std::exp(-0.5)) <= 1e-5);
  fm.allow_fd_divergence = false;
  CHECK_THROWS_AS(jacobian_factor(fm, 0.0, 0.5, x, eta), CapabilityError);
}

TEST_CASE("reference solutions match closed forms") {
  Vec x(1), eta(1);
  SUBCASE("homogeneous with parametric velocity") {
    VectorFieldProblem p = param_shear_1d();
    for (double t : {0.0, 0.4, 1.0})
      for (double xi : {-1.0, 0.2, 1.5})
        for (double ev : {0.0, 0.55, 1.0}) {
          x << xi;
          eta << ev;
          const double want = p.u0.eval(Vec::Constant(1, xi - ev * t));
          CHECK(std::abs(reference_solution(p, Variant::homogeneous, t, x, eta) -
                         want) <= 1e-8);
        }
  }
  SUBCASE("source term integrates along characteristics") {
    VectorFieldProblem p = const_field_1d(0.5);
    p.f = [](double, const Vec&, const Vec&) { return 1.0; };
    for (double t : {0.0, 0.3, 1.0})
      for (double xi : {-0.8, 0.1, 1.2}) {
        x << xi;
        eta << 0.5;
        const double want = p.u0.eval(Vec::Constant(1, xi - 0.5 * t)) + t;
        CHECK(std::abs(reference_solution(p, Variant::source, t, x, eta) - want) <=
              1e-8);
      }
  }
  SUBCASE("conservative picks up the Jacobian factor") {
    VectorFieldProblem p = linear_field_1d();
    for (double t : {0.0, 0.5, 1.0})
      for (double xi : {-1.0, 0.3, 0.9}) {
        x << xi;
        eta << 0.0;
        const double want =
            p.u0.eval(Vec::Constant(1, xi * std::exp(-t))) * std::exp(-t);
        CHECK(std::abs(reference_solution(p, Variant::conservative, t, x, eta) -
                       want) <= 1e-8);
      }
  }
  SUBCASE("damping multiplies by the exponential factor") {
    VectorFieldProblem p = const_field_1d(0.5);
    p.a = [](double, const Vec&, const Vec&) { return 1.0; };
    for (double t : {0.0, 0.6, 1.0})
      for (double xi : {-0.5, 0.4}) {
        x << xi;
        eta << 0.5;
        const double want =
            p.u0.eval(Vec::Constant(1, xi - 0.5 * t)) * std::exp(-t);
        CHECK(std::abs(reference_solution(p, Variant::damped, t, x, eta) - want) <=
              1e-8);
      }
  }
}

TEST_CASE("missing capability fields are reported") {
  VectorFieldProblem p = const_field_1d(0.5);
  Vec x = Vec::Constant(1, 0.1), eta = Vec::Constant(1, 0.5);
  CHECK_THROWS_AS(reference_solution(p, Variant::source, 0.5, x, eta),
                  CapabilityError);
  CHECK_THROWS_AS(reference_solution(p, Variant::damped, 0.5, x, eta),
                  CapabilityError);
  p.div_V = nullptr;
  CHECK_THROWS_AS(reference_solution(p, Variant::conservative, 0.5, x, eta),
                  CapabilityError);
}

TEST_CASE("semigroup and inverse consistency") {
  std::mt19937_64 rng(47);
  for (VectorFieldProblem p :
       {const_field_1d(0.7), linear_field_1d(), param_shear_1d()}) {
    FlowMap fm{&p, {}};
    for (int rep = 0; rep < 50; ++rep) {
      Vec x = random_point(rng, p.n, -1.5, 1.5);
      Vec eta = random_point(rng, p.D, 0.0, 1.0);
      std::uniform_real_distribution<double> td(0.0, p.T);
      const double t = td(rng), s1 = td(rng), s2 = td(rng);
      Vec mid = flow(fm, s1, t, x, eta);
      Vec two = flow(fm, s2, s1, mid, eta);
      Vec direct = flow(fm, s2, t, x, eta);
      CHECK((two - direct).cwiseAbs().maxCoeff() <= 1e-7);
      Vec back = flow(fm, t, 0.0, flow(fm, 0.0, t, x, eta), eta);
      CHECK((back - x).cwiseAbs().maxCoeff() <= 1e-7);
    }
  }
}

TEST_CASE("solutions are constant along characteristics") {
  VectorFieldProblem p = param_shear_1d();
  FlowMap fm{&p, {}};
  std::mt19937_64 rng(53);
  for (int rep = 0; rep < 25; ++rep) {
    Vec x0 = random_point(rng, 1, -1.0, 1.0);
    Vec eta = random_point(rng, 1, 0.0, 1.0);
    const double t = 0.1 + 0.8 * (rep / 25.0);
    Vec xt = flow(fm, t, 0.0, x0, eta);
    const double u = reference_solution(p, Variant::homogeneous, t, xt, eta);
    CHECK(std::abs(u - p.u0.eval(x0)) <= 1e-6);
  }
}

TEST_CASE("conservative equals homogeneous for divergence-free fields") {
  VectorFieldProblem p = rotation_field(1.1);
  std::mt19937_64 rng(59);
  for (int rep = 0; rep < 20; ++rep) {
    Vec x = random_point(rng, 2, -1.0, 1.0);
    Vec eta = random_point(rng, 1, 0.0, 1.0);
    const double t = (rep + 1) / 21.0;
    const double a = reference_solution(p, Variant::conservative, t, x, eta);
    const double b = reference_solution(p, Variant::homogeneous, t, x, eta);
    CHECK(std::abs(a - b) <= 1e-8);
  }
}

TEST_CASE("growth bound from the sublinear condition holds numerically") {
  std::mt19937_64 rng(61);
  for (VectorFieldProblem p : {const_field_1d(0.9), linear_field_1d()}) {
    FlowMap fm{&p, {}};
    const CkBound b = ck_bound(p, 1);
    for (int rep = 0; rep < 40; ++rep) {
      Vec x = random_point(rng, p.n, p.K_lo[0], p.K_hi[0]);
      Vec eta = random_point(rng, p.D, 0.0, 1.0);
      std::uniform_real_distribution<double> td(0.0, p.T);
      Vec pos = flow(fm, td(rng), td(rng), x, eta);
      CHECK(pos.cwiseAbs().maxCoeff() <= b.G0 + 1e-9);
    }
  }
}

TEST_CASE("bound calculator arithmetic") {
  VectorFieldProblem p = const_field_1d(1.0);
  p.growth_C = 1.0;
  p.K_radius = 2.0;
  p.T = 1.0;
  CkBound b = ck_bound(p, 1);
  CHECK(b.G0 == doctest::Approx(3.0 * std::exp(1.0)).epsilon(1e-12));

  // small box and growth constant give G0 < e, the clamp makes G1 = e
  VectorFieldProblem q = const_field_1d(0.3);
  q.growth_C = 0.3;
  q.K_radius = 0.3;
  q.ck_norms = {{0, 1.0}, {1, 1.0}};
  CkBound bq = ck_bound(q, 1);
  CHECK(bq.G0 < std::exp(1.0));
  CHECK(bq.G1 == doctest::Approx(std::exp(1.0)).epsilon(1e-12));

  // full formula for the k-th order bound
  VectorFieldProblem r = const_field_1d(1.0);
  r.ck_norms = {{0, 2.0}, {1, 2.0}, {2, 2.0}};
  CkBound br = ck_bound(r, 2);
  const double want =
      std::max(br.G0, 4.0 * 1.0 * std::pow(2.0, 3) * std::exp(3.0 * 2.0));
  CHECK(br.Gk == doctest::Approx(want).epsilon(1e-12));
  CHECK_THROWS_AS(ck_bound(r, 5), CapabilityError);
}

TEST_CASE("Hadamard bound on the Jacobian factor") {
  CHECK(hadamard_J_bound_from(2.0, 1) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(hadamard_J_bound_from(3.0, 2) == doctest::Approx(18.0).epsilon(1e-13));
  // sampled |J| stays below the bound
  VectorFieldProblem p = linear_field_1d();
  FlowMap fm{&p, {}};
  const double GJ = hadamard_J_bound(p);
  std::mt19937_64 rng(67);
  for (int rep = 0; rep < 20; ++rep) {
    Vec x = random_point(rng, 1, -2.0, 2.0);
    Vec eta = random_point(rng, 1, 0.0, 1.0);
    const double t = (rep + 1) / 21.0;
    CHECK(std::abs(jacobian_factor(fm, 0.0, t, x, eta)) <= GJ);
  }
}

TEST_CASE("lipschitz estimation is close for known slopes") {
  auto f = [](const Vec& x) { return 2.5 * x[0] - x[1]; };
  Vec lo = Vec::Constant(2, -1.0), hi = Vec::Constant(2, 1.0);
  const double est = estimate_lipschitz(f, lo, hi, 2000, 1.5);
  CHECK(est >= 2.5);
  CHECK(est <= 2.5 * 1.6);
}

TEST_SUITE_END();
