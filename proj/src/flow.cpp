#include "rtn/flow.hpp"

#include <Eigen/LU>

#include <cmath>

#include "rtn/sampling.hpp"

namespace rtn {

InitialCondition ramp_u0(Index n) {
  InitialCondition ic;
  ic.kind = U0Kind::ramp;
  ic.eval = [](const Vec& x) {
    return std::max(0.0, 1.0 - x.cwiseAbs().sum());
  };
  NetBuilder nb(n);
  nb.begin_layer(2 * n);
  for (Index i = 0; i < n; ++i) {
    nb.add_entry(2 * i, i, 1.0);
    nb.add_entry(2 * i + 1, i, -1.0);
  }
  nb.begin_layer(1);
  for (Index i = 0; i < 2 * n; ++i) nb.add_entry(0, n + i, -1.0);
  nb.add_bias(0, 1.0);
  nb.begin_layer(1);
  nb.add_entry(0, n + 2 * n, 1.0);
  ic.exact_net = nb.finish();
  ic.r = 1e9;  // exactly representable: approximable at every rate
  ic.sup_norm = 1.0;
  ic.lip = 1.0;
  return ic;
}

InitialCondition piecewise_affine_u0(const std::vector<double>& xs,
                                     const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw ConfigError("piecewise affine u0 needs at least two breakpoints");
  for (size_t i = 1; i < xs.size(); ++i)
    if (xs[i] <= xs[i - 1]) throw ConfigError("breakpoints must increase");
  const size_t m = xs.size();
  // Constant left of xs[0]: value ys[0]; slope changes at each breakpoint.
  double prev = 0.0;
  std::vector<double> jumps;  // slope increments at breakpoints
  for (size_t i = 0; i + 1 < m; ++i) {
    const double s = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    jumps.push_back(s - prev);
    prev = s;
  }
  jumps.push_back(0.0 - prev);  // constant to the right

  InitialCondition ic;
  ic.kind = U0Kind::piecewise_affine;
  auto xs_c = xs;
  auto ys_c = ys;
  ic.eval = [xs_c, ys_c](const Vec& x) {
    const double t = x[0];
    if (t <= xs_c.front()) return ys_c.front();
    if (t >= xs_c.back()) return ys_c.back();
    size_t i = 0;
    while (t > xs_c[i + 1]) ++i;
    const double w = (t - xs_c[i]) / (xs_c[i + 1] - xs_c[i]);
    return ys_c[i] + w * (ys_c[i + 1] - ys_c[i]);
  };
  NetBuilder nb(1);
  nb.begin_layer((Index)m);
  for (size_t i = 0; i < m; ++i) {
    nb.add_entry((Index)i, 0, 1.0);
    nb.add_bias((Index)i, -xs[i]);
  }
  nb.begin_layer(1);
  for (size_t i = 0; i < m; ++i) nb.add_entry(0, 1 + (Index)i, jumps[i]);
  nb.add_bias(0, ys[0]);
  ic.exact_net = nb.finish();
  ic.r = 1e9;
  double sup = 0.0, lip = 0.0;
  for (size_t i = 0; i < m; ++i) sup = std::max(sup, std::abs(ys[i]));
  prev = 0.0;
  for (size_t i = 0; i + 1 < m; ++i)
    lip = std::max(lip, std::abs((ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])));
  ic.sup_norm = sup;
  ic.lip = lip;
  return ic;
}

InitialCondition smooth_u0(std::function<double(const Vec&)> eval, Index n, int s,
                           double norm_bound, double sup_norm, double lip) {
  InitialCondition ic;
  ic.kind = U0Kind::smooth;
  ic.eval = std::move(eval);
  ic.s = s;
  ic.r = (double)s / (double)n;
  ic.norm_bound = norm_bound;
  ic.sup_norm = sup_norm;
  ic.lip = lip;
  return ic;
}

namespace {

void require_field(const VectorFieldProblem& p) {
  if (!p.V) throw CapabilityError("problem has no vector field");
  if (p.n < 1 || p.D < 0) throw ContractError("bad problem dimensions");
}

double fd_divergence(const VectorFieldProblem& p, double t, const Vec& x,
                     const Vec& eta) {
  const double h = 1e-6 * std::max(1.0, x.cwiseAbs().maxCoeff());
  double div = 0.0;
  Vec xp = x, xm = x;
  for (Index i = 0; i < p.n; ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    div += (p.V(t, xp, eta)[i] - p.V(t, xm, eta)[i]) / (2.0 * h);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return div;
}

}  // namespace

Vec flow(const FlowMap& fm, double s, double t, const Vec& x, const Vec& eta) {
  const VectorFieldProblem& p = *fm.problem;
  require_field(p);
  if (x.size() != p.n) throw DimensionError("flow: bad spatial dimension");
  if (s == t) return x;
  OdeRhs rhs = [&](double tau, const Vec& y, Vec& dy) { dy = p.V(tau, y, eta); };
  return ode_integrate(rhs, t, x, s, fm.ode);
}

double jacobian_factor(const FlowMap& fm, double s, double t, const Vec& x,
                       const Vec& eta) {
  const VectorFieldProblem& p = *fm.problem;
  require_field(p);
  const bool have_div = static_cast<bool>(p.div_V);
  if (!have_div && !fm.allow_fd_divergence)
    throw CapabilityError("divergence of V unavailable and fallback disabled");
  if (s == t) return 1.0;
  Vec y0(p.n + 1);
  y0.head(p.n) = x;
  y0[p.n] = 0.0;
  OdeRhs rhs = [&](double tau, const Vec& y, Vec& dy) {
    const Vec xi = y.head(p.n);
    dy.head(p.n) = p.V(tau, xi, eta);
    dy[p.n] = have_div ? p.div_V(tau, xi, eta) : fd_divergence(p, tau, xi, eta);
  };
  const Vec yT = ode_integrate(rhs, t, y0, s, fm.ode);
  return std::exp(yT[p.n]);
}

double jacobian_fd_det(const FlowMap& fm, double s, double t, const Vec& x,
                       const Vec& eta, double h) {
  const VectorFieldProblem& p = *fm.problem;
  Eigen::MatrixXd Jm(p.n, p.n);
  Vec xp = x, xm = x;
  for (Index j = 0; j < p.n; ++j) {
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    Jm.col(j) = (flow(fm, s, t, xp, eta) - flow(fm, s, t, xm, eta)) / (2.0 * h);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return Jm.determinant();
}

Variant variant_from_string(const std::string& s) {
  if (s == "homogeneous") return Variant::homogeneous;
  if (s == "weak") return Variant::weak;
  if (s == "source") return Variant::source;
  if (s == "conservative") return Variant::conservative;
  if (s == "damped") return Variant::damped;
  throw ConfigError("unknown variant '" + s + "'");
}

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::homogeneous: return "homogeneous";
    case Variant::weak: return "weak";
    case Variant::source: return "source";
    case Variant::conservative: return "conservative";
    case Variant::damped: return "damped";
  }
  return "?";
}

double reference_solution(const VectorFieldProblem& p, Variant variant, double t,
                          const Vec& x, const Vec& eta, const OdeOptions& ode) {
  require_field(p);
  if (!p.u0.eval) throw CapabilityError("problem has no initial condition");
  if (variant == Variant::source && !p.f)
    throw CapabilityError("source variant needs f");
  if (variant == Variant::damped && !p.a)
    throw CapabilityError("damped variant needs a");
  if (variant == Variant::conservative && !p.div_V)
    throw CapabilityError("conservative variant needs div_V");

  const bool extra = variant != Variant::homogeneous && variant != Variant::weak;
  Vec y0(p.n + (extra ? 1 : 0));
  y0.head(p.n) = x;
  if (extra) y0[p.n] = 0.0;

  OdeRhs rhs = [&](double tau, const Vec& y, Vec& dy) {
    const Vec xi = y.head(p.n);
    dy.head(p.n) = p.V(tau, xi, eta);
    switch (variant) {
      case Variant::source: dy[p.n] = p.f(tau, xi, eta); break;
      case Variant::conservative: dy[p.n] = p.div_V(tau, xi, eta); break;
      case Variant::damped: dy[p.n] = p.a(tau, xi, eta); break;
      default: break;
    }
  };

  Vec yEnd;
  if (t == 0.0) {
    yEnd = y0;
  } else {
    yEnd = ode_integrate(rhs, t, y0, 0.0, ode);
  }
  const double u0v = p.u0.eval(yEnd.head(p.n));
  switch (variant) {
    case Variant::homogeneous:
    case Variant::weak: return u0v;
    // the extra component integrates from t down to 0, so it carries
    // minus the integral from 0 to t
    case Variant::source: return u0v - yEnd[p.n];
    case Variant::conservative: return u0v * std::exp(yEnd[p.n]);
    case Variant::damped: return u0v * std::exp(yEnd[p.n]);
  }
  return u0v;
}

CkBound ck_bound(const VectorFieldProblem& p, int k) {
  if (k < 1) throw ContractError("ck_bound needs k >= 1");
  auto norm = [&](int j) {
    auto it = p.ck_norms.find(j);
    if (it == p.ck_norms.end())
      throw CapabilityError("ck_norms table missing order " + std::to_string(j));
    return std::max(1.0, it->second);  // clamped-upward convention
  };
  CkBound b;
  b.G0 = (p.K_radius + p.growth_C * p.T) * std::exp(p.growth_C * p.T);
  const double Tc = std::max(1.0, p.T);
  const double V1 = norm(1);
  b.G1 = std::max(b.G0, V1 * std::exp(Tc * V1));
  const double Vk = norm(k);
  b.Gk = std::max(b.G0, std::pow(2.0, k) * std::pow(Tc, k - 1) *
                            std::pow(Vk, 2 * k - 1) *
                            std::exp((2.0 * k - 1.0) * Tc * V1));
  return b;
}

double hadamard_J_bound_from(double G1, Index n) {
  return std::pow((double)n, 0.5 * (double)n) * std::pow(G1, (double)n);
}

double hadamard_J_bound(const VectorFieldProblem& p) {
  const CkBound b = ck_bound(p, 1);
  const double Tc = std::max(1.0, p.T);
  const double V1 = std::max(1.0, p.ck_norms.at(1));
  const double G1 = b.G0 + 3.0 * V1 * std::exp(Tc * V1);
  return hadamard_J_bound_from(G1, p.n);
}

double estimate_lipschitz(const std::function<double(const Vec&)>& fn,
                          const Vec& lo, const Vec& hi, long samples,
                          double safety) {
  double best = 0.0;
  Vec step = (hi - lo).cwiseMax(1e-12);
  for (long i = 0; i < samples; ++i) {
    Vec x = halton_point(i, lo, hi);
    const double fx = fn(x);
    for (Index d = 0; d < lo.size(); ++d) {
      const double h = 1e-4 * step[d];
      Vec xp = x;
      xp[d] = std::min(x[d] + h, hi[d]);
      if (xp[d] > x[d])
        best = std::max(best, std::abs(fn(xp) - fx) / (xp[d] - x[d]));
    }
  }
  return best * safety;
}

}  // namespace rtn
