#include "rtn/smooth.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>

#include "rtn/parallel.hpp"
#include "rtn/sampling.hpp"

namespace rtn {

namespace {

constexpr double kHatShave = 1e-12;  // pushes off-support hat units to exact zero

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double alpha_factorial(const MultiIndex& a) {
  double f = 1.0;
  for (int ai : a) f *= factorial(ai);
  return f;
}

int alpha_order(const MultiIndex& a) {
  int s = 0;
  for (int ai : a) s += ai;
  return s;
}

void enum_alphas_rec(Index d, Index pos, int remaining, MultiIndex& cur,
                     std::vector<MultiIndex>& out) {
  if (pos == d) {
    out.push_back(cur);
    return;
  }
  for (int v = 0; v <= remaining; ++v) {
    cur[pos] = v;
    enum_alphas_rec(d, pos + 1, remaining - v, cur, out);
  }
  cur[pos] = 0;
}

std::vector<MultiIndex> alphas_up_to(Index d, int order) {
  std::vector<MultiIndex> out;
  MultiIndex cur(d, 0);
  enum_alphas_rec(d, 0, order, cur, out);
  std::stable_sort(out.begin(), out.end(),
                   [](const MultiIndex& a, const MultiIndex& b) {
                     return alpha_order(a) < alpha_order(b);
                   });
  return out;
}

std::vector<MultiIndex> alphas_exactly(Index d, int order) {
  std::vector<MultiIndex> all = alphas_up_to(d, order), out;
  for (auto& a : all)
    if (alpha_order(a) == order) out.push_back(a);
  return out;
}

// One-axis finite-difference stencils on [0,1]; one-sided near the edges.
using Stencil = std::vector<std::pair<double, double>>;  // (offset, weight)

Stencil axis_stencil(int order, double c, double h) {
  switch (order) {
    case 0: return {{0.0, 1.0}};
    case 1:
      if (c - h < 0.0)
        return {{0.0, -1.5 / h}, {h, 2.0 / h}, {2 * h, -0.5 / h}};
      if (c + h > 1.0)
        return {{0.0, 1.5 / h}, {-h, -2.0 / h}, {-2 * h, 0.5 / h}};
      return {{-h, -0.5 / h}, {h, 0.5 / h}};
    case 2: {
      const double h2 = h * h;
      if (c - h < 0.0)
        return {{0.0, 2.0 / h2}, {h, -5.0 / h2}, {2 * h, 4.0 / h2}, {3 * h, -1.0 / h2}};
      if (c + h > 1.0)
        return {{0.0, 2.0 / h2}, {-h, -5.0 / h2}, {-2 * h, 4.0 / h2}, {-3 * h, -1.0 / h2}};
      return {{-h, 1.0 / h2}, {0.0, -2.0 / h2}, {h, 1.0 / h2}};
    }
    case 3: {  // central only; callers keep the point in the interior
      const double h3 = 2.0 * h * h * h;
      return {{2 * h, 1.0 / h3}, {h, -2.0 / h3}, {-h, 2.0 / h3}, {-2 * h, -1.0 / h3}};
    }
    default: throw CapabilityError("finite differences beyond third order need an oracle");
  }
}

struct UnitTarget {
  Index d;
  Vec lo, len;
  const SmoothTarget* src;
  double h1, h2, h3;

  double eval(const Vec& y) const {
    return src->evaluator(lo + len.cwiseProduct(y));
  }
  bool oracle_covers(int order) const {
    return src->derivative_oracle && src->oracle_order >= order;
  }
  // D^alpha of the unit-box pullback
  double oracle_derivative(const Vec& y, const MultiIndex& a) const {
    double scale = 1.0;
    for (Index i = 0; i < d; ++i) scale *= std::pow(len[i], a[i]);
    return src->derivative_oracle(lo + len.cwiseProduct(y), a) * scale;
  }
  double fd_derivative(const Vec& y, const MultiIndex& a) const {
    std::vector<Stencil> st;
    st.reserve(d);
    for (Index i = 0; i < d; ++i) {
      const int o = a[i];
      const double h = (o <= 1) ? h1 : (o == 2 ? h2 : h3);
      st.push_back(o == 0 ? Stencil{{0.0, 1.0}} : axis_stencil(o, y[i], h));
    }
    double acc = 0.0;
    std::vector<size_t> idx(d, 0);
    Vec pt = y;
    while (true) {
      double w = 1.0;
      for (Index i = 0; i < d; ++i) {
        pt[i] = y[i] + st[i][idx[i]].first;
        w *= st[i][idx[i]].second;
      }
      acc += w * eval(pt);
      Index i = 0;
      while (i < d && ++idx[i] == st[i].size()) idx[i++] = 0;
      if (i == d) break;
    }
    return acc;
  }
  double derivative(const Vec& y, const MultiIndex& a) const {
    const int o = alpha_order(a);
    if (o == 0) return eval(y);
    if (oracle_covers(o)) return oracle_derivative(y, a);
    return fd_derivative(y, a);
  }
};

// ---- small nets in unit-box coordinates (input dimension d) ----

// Thresholded trapezoid psi(3 n y_i - 3 m) - shave, realized with a final
// hidden relu so the value is exactly zero outside the support.
Network hat_net(Index d, Index axis, long n, long m) {
  NetBuilder nb(d);
  nb.begin_layer(4);
  const double s = 3.0 * (double)n;
  const double off[4] = {2.0, 1.0, -1.0, -2.0};
  for (int u = 0; u < 4; ++u) {
    nb.add_entry(u, axis, s);
    nb.add_bias(u, -3.0 * (double)m + off[u]);
  }
  nb.begin_layer(1);
  nb.add_entry(0, d + 0, 1.0);
  nb.add_entry(0, d + 1, -1.0);
  nb.add_entry(0, d + 2, -1.0);
  nb.add_entry(0, d + 3, 1.0);
  nb.add_bias(0, -kHatShave);
  nb.begin_layer(1);
  nb.add_entry(0, d + 4, 1.0);
  return nb.finish();
}

// Gate: 1 on the union of the node's hat supports, 0 outside a box twice as
// wide, built from wider trapezoids so the outward value is exactly zero.
Network gate_net(Index d, const std::vector<Index>& axes,
                 const std::vector<long>& n, const std::vector<long>& m) {
  const Index dl = (Index)axes.size();
  NetBuilder nb(d);
  nb.begin_layer(4 * dl);
  const double off[4] = {2.0, 1.0, -1.0, -2.0};
  for (Index j = 0; j < dl; ++j) {
    const double s = 1.5 * (double)n[j];
    for (int u = 0; u < 4; ++u) {
      nb.add_entry(4 * j + u, axes[j], s);
      nb.add_bias(4 * j + u, -1.5 * (double)m[j] + off[u]);
    }
  }
  nb.begin_layer(1);
  const double sgn[4] = {1.0, -1.0, -1.0, 1.0};
  for (Index j = 0; j < dl; ++j)
    for (int u = 0; u < 4; ++u) nb.add_entry(0, d + 4 * j + u, sgn[u]);
  nb.add_bias(0, -(double)(dl - 1) - kHatShave);
  nb.begin_layer(1);
  nb.add_entry(0, d + 4 * dl, 1.0);
  return nb.finish();
}

Network factor_net(Index d, Index axis, double center) {
  NetBuilder nb(d);
  nb.begin_layer(1);
  nb.add_entry(0, axis, 1.0);
  nb.add_bias(0, -center);
  return nb.finish();
}

Network mul_tree(std::vector<Network> leaves, const MulConfig& cfg) {
  while (leaves.size() > 1) {
    std::vector<Network> next;
    for (size_t i = 0; i + 1 < leaves.size(); i += 2)
      next.push_back(multiply_nets(leaves[i], leaves[i + 1], cfg));
    if (leaves.size() % 2 == 1) next.push_back(std::move(leaves.back()));
    leaves = std::move(next);
  }
  return std::move(leaves.front());
}

// clip-style gating: equals P exactly where gate = 1 (up to the shave), and
// exactly zero where the gate vanishes, provided |P| <= cap globally.
Network gated(const Network& gate, const Network& P, double cap) {
  NetBuilder head(2);
  head.begin_layer(2);
  head.add_entry(0, 0, 2.0 * cap);
  head.add_entry(0, 1, 1.0);
  head.add_bias(0, -cap);
  head.add_entry(1, 0, 2.0 * cap);
  head.add_bias(1, -cap);
  head.begin_layer(1);
  head.add_entry(0, 2, 1.0);
  head.add_entry(0, 3, -1.0);
  return sparse_concat(head.finish(), parallelize({gate, P}));
}

struct AffineFit {
  bool ok = false;
  Vec coef;  // d slopes in unit coords
  double intercept = 0.0;
  double residual = 0.0;
};

AffineFit try_affine(const UnitTarget& ut, double scale_hint) {
  const long P = std::min<long>(400, 60 * ut.d + 40);
  Eigen::MatrixXd A(P, ut.d + 1);
  Vec b(P);
  Vec zero = Vec::Zero(ut.d), one = Vec::Ones(ut.d);
  for (long i = 0; i < P; ++i) {
    Vec y = halton_point(i, zero, one);
    for (Index j = 0; j < ut.d; ++j) A(i, j) = y[j];
    A(i, ut.d) = 1.0;
    b[i] = ut.eval(y);
  }
  Vec sol = (A.transpose() * A).ldlt().solve(A.transpose() * b);
  AffineFit fit;
  fit.coef = sol.head(ut.d);
  fit.intercept = sol[ut.d];
  fit.residual = (A * sol - b).cwiseAbs().maxCoeff();
  const double scale = std::max({1.0, scale_hint, b.cwiseAbs().maxCoeff()});
  const double tol = std::max(1e-9, 16.0 * ut.src->evaluator_noise) * scale;
  if (fit.residual > tol) return fit;
  // macro-scale curvature probe
  const double h = 0.11;
  for (long i = 0; i < 24; ++i) {
    Vec y = halton_point(i + 7, zero, one);
    for (Index j = 0; j < ut.d; ++j) y[j] = 0.5 * h + (1.0 - h) * y[j];
    for (Index j = 0; j < ut.d; ++j) {
      Vec yp = y, ym = y;
      yp[j] += 0.5 * h;
      ym[j] -= 0.5 * h;
      if (std::abs(ut.eval(yp) - 2.0 * ut.eval(y) + ut.eval(ym)) > tol) return fit;
    }
  }
  fit.ok = true;
  return fit;
}

}  // namespace

std::pair<Network, ApproxCertificate> approx_smooth(const SmoothTarget& target,
                                                    double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ConfigError("approximation accuracy must lie in (0,1)");
  if (!target.evaluator) throw ContractError("smooth target needs an evaluator");
  if (target.k < 1) throw ContractError("smoothness order must be at least 1");
  if (target.lo.size() != target.dim || target.hi.size() != target.dim)
    throw DimensionError("box does not match target dimension");
  for (Index i = 0; i < target.dim; ++i)
    if (!(target.hi[i] > target.lo[i]))
      throw ContractError("smooth target box is degenerate");

  const Index d = target.dim;
  UnitTarget ut;
  ut.d = d;
  ut.lo = target.lo;
  ut.len = target.hi - target.lo;
  ut.src = &target;
  const double noise = std::max(1e-15, target.evaluator_noise);
  ut.h1 = std::max(6e-6, std::cbrt(3.0 * noise));
  ut.h2 = std::max(1.2e-4, std::pow(noise, 0.25));
  ut.h3 = std::max(3e-3, std::pow(noise, 0.2));

  ApproxCertificate cert;
  cert.epsilon = epsilon;
  cert.taylor_budget = 0.5 * epsilon;
  cert.mul_budget = 0.5 * epsilon;
  cert.grid_n.assign(d, 0);

  // Exact shortcut for (numerically) affine targets.
  const AffineFit fit = try_affine(ut, target.norm_bound);
  if (fit.ok) {
    NetBuilder nb(d);
    nb.begin_layer(1);
    double bias = fit.intercept;
    for (Index i = 0; i < d; ++i) {
      const double ci = fit.coef[i] / ut.len[i];
      const double c = std::abs(ci) > 1e-11 ? ci : 0.0;
      nb.add_entry(0, i, c);
      bias -= c * ut.lo[i];
    }
    nb.add_bias(0, std::abs(bias) > 1e-11 ? bias : 0.0);
    Network net = nb.finish();
    cert.fast_path = true;
    cert.taylor_order = 1;
    cert.remainder_bound = fit.residual;
    cert.nodes = 1;
    cert.size = size(net);
    return {std::move(net), cert};
  }

  // Local polynomial degree: second order is the finite-difference ceiling,
  // an oracle lifts it up to k-1 as long as it also covers the remainder
  // order degree+1 (or finite differences can, i.e. degree+1 <= 3).
  const int max_coeff_order =
      target.derivative_oracle ? std::max(2, target.oracle_order - 1) : 2;
  const int degree = std::min(target.k - 1, max_coeff_order);
  const int jstar = degree + 1;  // remainder order
  cert.taylor_order = degree;
  if (target.k - 1 > degree)
    cert.warnings.push_back(
        "polynomial degree capped at " + std::to_string(degree) +
        "; declared order " + std::to_string(target.k) +
        " needs a derivative oracle beyond finite differences");

  // Per-multi-index bounds on the order-j* derivatives: declared norm scaled
  // to unit coordinates, sharpened by a sampled estimate with safety 1.5.
  const auto rem_alphas = alphas_exactly(d, jstar);
  std::vector<double> semi(rem_alphas.size());
  bool fd_exceeds_declared = false;
  {
    const long probes = 24;
    Vec zero = Vec::Zero(d), one = Vec::Ones(d);
    const double margin = 3.5 * ut.h3;
    for (size_t ai = 0; ai < rem_alphas.size(); ++ai) {
      const MultiIndex& a = rem_alphas[ai];
      double cap = target.norm_bound;
      for (Index i = 0; i < d; ++i) cap *= std::pow(ut.len[i], a[i]);
      double est = 0.0;
      for (long p = 0; p < probes; ++p) {
        Vec y = halton_point(p, zero, one);
        for (Index i = 0; i < d; ++i)
          y[i] = margin + (1.0 - 2.0 * margin) * y[i];
        est = std::max(est, std::abs(ut.derivative(y, a)));
      }
      if (est > 2.0 * cap) fd_exceeds_declared = true;
      semi[ai] = std::min(cap, 1.5 * est);
    }
  }
  if (fd_exceeds_declared)
    cert.warnings.push_back(
        "inconsistent metadata: sampled derivative exceeds the declared "
        "norm bound by more than a factor of two");

  // Anisotropic grid: greedily refine the axis with the best remainder
  // reduction per node growth until the Taylor half-budget is met.
  std::vector<long> n(d, 0);
  auto rho = [](long ni) { return ni == 0 ? 0.5 : 2.0 / (3.0 * (double)ni); };
  auto remainder = [&](const std::vector<long>& nn) {
    double r = 0.0;
    for (size_t ai = 0; ai < rem_alphas.size(); ++ai) {
      double term = semi[ai] / alpha_factorial(rem_alphas[ai]);
      for (Index i = 0; i < d; ++i)
        term *= std::pow(rho(nn[i]), rem_alphas[ai][i]);
      r += term;
    }
    return r;
  };
  double rem = remainder(n);
  long total_nodes = 1;
  while (rem > cert.taylor_budget) {
    Index best = -1;
    double best_score = 0.0;
    double best_rem = rem;
    for (Index i = 0; i < d; ++i) {
      std::vector<long> cand = n;
      cand[i] = (n[i] == 0) ? 2 : n[i] + 1;
      const double r2 = remainder(cand);
      const double growth = (double)(cand[i] + 1) / (double)(n[i] + 1);
      const double score = (rem - r2) / std::max(1e-300, growth - 1.0 + 1e-9);
      if (score > best_score) {
        best_score = score;
        best = i;
        best_rem = r2;
      }
    }
    if (best < 0)
      throw ConfigError("remainder budget unreachable by grid refinement");
    total_nodes = total_nodes / (n[best] + 1);
    n[best] = (n[best] == 0) ? 2 : n[best] + 1;
    total_nodes *= (n[best] + 1);
    rem = best_rem;
    if (total_nodes > 400000)
      throw ConfigError("constructive grid would exceed 4e5 nodes");
  }
  cert.grid_n.assign(n.begin(), n.end());
  cert.remainder_bound = rem;

  std::vector<Index> axes;  // axes carrying a partition of unity
  for (Index i = 0; i < d; ++i)
    if (n[i] > 0) axes.push_back(i);
  const Index dloc = (Index)axes.size();
  const double active = std::pow(2.0, (double)dloc);

  // Enumerate nodes over the active axes and compute Taylor coefficients.
  const auto coef_alphas = alphas_up_to(d, degree);
  long node_count = 1;
  for (Index i : axes) node_count *= (n[i] + 1);
  cert.nodes = node_count;

  std::vector<Vec> centers((size_t)node_count, Vec::Constant(d, 0.5));
  std::vector<std::vector<long>> node_m((size_t)node_count,
                                        std::vector<long>(dloc, 0));
  for (long nd = 0; nd < node_count; ++nd) {
    long rem_idx = nd;
    for (Index j = 0; j < dloc; ++j) {
      const long nj = n[axes[j]];
      node_m[nd][j] = rem_idx % (nj + 1);
      rem_idx /= (nj + 1);
      centers[nd][axes[j]] = (double)node_m[nd][j] / (double)nj;
    }
  }

  std::vector<std::vector<double>> coeffs((size_t)node_count);
  parallel_chunks(node_count, [&](int, long b, long e) {
    for (long nd = b; nd < e; ++nd) {
      std::vector<double> c(coef_alphas.size());
      for (size_t ai = 0; ai < coef_alphas.size(); ++ai)
        c[ai] = ut.derivative(centers[nd], coef_alphas[ai]) /
                alpha_factorial(coef_alphas[ai]);
      coeffs[nd] = std::move(c);
    }
  });

  // Drop terms whose worst on-support contribution is negligible, keeping a
  // recorded bound on the dropped mass.
  std::vector<double> rho_i(d);
  for (Index i = 0; i < d; ++i) rho_i[i] = rho(n[i]);
  const double drop_cap = 0.005 * epsilon / active;
  double dropped_mass = 0.0;
  double P_loc_max = 0.0, P_glob_max = 0.0, C2_max = 0.0;
  for (long nd = 0; nd < node_count; ++nd) {
    double node_drop = 0.0, p_loc = 0.0, p_glob = 0.0, c2 = 0.0;
    for (size_t ai = 0; ai < coef_alphas.size(); ++ai) {
      double& c = coeffs[nd][ai];
      if (c == 0.0) continue;
      double contrib = std::abs(c);
      for (Index i = 0; i < d; ++i)
        contrib *= std::pow(rho_i[i], coef_alphas[ai][i]);
      const int o = alpha_order(coef_alphas[ai]);
      if (o > 0 && contrib + node_drop <= drop_cap / (double)coef_alphas.size()) {
        node_drop += contrib;
        c = 0.0;
        continue;
      }
      p_loc += contrib;
      p_glob += std::abs(c);
      if (o >= 2) c2 += std::abs(c) * (o - 1);
    }
    dropped_mass = std::max(dropped_mass, node_drop);
    P_loc_max = std::max(P_loc_max, p_loc);
    P_glob_max = std::max(P_glob_max, p_glob);
    C2_max = std::max(C2_max, c2);
  }
  cert.remainder_bound += dropped_mass * active;

  // Gadget accuracy ledger: the partition quarter covers hat trees and the
  // blend product, the monomial quarter covers the polynomial trees.
  const double eps_outer =
      mul_eps_for_delivered(epsilon / (8.0 * active), std::max(1.25, 1.05 * P_loc_max));
  const MulConfig outer_cfg{eps_outer, std::max(1.25, 1.05 * P_loc_max)};
  const double tree_gadgets = std::max<double>(1, dloc - 1);
  const MulConfig inner_cfg{
      mul_eps_for_delivered(epsilon / (8.0 * active * tree_gadgets * 1.1 *
                                       std::max(1.0, P_loc_max)),
                            1.25),
      1.25};
  MulConfig mono_cfg{0.5, 1.25};
  if (C2_max > 0.0)
    mono_cfg.epsilon = mul_eps_for_delivered(
        epsilon / (4.0 * 1.05 * active * 1.1 * C2_max), 1.25);

  std::vector<Network> terms;
  terms.reserve((size_t)node_count);
  for (long nd = 0; nd < node_count; ++nd) {
    const Vec& c = centers[nd];
    // polynomial net: affine part plus monomial trees
    NetBuilder aff(d);
    aff.begin_layer(1);
    double bias = 0.0;
    bool any = false, nonconst = false;
    for (size_t ai = 0; ai < coef_alphas.size(); ++ai) {
      const double cv = coeffs[nd][ai];
      if (cv == 0.0) continue;
      const int o = alpha_order(coef_alphas[ai]);
      any = true;
      if (o == 0) {
        bias += cv;
      } else if (o == 1) {
        nonconst = true;
        for (Index i = 0; i < d; ++i)
          if (coef_alphas[ai][i] == 1) {
            aff.add_entry(0, i, cv);
            bias -= cv * c[i];
          }
      }
    }
    if (!any) continue;  // node contributes nothing
    aff.add_bias(0, bias);
    std::vector<Network> pparts;
    pparts.push_back(aff.finish());
    for (size_t ai = 0; ai < coef_alphas.size(); ++ai) {
      const double cv = coeffs[nd][ai];
      const int o = alpha_order(coef_alphas[ai]);
      if (cv == 0.0 || o < 2) continue;
      nonconst = true;
      std::vector<Network> leaves;
      for (Index i = 0; i < d; ++i)
        for (int rep = 0; rep < coef_alphas[ai][i]; ++rep)
          leaves.push_back(factor_net(d, i, c[i]));
      pparts.push_back(scale_output(mul_tree(std::move(leaves), mono_cfg), cv));
    }
    Network pnet = pparts.size() == 1 ? std::move(pparts[0]) : sum_many(pparts);

    if (dloc == 0) {
      terms.push_back(std::move(pnet));
      continue;
    }
    std::vector<Network> hats;
    std::vector<long> n_act(dloc), m_act(dloc);
    for (Index j = 0; j < dloc; ++j) {
      n_act[j] = n[axes[j]];
      m_act[j] = node_m[nd][j];
      hats.push_back(hat_net(d, axes[j], n_act[j], m_act[j]));
    }
    Network phi = dloc == 1 ? std::move(hats[0])
                            : mul_tree(std::move(hats), inner_cfg);
    if (!nonconst) {
      // constant polynomial: scaling the blend is exact, no gadget needed
      terms.push_back(scale_output(std::move(phi), bias));
      continue;
    }
    const double cap = 1.05 * P_glob_max + 1e-9;
    Network gp = gated(gate_net(d, axes, n_act, m_act), pnet, cap);
    terms.push_back(multiply_nets(phi, gp, outer_cfg));
  }

  Network fhat = terms.empty() ? constant_net(d, 0.0) : sum_many(terms);

  bool unit_box = true;
  for (Index i = 0; i < d; ++i)
    if (ut.lo[i] != 0.0 || ut.len[i] != 1.0) unit_box = false;
  Network net = std::move(fhat);
  if (!unit_box) {
    NetBuilder pre(d);
    pre.begin_layer(d);
    for (Index i = 0; i < d; ++i) {
      pre.add_entry(i, i, 1.0 / ut.len[i]);
      pre.add_bias(i, -ut.lo[i] / ut.len[i]);
    }
    net = sparse_concat(net, pre.finish());
  }
  cert.size = size(net);
  return {std::move(net), cert};
}

Network approx_univariate_library(const std::string& name, double lo, double hi,
                                  double epsilon) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
    throw ConfigError("univariate library needs a finite ordered domain");
  const bool neg = (name == "exp_neg");
  if (!neg && name != "exp")
    throw ConfigError("unknown univariate target '" + name + "'");
  auto value = [neg](double t) { return neg ? std::exp(-t) : std::exp(t); };
  if (lo == hi) return constant_net(1, value(lo));

  SmoothTarget t;
  t.dim = 1;
  t.lo = Vec::Constant(1, lo);
  t.hi = Vec::Constant(1, hi);
  t.evaluator = [value](const Vec& x) { return value(x[0]); };
  t.k = 3;
  t.norm_bound = neg ? std::exp(-lo) : std::exp(hi);
  t.derivative_oracle = [neg, value](const Vec& x, const MultiIndex& a) {
    const double sgn = (neg && a[0] % 2 == 1) ? -1.0 : 1.0;
    return sgn * value(x[0]);
  };
  t.oracle_order = 6;
  return approx_smooth(t, epsilon).first;
}

}  // namespace rtn
