#include "rtn/quadnet.hpp"

#include <cmath>

namespace rtn {

Network indicator_net(long i, long N, double T, Index input_dim) {
  if (i < 0 || i >= N) throw ContractError("indicator index out of range");
  if (input_dim < 1) throw ContractError("indicator needs a time input");
  const double ti = (double)i * T / (double)N;
  const double tip = (double)(i + 1) * T / (double)N;
  NetBuilder nb(input_dim);
  nb.begin_layer(1);
  nb.add_entry(0, 0, 1.0);  // relu(t), t >= 0 on the working domain
  nb.begin_layer(2);
  nb.add_entry(0, input_dim, 1.0);
  nb.add_bias(0, -ti);
  nb.add_entry(1, input_dim, 1.0);
  nb.add_bias(1, -tip);
  nb.begin_layer(1);
  nb.add_entry(0, input_dim + 1, (double)N / T);
  nb.add_entry(0, input_dim + 2, -(double)N / T);
  return nb.finish();
}

Network shift_net(const Network& phi, long i, long N, double T) {
  if (i < 0 || i >= N) throw ContractError("shift index out of range");
  const double ti = (double)i * T / (double)N;
  const Index d = phi.input_dim;
  // Two-layer freeze net: a zero hidden row keeps the depth at 2 without
  // costing weights, the affine layer emits (t_i, x_2..x_d) via input skips.
  NetBuilder nb(d);
  nb.begin_layer(1);
  nb.begin_layer(d);
  nb.add_bias(0, ti);
  for (Index j = 1; j < d; ++j) nb.add_entry(j, j, 1.0);
  return sparse_concat(phi, nb.finish());
}

Network clip_net(const Network& phi, long i, long N, double T, double a_bar) {
  if (a_bar < 0.0) throw ContractError("clip amplitude must be nonnegative");
  if (a_bar == 0.0 && weight_count(phi) > 0)
    throw ContractError("clip amplitude zero for a nonzero network");
  NetBuilder head(2);
  head.begin_layer(2);
  head.add_entry(0, 0, 2.0 * a_bar);
  head.add_entry(0, 1, 1.0);
  head.add_bias(0, -a_bar);
  head.add_entry(1, 0, 2.0 * a_bar);
  head.add_bias(1, -a_bar);
  head.begin_layer(1);
  head.add_entry(0, 2, 1.0);
  head.add_entry(0, 3, -1.0);
  return sparse_concat(
      head.finish(),
      parallelize({indicator_net(i, N, T, phi.input_dim), shift_net(phi, i, N, T)}));
}

std::pair<Network, RiemannNetCertificate> riemann_net(const Network& phi, long N,
                                                      double T, double a_bar) {
  if (N < 1) throw ContractError("riemann_net needs N >= 1");
  std::vector<Network> clips;
  clips.reserve(N);
  for (long i = 0; i < N; ++i) clips.push_back(clip_net(phi, i, N, T, a_bar));
  Network par = parallelize(clips);
  NetBuilder mean(N);
  mean.begin_layer(1);
  for (long i = 0; i < N; ++i) mean.add_entry(0, i, 1.0 / (double)N);
  Network out = sparse_concat(mean.finish(), par);
  RiemannNetCertificate cert;
  cert.N = N;
  cert.a_bar = a_bar;
  cert.c3 = 3.0 * a_bar;
  cert.T = T;
  return {std::move(out), cert};
}

double left_riemann_paper(const TimeSliceFn& f, long N, double T, double t,
                          const Vec& x) {
  if (N < 1) throw ContractError("left_riemann needs N >= 1");
  double sum = 0.0;
  for (long i = 0; i < N; ++i) {
    const double ti = (double)i * T / (double)N;
    if (ti < t) sum += f(ti, x);
  }
  return sum / (double)N;
}

double left_riemann(const TimeSliceFn& f, long N, double T, double t, const Vec& x) {
  return T * left_riemann_paper(f, N, T, t, x);
}

}  // namespace rtn
