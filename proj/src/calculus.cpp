#include "rtn/calculus.hpp"

#include <cmath>
#include <map>

namespace rtn {

namespace {

// Column block layout of a network's layer l: block 0 is the input, block j
// (j >= 1) is the output of layer j-1.
Index block_start(const Network& net, Index block) {
  Index s = net.input_dim;
  for (Index j = 1; j < block; ++j) s += net.layers[j - 1].rows();
  return block == 0 ? 0 : s;
}

Index block_of_column(const Network& net, Index layer, Index col, Index* rel) {
  Index start = 0, width = net.input_dim;
  Index block = 0;
  while (col >= start + width) {
    start += width;
    ++block;
    width = net.layers[block - 1].rows();
    (void)layer;
  }
  *rel = col - start;
  return block;
}

void copy_layer_verbatim(NetBuilder& nb, const AffineMap& m) {
  nb.begin_layer(m.rows());
  for (Index c = 0; c < m.weights.outerSize(); ++c)
    for (SparseMat::InnerIterator it(m.weights, c); it; ++it)
      nb.add_entry(it.row(), c, it.value());
  for (Index r = 0; r < m.bias.size(); ++r) nb.add_bias(r, m.bias[r]);
}

}  // namespace

Network sparse_concat(const Network& phi1, const Network& phi2) {
  if (phi1.input_dim != phi2.output_dim())
    throw DimensionError("sparse_concat: input of first operand (" +
                         std::to_string(phi1.input_dim) +
                         ") must equal output of second (" +
                         std::to_string(phi2.output_dim()) + ")");
  const Index d1 = phi1.input_dim;
  const Index L2 = phi2.depth();
  NetBuilder nb(phi2.input_dim);

  // Composite column offset of each composite layer's output block.
  std::vector<Index> off;
  off.push_back(0);  // placeholder for the input block
  Index cursor = phi2.input_dim;

  for (Index l = 0; l + 1 < L2; ++l) {
    copy_layer_verbatim(nb, phi2.layers[l]);
    off.push_back(cursor);
    cursor += phi2.layers[l].rows();
  }

  // Last layer of phi2 becomes a hidden layer emitting (relu(y), relu(-y)).
  const AffineMap& tail = phi2.layers[L2 - 1];
  nb.begin_layer(2 * d1);
  for (Index c = 0; c < tail.weights.outerSize(); ++c)
    for (SparseMat::InnerIterator it(tail.weights, c); it; ++it) {
      nb.add_entry(it.row(), c, it.value());
      nb.add_entry(it.row() + d1, c, -it.value());
    }
  for (Index r = 0; r < tail.bias.size(); ++r) {
    nb.add_bias(r, tail.bias[r]);
    nb.add_bias(r + d1, -tail.bias[r]);
  }
  const Index dup_off = cursor;
  cursor += 2 * d1;

  std::vector<Index> phi1_layer_off;  // composite column offset of phi1 layer j
  for (Index l = 0; l < phi1.depth(); ++l) {
    const AffineMap& m = phi1.layers[l];
    nb.begin_layer(m.rows());
    for (Index c = 0; c < m.weights.outerSize(); ++c)
      for (SparseMat::InnerIterator it(m.weights, c); it; ++it) {
        Index rel;
        const Index b = block_of_column(phi1, l, c, &rel);
        if (b == 0) {
          nb.add_entry(it.row(), dup_off + rel, it.value());
          nb.add_entry(it.row(), dup_off + d1 + rel, -it.value());
        } else {
          nb.add_entry(it.row(), phi1_layer_off[b - 1] + rel, it.value());
        }
      }
    for (Index r = 0; r < m.bias.size(); ++r) nb.add_bias(r, m.bias[r]);
    phi1_layer_off.push_back(cursor);
    cursor += m.rows();
  }
  return nb.finish();
}

Network parallelize(const std::vector<Network>& phis) {
  if (phis.empty()) throw ContractError("parallelize: empty list");
  const Index d = phis[0].input_dim;
  Index L = 0;
  for (const Network& p : phis) {
    if (p.input_dim != d)
      throw DimensionError("parallelize: mismatched input dimensions");
    L = std::max(L, p.depth());
  }
  const Index n = static_cast<Index>(phis.size());

  // participates(i, l): net i contributes a hidden layer at composite depth l.
  auto hidden_rows = [&](Index i, Index l) -> Index {
    return (l <= phis[i].depth() - 1) ? phis[i].layers[l - 1].rows() : 0;
  };

  // Column offset of composite layer l's output block, and of net i within it.
  std::vector<Index> comp_off(L, 0);
  std::vector<std::vector<Index>> net_off(L, std::vector<Index>(n, 0));
  Index cursor = d;
  for (Index l = 1; l < L; ++l) {
    comp_off[l] = cursor;
    Index within = 0;
    for (Index i = 0; i < n; ++i) {
      net_off[l][i] = within;
      within += hidden_rows(i, l);
    }
    cursor += within;
  }

  auto place = [&](NetBuilder& nb, Index i, const AffineMap& m, Index row_off) {
    for (Index c = 0; c < m.weights.outerSize(); ++c)
      for (SparseMat::InnerIterator it(m.weights, c); it; ++it) {
        Index rel;
        const Index b = block_of_column(phis[i], 0, c, &rel);
        const Index col = (b == 0) ? rel : comp_off[b] + net_off[b][i] + rel;
        nb.add_entry(row_off + it.row(), col, it.value());
      }
    for (Index r = 0; r < m.bias.size(); ++r) nb.add_bias(row_off + r, m.bias[r]);
  };

  NetBuilder nb(d);
  for (Index l = 1; l < L; ++l) {
    Index rows = 0;
    for (Index i = 0; i < n; ++i) rows += hidden_rows(i, l);
    nb.begin_layer(rows);
    for (Index i = 0; i < n; ++i)
      if (hidden_rows(i, l) > 0) place(nb, i, phis[i].layers[l - 1], net_off[l][i]);
  }
  Index out_rows = 0;
  for (const Network& p : phis) out_rows += p.output_dim();
  nb.begin_layer(out_rows);
  Index row_off = 0;
  for (Index i = 0; i < n; ++i) {
    place(nb, i, phis[i].layers[phis[i].depth() - 1], row_off);
    row_off += phis[i].output_dim();
  }
  return nb.finish();
}

namespace {

Network fold_output_sum(Network par) {
  AffineMap& last = par.layers.back();
  std::map<Index, double> row;
  for (Index c = 0; c < last.weights.outerSize(); ++c)
    for (SparseMat::InnerIterator it(last.weights, c); it; ++it) row[c] += it.value();
  SparseMat folded(1, last.cols());
  std::vector<Eigen::Triplet<double>> trips;
  for (auto& [c, v] : row)
    if (v != 0.0) trips.emplace_back(0, static_cast<int>(c), v);
  folded.setFromTriplets(trips.begin(), trips.end());
  double b = last.bias.sum();
  last.weights = std::move(folded);
  last.bias = Vec::Constant(1, b == 0.0 ? 0.0 : b);
  par.uid = next_net_uid();
  validate(par);
  return par;
}

}  // namespace

Network sum_many(const std::vector<Network>& phis) {
  for (const Network& p : phis)
    if (p.output_dim() != 1)
      throw ContractError("sum requires one-dimensional outputs");
  if (phis.size() == 1) return phis[0];
  return fold_output_sum(parallelize(phis));
}

Network sum_nets(const Network& phi1, const Network& phi2) {
  return sum_many({phi1, phi2});
}

MulGadgetInfo multiplier_info(const MulConfig& cfg) {
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0))
    throw ConfigError("multiplication accuracy must lie in (0,1)");
  if (!(cfg.bound_M > 0.0)) throw ConfigError("bound_M must be positive");
  const double M = cfg.bound_M;
  const double eps_sq = cfg.epsilon / (12.0 * M * M);
  MulGadgetInfo info;
  info.stages = std::max<long>(1, (long)std::ceil(std::log2(1.0 / eps_sq)));
  info.delivered = 6.0 * M * M * std::pow(2.0, -2.0 * (double)info.stages - 2.0);
  info.gadget_depth = info.stages + 2;
  // 8 abs entries, first stage 3x(2 entries)+2 biases per branch, later
  // stages 3x3 entries + 2 biases, output row 6 + 9 per stage.
  info.gadget_weights = 8 + 3 * (6 + 2) + (info.stages - 1) * 3 * (9 + 2) + 6 +
                        9 * info.stages;
  return info;
}

Network multiplier_gadget(const MulConfig& cfg) {
  const MulGadgetInfo info = multiplier_info(cfg);
  const long m = info.stages;
  const double M = cfg.bound_M;
  NetBuilder nb(2);

  // abs layer: relu(+-(u+v)), relu(+-u), relu(+-v)
  nb.begin_layer(6);
  nb.add_entry(0, 0, 1.0);
  nb.add_entry(0, 1, 1.0);
  nb.add_entry(1, 0, -1.0);
  nb.add_entry(1, 1, -1.0);
  nb.add_entry(2, 0, 1.0);
  nb.add_entry(3, 0, -1.0);
  nb.add_entry(4, 1, 1.0);
  nb.add_entry(5, 1, -1.0);
  const Index abs_off = 2;

  // sawtooth stages, three branches of three units each
  Index prev_off = abs_off;
  Index stage_off = abs_off + 6;
  std::vector<Index> stage_offs;
  for (long s = 1; s <= m; ++s) {
    nb.begin_layer(9);
    for (int br = 0; br < 3; ++br) {
      for (int u = 0; u < 3; ++u) {
        const Index r = 3 * br + u;
        if (s == 1) {
          const double w = 1.0 / (2.0 * M);
          nb.add_entry(r, prev_off + 2 * br + 0, w);
          nb.add_entry(r, prev_off + 2 * br + 1, w);
        } else {
          nb.add_entry(r, prev_off + 3 * br + 0, 2.0);
          nb.add_entry(r, prev_off + 3 * br + 1, -4.0);
          nb.add_entry(r, prev_off + 3 * br + 2, 2.0);
        }
        if (u == 1) nb.add_bias(r, -0.5);
        if (u == 2) nb.add_bias(r, -1.0);
      }
    }
    stage_offs.push_back(stage_off);
    prev_off = stage_off;
    stage_off += 9;
  }

  // output: 2M^2 (f(|u+v|/2M) - f(|u|/2M) - f(|v|/2M)), f = z - sum g_s/4^s
  nb.begin_layer(1);
  const double sgn[3] = {1.0, -1.0, -1.0};
  for (int br = 0; br < 3; ++br) {
    nb.add_entry(0, abs_off + 2 * br + 0, sgn[br] * M);
    nb.add_entry(0, abs_off + 2 * br + 1, sgn[br] * M);
  }
  double pw = 1.0;
  for (long s = 1; s <= m; ++s) {
    pw *= 0.25;
    for (int br = 0; br < 3; ++br) {
      const double c = -sgn[br] * 2.0 * M * M * pw;
      nb.add_entry(0, stage_offs[s - 1] + 3 * br + 0, 2.0 * c);
      nb.add_entry(0, stage_offs[s - 1] + 3 * br + 1, -4.0 * c);
      nb.add_entry(0, stage_offs[s - 1] + 3 * br + 2, 2.0 * c);
    }
  }
  return nb.finish();
}

Network multiply_nets(const Network& phi1, const Network& phi2,
                      const MulConfig& cfg) {
  if (phi1.output_dim() != 1 || phi2.output_dim() != 1)
    throw ContractError("multiply_nets requires scalar outputs");
  if (phi1.input_dim != phi2.input_dim)
    throw DimensionError("multiply_nets: mismatched input dimensions");
  return sparse_concat(multiplier_gadget(cfg), parallelize({phi1, phi2}));
}

double mul_eps_for_delivered(double target, double bound_M) {
  const double M = bound_M;
  if (!(target > 0.0)) throw ConfigError("delivered target must be positive");
  long m = (long)std::ceil(0.5 * std::log2(6.0 * M * M / target));
  m = std::max<long>(1, m);
  const double eps = 12.0 * M * M * std::pow(2.0, -(double)m);
  if (eps >= 1.0 || eps <= 0.0) return std::min(0.9, target);
  return eps;
}

Network selector_net(Index input_dim, Index begin, Index end) {
  if (begin < 0 || end > input_dim || begin >= end)
    throw ContractError("selector range out of bounds");
  NetBuilder nb(input_dim);
  nb.begin_layer(end - begin);
  for (Index i = begin; i < end; ++i) nb.add_entry(i - begin, i, 1.0);
  return nb.finish();
}

Network const_shift_net(Index input_dim, const Eigen::MatrixXd& A, const Vec& b) {
  if (A.cols() != input_dim)
    throw DimensionError("const_shift_net: matrix columns must equal input_dim");
  return affine_net(A, b);
}

}  // namespace rtn
