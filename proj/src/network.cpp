#include "rtn/network.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <sstream>

namespace rtn {

long nonzero_count(const Vec& v) {
  long n = 0;
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) ++n;
  return n;
}

void validate(const Network& net) {
  if (net.input_dim < 1) throw ContractError("network input dimension must be >= 1");
  if (net.layers.empty()) throw ContractError("network must have at least one layer");
  Index cols = net.input_dim;
  for (size_t l = 0; l < net.layers.size(); ++l) {
    const AffineMap& m = net.layers[l];
    if (m.rows() < 1) throw ContractError("layer has no rows");
    if (m.cols() != cols)
      throw ContractError("layer " + std::to_string(l) + " has " +
                          std::to_string(m.cols()) + " columns, expected " +
                          std::to_string(cols));
    if (m.bias.size() != m.rows())
      throw ContractError("bias length does not match layer rows");
    Index wsum = std::accumulate(m.prior_widths.begin(), m.prior_widths.end(), Index(0));
    if (wsum != cols || m.prior_widths.size() != l + 1)
      throw ContractError("prior width list does not telescope");
    for (Index c = 0; c < m.weights.outerSize(); ++c)
      for (SparseMat::InnerIterator it(m.weights, c); it; ++it)
        if (it.value() == 0.0)
          throw ContractError("stored zero weight violates sparsity invariant");
    cols += m.rows();
  }
}

SizeReport size(const Network& net) {
  SizeReport r;
  r.layers = static_cast<long>(net.layers.size());
  r.neurons = static_cast<long>(net.input_dim);
  for (const AffineMap& m : net.layers) {
    r.weights += static_cast<long>(m.weights.nonZeros()) + nonzero_count(m.bias);
    r.neurons += static_cast<long>(m.rows());
  }
  return r;
}

long weight_count(const Network& net) { return size(net).weights; }

long next_net_uid() {
  static std::atomic<long> counter{0};
  return ++counter;
}

namespace {

RealizeWorkspace::NetCache build_cache(const Network& net) {
  RealizeWorkspace::NetCache c;
  c.uid = net.uid;
  c.total_units = net.input_dim;
  for (const AffineMap& m : net.layers) {
    std::vector<Index> pos;
    for (Index r = 0; r < m.bias.size(); ++r)
      if (m.bias[r] > 0.0) pos.push_back(r);
    c.pos_bias.push_back(std::move(pos));
    c.total_units += m.rows();
    c.max_rows = std::max(c.max_rows, m.rows());
  }
  return c;
}

const RealizeWorkspace::NetCache& eval_cache(const Network& net,
                                             RealizeWorkspace& ws) {
  if (net.uid != 0)
    for (const auto& c : ws.caches)
      if (c.uid == net.uid) return c;
  if (ws.caches.size() >= 8) ws.caches.erase(ws.caches.begin());
  ws.caches.push_back(build_cache(net));
  return ws.caches.back();
}

}  // namespace

Vec realize(const Network& net, const Eigen::Ref<const Vec>& x,
            RealizeWorkspace& ws) {
  if (x.size() != net.input_dim)
    throw DimensionError("realize: expected input of length " +
                         std::to_string(net.input_dim) + ", got " +
                         std::to_string(x.size()));
  const auto& cache = eval_cache(net, ws);
  if ((Index)ws.state.size() < cache.total_units) ws.state.resize(cache.total_units);
  if ((Index)ws.acc.size() < cache.max_rows) {
    ws.acc.resize(cache.max_rows);
    ws.stamp.resize(cache.max_rows, 0);
  }
  ws.active.clear();
  ws.touched.clear();

  for (Index i = 0; i < net.input_dim; ++i) {
    ws.state[i] = x[i];
    if (x[i] != 0.0) ws.active.push_back(i);
  }

  const Index L = net.depth();
  Index offset = net.input_dim;
  for (Index l = 0; l < L; ++l) {
    const AffineMap& m = net.layers[l];
    const bool last = (l == L - 1);
    ++ws.epoch;
    const long ep = ws.epoch;
    ws.touched.clear();
    for (Index j : ws.active) {
      const double xj = ws.state[j];
      for (SparseMat::InnerIterator it(m.weights, j); it; ++it) {
        const Index r = it.row();
        if (ws.stamp[r] != ep) {
          ws.stamp[r] = ep;
          ws.acc[r] = 0.0;
          ws.touched.push_back(r);
        }
        ws.acc[r] += it.value() * xj;
      }
    }
    if (last) {
      Vec out = m.bias;
      for (Index r : ws.touched) out[r] += ws.acc[r];
      return out;
    }
    // Rows never written stay at relu(bias); only positive biases matter.
    for (Index r : ws.touched) {
      const double v = ws.acc[r] + m.bias[r];
      if (v > 0.0) {
        ws.state[offset + r] = v;
        ws.active.push_back(offset + r);
      }
    }
    for (Index r : cache.pos_bias[l]) {
      if (ws.stamp[r] != ep) {
        ws.state[offset + r] = m.bias[r];
        ws.active.push_back(offset + r);
      }
    }
    offset += m.rows();
  }
  return Vec();  // unreachable, depth >= 1
}

Vec realize(const Network& net, const Eigen::Ref<const Vec>& x) {
  RealizeWorkspace ws;
  return realize(net, x, ws);
}

NetBuilder::NetBuilder(Index input_dim) : input_dim_(input_dim), cols_(input_dim) {
  net_.input_dim = input_dim;
  widths_.push_back(input_dim);
}

void NetBuilder::begin_layer(Index rows) {
  if (rows_ >= 0) flush_layer();
  rows_ = rows;
}

void NetBuilder::add_entry(Index row, Index col, double value) {
  if (value == 0.0) return;
  if (row < 0 || row >= rows_ || col < 0 || col >= cols_)
    throw ContractError("builder entry out of range");
  trips_.emplace_back(static_cast<int>(row), static_cast<int>(col), value);
}

void NetBuilder::add_bias(Index row, double value) {
  if (value == 0.0) return;
  if (row < 0 || row >= rows_) throw ContractError("builder bias out of range");
  bias_.emplace_back(row, value);
}

void NetBuilder::flush_layer() {
  AffineMap m;
  m.weights.resize(rows_, cols_);
  m.weights.setFromTriplets(trips_.begin(), trips_.end());
  m.weights.prune(0.0, 0.0);
  m.bias = Vec::Zero(rows_);
  for (auto& [r, v] : bias_) m.bias[r] += v;
  m.prior_widths = widths_;
  net_.layers.push_back(std::move(m));
  widths_.push_back(rows_);
  cols_ += rows_;
  rows_ = -1;
  trips_.clear();
  bias_.clear();
}

Network NetBuilder::finish() {
  if (rows_ >= 0) flush_layer();
  net_.uid = next_net_uid();
  validate(net_);
  return std::move(net_);
}

Network identity_net(Index dim) {
  NetBuilder b(dim);
  b.begin_layer(dim);
  for (Index i = 0; i < dim; ++i) b.add_entry(i, i, 1.0);
  return b.finish();
}

Network constant_net(Index input_dim, double value) {
  NetBuilder b(input_dim);
  b.begin_layer(1);
  b.add_bias(0, value);
  return b.finish();
}

Network affine_net(const Eigen::MatrixXd& A, const Vec& b) {
  NetBuilder nb(A.cols());
  nb.begin_layer(A.rows());
  for (Index r = 0; r < A.rows(); ++r) {
    for (Index c = 0; c < A.cols(); ++c) nb.add_entry(r, c, A(r, c));
    nb.add_bias(r, b[r]);
  }
  return nb.finish();
}

Network affine_net_sparse(Index rows, Index cols,
                          const std::vector<Eigen::Triplet<double>>& entries,
                          const std::vector<std::pair<Index, double>>& bias) {
  NetBuilder nb(cols);
  nb.begin_layer(rows);
  for (const auto& t : entries) nb.add_entry(t.row(), t.col(), t.value());
  for (const auto& [r, v] : bias) nb.add_bias(r, v);
  return nb.finish();
}

Network scale_output(Network net, double c) {
  AffineMap& last = net.layers.back();
  last.weights = last.weights * c;
  last.weights.prune(0.0, 0.0);
  last.bias *= c;
  net.uid = next_net_uid();
  return net;
}

std::string serialize(const Network& net) {
  std::string out;
  out.reserve(64 + 40 * static_cast<size_t>(weight_count(net)));
  char buf[64];
  auto line = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof buf, fmt, args...);
    out += buf;
    out += '\n';
  };
  out += "relunet-v1\n";
  line("input_dim %" PRIdPTR, static_cast<intptr_t>(net.input_dim));
  line("layer_count %zu", net.layers.size());
  for (const AffineMap& m : net.layers) {
    line("layer %" PRIdPTR " %zu", static_cast<intptr_t>(m.rows()),
         m.prior_widths.size());
    out += "priors";
    for (Index w : m.prior_widths) {
      std::snprintf(buf, sizeof buf, " %" PRIdPTR, static_cast<intptr_t>(w));
      out += buf;
    }
    out += '\n';
    line("triplets %" PRIdPTR, static_cast<intptr_t>(m.weights.nonZeros()));
    for (Index c = 0; c < m.weights.outerSize(); ++c)
      for (SparseMat::InnerIterator it(m.weights, c); it; ++it)
        line("%" PRIdPTR " %" PRIdPTR " %.17g", static_cast<intptr_t>(it.row()),
             static_cast<intptr_t>(c), it.value());
    line("bias %ld", nonzero_count(m.bias));
    for (Index i = 0; i < m.bias.size(); ++i)
      if (m.bias[i] != 0.0)
        line("%" PRIdPTR " %.17g", static_cast<intptr_t>(i), m.bias[i]);
  }
  out += "end\n";
  return out;
}

namespace {

struct LineReader {
  std::istringstream in;
  long line_no = 0;
  explicit LineReader(const std::string& s) : in(s) {}
  std::string next() {
    std::string s;
    if (!std::getline(in, s)) throw ParseError("unexpected end of stream", line_no);
    ++line_no;
    return s;
  }
};

long parse_long(const std::string& tok, LineReader& r) {
  try {
    size_t pos = 0;
    long v = std::stol(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected integer, got '" + tok + "'", r.line_no);
  }
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> toks;
  std::istringstream iss(s);
  std::string t;
  while (iss >> t) toks.push_back(t);
  return toks;
}

}  // namespace

Network deserialize(const std::string& text) {
  LineReader r(text);
  if (r.next() != "relunet-v1") throw ParseError("missing relunet-v1 tag", r.line_no);
  auto kv = split(r.next());
  if (kv.size() != 2 || kv[0] != "input_dim")
    throw ParseError("expected input_dim", r.line_no);
  const long d = parse_long(kv[1], r);
  if (d < 1) throw ParseError("input_dim must be positive", r.line_no);
  kv = split(r.next());
  if (kv.size() != 2 || kv[0] != "layer_count")
    throw ParseError("expected layer_count", r.line_no);
  const long L = parse_long(kv[1], r);
  if (L < 1) throw ParseError("layer_count must be at least 1", r.line_no);

  NetBuilder nb(d);
  for (long l = 0; l < L; ++l) {
    kv = split(r.next());
    if (kv.size() != 3 || kv[0] != "layer") throw ParseError("expected layer", r.line_no);
    const long rows = parse_long(kv[1], r);
    const long nblocks = parse_long(kv[2], r);
    if (rows < 1) throw ParseError("layer rows must be positive", r.line_no);
    if (nblocks != l + 1) throw ParseError("bad block count", r.line_no);
    kv = split(r.next());
    if (kv.empty() || kv[0] != "priors" || (long)kv.size() != nblocks + 1)
      throw ParseError("expected priors list", r.line_no);
    long wsum = 0;
    for (long i = 0; i < nblocks; ++i) wsum += parse_long(kv[i + 1], r);
    nb.begin_layer(rows);
    if (wsum != nb.current_cols())
      throw ParseError("prior widths do not telescope", r.line_no);
    kv = split(r.next());
    if (kv.size() != 2 || kv[0] != "triplets")
      throw ParseError("expected triplets", r.line_no);
    const long nnz = parse_long(kv[1], r);
    for (long i = 0; i < nnz; ++i) {
      kv = split(r.next());
      if (kv.size() != 3) throw ParseError("expected 'row col value'", r.line_no);
      const long rr = parse_long(kv[0], r), cc = parse_long(kv[1], r);
      char* endp = nullptr;
      const double v = std::strtod(kv[2].c_str(), &endp);
      if (endp == kv[2].c_str() || *endp != '\0' || !std::isfinite(v))
        throw ParseError("bad weight value '" + kv[2] + "'", r.line_no);
      if (v == 0.0) throw ParseError("stored zero weight", r.line_no);
      if (rr < 0 || rr >= rows || cc < 0 || cc >= nb.current_cols())
        throw ParseError("triplet index out of range", r.line_no);
      nb.add_entry(rr, cc, v);
    }
    kv = split(r.next());
    if (kv.size() != 2 || kv[0] != "bias") throw ParseError("expected bias", r.line_no);
    const long nb_bias = parse_long(kv[1], r);
    for (long i = 0; i < nb_bias; ++i) {
      kv = split(r.next());
      if (kv.size() != 2) throw ParseError("expected 'index value'", r.line_no);
      const long rr = parse_long(kv[0], r);
      char* endp = nullptr;
      const double v = std::strtod(kv[1].c_str(), &endp);
      if (endp == kv[1].c_str() || *endp != '\0' || !std::isfinite(v))
        throw ParseError("bad bias value '" + kv[1] + "'", r.line_no);
      if (v == 0.0) throw ParseError("stored zero bias", r.line_no);
      if (rr < 0 || rr >= rows) throw ParseError("bias index out of range", r.line_no);
      nb.add_bias(rr, v);
    }
  }
  if (r.next() != "end") throw ParseError("expected end tag", r.line_no);
  return nb.finish();
}

}  // namespace rtn
