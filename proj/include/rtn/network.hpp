#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <stdexcept>
#include <string>
#include <vector>

// Exact data model for ReLU networks with skip connections. A network with
// input dimension d is a sequence of affine maps; layer l reads the
// concatenation of the input and all previous hidden outputs, so its matrix
// has d + sum of previous layer widths columns. Every layer except the last
// is followed by a componentwise ReLU. Weight counts are the number of
// stored nonzeros, which is why the matrices are kept in sparse triplet form.

namespace rtn {

using Index = Eigen::Index;
using SparseMat = Eigen::SparseMatrix<double>;  // column major
using Vec = Eigen::VectorXd;

struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ContractError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, long line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        offset(line) {}
  long offset;  // 1-based line number in the input stream
};

// One affine map A x + b together with the block structure of its columns.
// prior_widths lists the widths of the blocks the columns are split into:
// the input dimension followed by the widths of all previous layers.
struct AffineMap {
  SparseMat weights;                // rows x cols, no explicit zeros stored
  Vec bias;                        // length rows; zeros are not counted
  std::vector<Index> prior_widths;  // sums to cols

  Index rows() const { return weights.rows(); }
  Index cols() const { return weights.cols(); }
};

struct Network {
  Index input_dim = 0;
  std::vector<AffineMap> layers;
  long uid = 0;  // stamped at construction, identifies structure for eval caches

  Index depth() const { return static_cast<Index>(layers.size()); }
  Index output_dim() const { return layers.back().rows(); }
};

long next_net_uid();

struct SizeReport {
  long layers = 0;
  long weights = 0;
  long neurons = 0;
};

long nonzero_count(const Vec& v);

// Checks the telescoping block structure and the no-stored-zero invariant;
// throws ContractError on violation. Called by the builder, cheap enough to
// call from tests as well.
void validate(const Network& net);

SizeReport size(const Network& net);
long weight_count(const Network& net);

// Scratch space for realize so hot loops do not reallocate. The evaluator
// propagates only nonzero state entries: a hidden row is visited when an
// active unit writes into it or its bias is positive, so units that are
// exactly zero cost nothing. Networks seen by a workspace are assumed
// immutable and must outlive it.
struct RealizeWorkspace {
  std::vector<double> state;
  std::vector<Index> active;
  std::vector<double> acc;
  std::vector<Index> touched;
  std::vector<long> stamp;
  long epoch = 0;
  struct NetCache {
    long uid = 0;
    std::vector<std::vector<Index>> pos_bias;  // per layer: rows with bias > 0
    Index total_units = 0;
    Index max_rows = 0;
  };
  std::vector<NetCache> caches;
};

Vec realize(const Network& net, const Eigen::Ref<const Vec>& x,
            RealizeWorkspace& ws);
Vec realize(const Network& net, const Eigen::Ref<const Vec>& x);

// Incremental construction helper. add_entry ignores exact zeros so the
// stored-nonzero invariant holds by construction; duplicate (row,col) pairs
// are summed and pruned if they cancel.
class NetBuilder {
 public:
  explicit NetBuilder(Index input_dim);

  // Starts layer l; prior widths are derived from what was added before.
  void begin_layer(Index rows);
  void add_entry(Index row, Index col, double value);
  void add_bias(Index row, double value);

  Index current_cols() const { return cols_; }
  Network finish();

 private:
  Index input_dim_;
  Index cols_ = 0;
  Index rows_ = -1;
  std::vector<Index> widths_;
  std::vector<Eigen::Triplet<double>> trips_;
  std::vector<std::pair<Index, double>> bias_;
  Network net_;
  void flush_layer();
};

// Small exact nets used throughout the composition calculus.
Network identity_net(Index dim);                    // one affine layer, W = dim
Network constant_net(Index input_dim, double value);  // ignores its input
Network affine_net(const Eigen::MatrixXd& A, const Vec& b);
Network affine_net_sparse(Index rows, Index cols,
                          const std::vector<Eigen::Triplet<double>>& entries,
                          const std::vector<std::pair<Index, double>>& bias);

// Multiplies the final affine layer (matrix and bias) by c. Exact, does not
// change depth; entries that become zero are dropped from the count.
Network scale_output(Network net, double c);

// Text serialization, version tag "relunet-v1". Values are printed with 17
// significant digits so the round trip is bit faithful.
std::string serialize(const Network& net);
Network deserialize(const std::string& text);

}  // namespace rtn
