#pragma once

#include <Eigen/Dense>

#include <vector>

namespace netmark {

/// One weighted influence link: `src` is influenced by `dst`, so the
/// Laplacian picks up L(src, dst) = -weight. Node indices are 1-based.
struct Edge {
  int src = 0;
  int dst = 0;
  double weight = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct GraphSpec {
  int n_nodes = 0;
  std::vector<Edge> edges;
};

/// Throws std::invalid_argument naming the offending edge on out-of-range
/// indices, self-loops, non-positive weights, or duplicate (src, dst) pairs.
void validate(const GraphSpec& spec);

/// Row n: diagonal = total in-weight of node n, off-diagonal -w per edge.
/// Every row sums to zero by construction; nodes without incoming influence
/// produce zero rows.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> build_laplacian(
    const GraphSpec& spec) {
  validate(spec);
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat lap = Mat::Zero(spec.n_nodes, spec.n_nodes);
  for (const Edge& e : spec.edges) {
    lap(e.src - 1, e.dst - 1) -= Scalar(e.weight);
    lap(e.src - 1, e.src - 1) += Scalar(e.weight);
  }
  return lap;
}

/// Benchmark family: blocks of five nodes with a fixed intra-block pattern
/// (eight unit-weight links), consecutive blocks coupled pairwise with a
/// weight-1 forward link and a weight-4 backward link, so earlier blocks
/// dominate. n_nodes must be a positive multiple of 5.
GraphSpec cascading_benchmark(int n_nodes);

/// True iff every node reaches every other along stored (src -> dst) arcs.
/// The verdict is invariant under reversing all arcs, so it does not depend
/// on which end of an edge is read as the influencer.
bool is_strongly_connected(const GraphSpec& spec);

/// True iff the graph is connected when arc direction is ignored.
bool is_weakly_connected(const GraphSpec& spec);

}  // namespace netmark
