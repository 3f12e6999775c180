#pragma once

// Brute-force graph oracle for the quotient metric.
//
// Nodes sit at spacing h along every gluing locus (both sides, joined by
// zero-length edges) plus the two query points. Nodes of one piece form a
// complete graph weighted by the piece's intrinsic distance. Shortest paths
// in this graph only overestimate the true distance; the overestimate comes
// from rounding crossing points to the node spacing.

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "roundforge/sampling.hpp"
#include "roundforge/space.hpp"

namespace roundforge {

struct OracleOptions {
  double h = 0.02;
  bool allow_high_dim = false;
  int node_budget = 20000;
};

class OracleGraph {
 public:
  OracleGraph(const SpaceExpr& expr, OracleOptions opts);

  double distance(const PointRef& x, const PointRef& y) const;
  int node_count() const { return static_cast<int>(nodes_.size()); }
  double h() const { return opts_.h; }

 private:
  struct Node {
    PointRef point;
    int slot = 0;  // index within its piece
    std::vector<int> twins;
  };

  void add_identified(const PointRef& a, const PointRef& b);
  int add_node(const PointRef& p);

  const SpaceExpr& expr_;
  OracleOptions opts_;
  std::vector<Node> nodes_;
  std::vector<std::vector<int>> piece_nodes_;
  std::vector<Eigen::MatrixXd> weights_;
};

double oracle_distance(const SpaceExpr& expr, const PointRef& x, const PointRef& y, double h,
                       OracleOptions opts = {});

std::vector<double> oracle_batch(const SpaceExpr& expr,
                                 const std::vector<std::pair<PointRef, PointRef>>& pairs, double h,
                                 ExecutionPolicy policy = ExecutionPolicy::Parallel,
                                 OracleOptions opts = {});

}  // namespace roundforge
