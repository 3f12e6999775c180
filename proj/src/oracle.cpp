#include "roundforge/oracle.hpp"

#include <cmath>
#include <limits>
#include <queue>

#include "roundforge/engine.hpp"
#include "roundforge/error.hpp"

namespace roundforge {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Vec> equator_net(int n, double h) {
  std::vector<Vec> out;
  if (n == 1) {
    Vec w(1);
    w << 1.0;
    out.push_back(w);
    w << -1.0;
    out.push_back(w);
  } else if (n == 2) {
    const int k = static_cast<int>(std::ceil(2.0 * kPi / h));
    for (int i = 0; i < k; ++i) {
      const double th = 2.0 * kPi * i / k;
      Vec w(2);
      w << std::cos(th), std::sin(th);
      out.push_back(w);
    }
  } else if (n == 3) {
    // Fibonacci lattice, about one point per h^2 of area
    const int k = static_cast<int>(std::ceil(4.0 * kPi / (h * h)));
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < k; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / k;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      Vec w(3);
      w << r * std::cos(golden * i), r * std::sin(golden * i), z;
      out.push_back(w);
    }
  } else {
    throw GeometryError(ErrorCode::ResourceLimit, "oracle nets exist for equators of dimension <= 3");
  }
  return out;
}

}  // namespace

OracleGraph::OracleGraph(const SpaceExpr& expr, OracleOptions opts) : expr_(expr), opts_(opts) {
  if (!(opts_.h > 0.0)) throw GeometryError(ErrorCode::OutOfRange, "net resolution must be positive");
  if (!opts_.allow_high_dim) {
    for (const auto& p : expr.pieces()) {
      if (p.dimension() > 2) {
        throw GeometryError(ErrorCode::ResourceLimit,
                            "oracle limited to pieces of dimension <= 2 unless overridden");
      }
    }
  }
  piece_nodes_.assign(static_cast<std::size_t>(expr.piece_count()), {});
  for (const auto& c : expr.index().crossings) {
    switch (c.kind) {
      case Crossing::Kind::Point:
        add_identified(c.point_a, c.point_b);
        break;
      case Crossing::Kind::Interval: {
        const int k = std::max(1, static_cast<int>(std::ceil((c.s1 - c.s0) / opts_.h)));
        for (int i = 0; i <= k; ++i) {
          const double s = c.s0 + (c.s1 - c.s0) * i / k;
          add_identified(c.map_a(s), c.map_b(s));
        }
        break;
      }
      case Crossing::Kind::Equator:
        for (const Vec& w : equator_net(static_cast<int>(c.frame.cols()), opts_.h)) {
          add_identified(c.equator_a(w), c.equator_b(w));
        }
        break;
    }
    if (node_count() > opts_.node_budget) {
      throw GeometryError(ErrorCode::ResourceLimit,
                          "oracle net exceeds " + std::to_string(opts_.node_budget) + " nodes");
    }
  }
  weights_.resize(piece_nodes_.size());
  for (std::size_t p = 0; p < piece_nodes_.size(); ++p) {
    const auto& ids = piece_nodes_[p];
    const auto m = static_cast<Eigen::Index>(ids.size());
    Eigen::MatrixXd w(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      w(i, i) = 0.0;
      for (Eigen::Index j = i + 1; j < m; ++j) {
        const double d = piece_distance(expr_, nodes_[static_cast<std::size_t>(ids[i])].point,
                                        nodes_[static_cast<std::size_t>(ids[j])].point);
        w(i, j) = d;
        w(j, i) = d;
      }
    }
    weights_[p] = std::move(w);
  }
}

int OracleGraph::add_node(const PointRef& p) {
  const int id = node_count();
  auto& slot = piece_nodes_[static_cast<std::size_t>(p.piece)];
  nodes_.push_back({p, static_cast<int>(slot.size()), {}});
  slot.push_back(id);
  return id;
}

void OracleGraph::add_identified(const PointRef& a, const PointRef& b) {
  const int ia = add_node(a);
  const int ib = add_node(b);
  nodes_[static_cast<std::size_t>(ia)].twins.push_back(ib);
  nodes_[static_cast<std::size_t>(ib)].twins.push_back(ia);
}

double OracleGraph::distance(const PointRef& x, const PointRef& y) const {
  check_point(expr_, x);
  check_point(expr_, y);
  double best = x.piece == y.piece ? piece_distance(expr_, x, y) : kInf;

  const auto& yids = piece_nodes_[static_cast<std::size_t>(y.piece)];
  std::vector<double> to_y(yids.size());
  for (std::size_t i = 0; i < yids.size(); ++i) {
    to_y[i] = piece_distance(expr_, nodes_[static_cast<std::size_t>(yids[i])].point, y);
  }

  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  std::vector<double> dist(nodes_.size(), kInf);
  std::vector<char> done(nodes_.size(), 0);
  for (int id : piece_nodes_[static_cast<std::size_t>(x.piece)]) {
    const double d = piece_distance(expr_, x, nodes_[static_cast<std::size_t>(id)].point);
    dist[static_cast<std::size_t>(id)] = d;
    heap.emplace(d, id);
  }
  while (!heap.empty()) {
    const auto [du, u] = heap.top();
    heap.pop();
    if (done[static_cast<std::size_t>(u)] || du > dist[static_cast<std::size_t>(u)]) continue;
    if (du >= best) break;
    done[static_cast<std::size_t>(u)] = 1;
    const Node& nu = nodes_[static_cast<std::size_t>(u)];
    const int piece = nu.point.piece;
    if (piece == y.piece) best = std::min(best, du + to_y[static_cast<std::size_t>(nu.slot)]);
    auto relax = [&](int v, double dv) {
      if (dv < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = dv;
        heap.emplace(dv, v);
      }
    };
    for (int v : nu.twins) relax(v, du);
    const auto& ids = piece_nodes_[static_cast<std::size_t>(piece)];
    const Eigen::MatrixXd& w = weights_[static_cast<std::size_t>(piece)];
    for (std::size_t j = 0; j < ids.size(); ++j) {
      if (done[static_cast<std::size_t>(ids[j])]) continue;
      relax(ids[j], du + w(nu.slot, static_cast<Eigen::Index>(j)));
    }
  }
  return best;
}

double oracle_distance(const SpaceExpr& expr, const PointRef& x, const PointRef& y, double h,
                       OracleOptions opts) {
  opts.h = h;
  return OracleGraph(expr, opts).distance(x, y);
}

std::vector<double> oracle_batch(const SpaceExpr& expr,
                                 const std::vector<std::pair<PointRef, PointRef>>& pairs, double h,
                                 ExecutionPolicy policy, OracleOptions opts) {
  opts.h = h;
  const OracleGraph graph(expr, opts);
  for (const auto& [x, y] : pairs) {
    check_point(expr, x);
    check_point(expr, y);
  }
  std::vector<double> out(pairs.size());
  const auto n = static_cast<long>(pairs.size());
  if (policy == ExecutionPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] =
          graph.distance(pairs[static_cast<std::size_t>(i)].first, pairs[static_cast<std::size_t>(i)].second);
    }
  } else {
    for (long i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] =
          graph.distance(pairs[static_cast<std::size_t>(i)].first, pairs[static_cast<std::size_t>(i)].second);
    }
  }
  return out;
}

}  // namespace roundforge
