#include <algorithm>
#include <cmath>
#include <queue>

#include "engine_internal.hpp"
#include "roundforge/error.hpp"

namespace roundforge {
namespace {

constexpr double kLocusTol = 1e-9;
constexpr double kFrameTol = 1e-12;

bool point_ok(const SpaceExpr& expr, const PointRef& p, std::vector<std::string>& problems) {
  try {
    check_point(expr, p);
    return true;
  } catch (const GeometryError& e) {
    problems.emplace_back(e.what());
    return false;
  }
}

double pair_distance(const SpaceExpr& expr, const PointRef& a, const PointRef& b) {
  if (a.piece == b.piece) return piece_distance(expr, a, b);
  return detail::distance_unchecked(expr, a, b, {}).value;
}

// Largest gap between a segment's stored length and the intrinsic distance
// of its endpoints.
double chain_residual(const SpaceExpr& expr, const GeodesicDescriptor& d) {
  double r = 0.0;
  double sum = 0.0;
  for (const auto& seg : d.segments) {
    r = std::max(r, std::abs(piece_distance(expr, seg.from, seg.to) - seg.length));
    sum += seg.length;
  }
  return std::max(r, std::abs(sum - d.total_length));
}

}  // namespace

bool ValidationReport::passed() const {
  if (!connected || !coordinates_ok) return false;
  return std::all_of(gluings.begin(), gluings.end(), [](const GluingCheck& g) { return g.passed; });
}

ValidationReport validate(const SpaceExpr& expr) {
  ValidationReport rep;
  const int np = expr.piece_count();

  for (int gi = 0; gi < static_cast<int>(expr.gluings().size()); ++gi) {
    const auto& g = expr.gluings()[static_cast<std::size_t>(gi)];
    GluingCheck chk;
    chk.gluing = gi;
    chk.kind = g.kind;
    bool coords = true;
    for (const auto& p : g.ambient_points) coords = point_ok(expr, p, rep.problems) && coords;
    for (const auto& p : g.child_points) coords = point_ok(expr, p, rep.problems) && coords;
    for (const auto* d : {&g.ambient_arc, &g.child_arc}) {
      for (const auto& seg : d->segments) {
        coords = point_ok(expr, seg.from, rep.problems) && coords;
        coords = point_ok(expr, seg.to, rep.problems) && coords;
      }
    }
    if (!coords) {
      rep.coordinates_ok = false;
      chk.passed = false;
      chk.detail = "invalid coordinates";
      rep.gluings.push_back(chk);
      continue;
    }

    switch (g.kind) {
      case LocusKind::PointWedge:
        if (g.ambient_points.size() != 1 || g.child_points.size() != 1) {
          chk.passed = false;
          chk.detail = "point wedge needs one point per side";
        }
        break;
      case LocusKind::AntipodalPair: {
        if (g.ambient_points.size() != 2 || g.child_points.size() != 2) {
          chk.passed = false;
          chk.detail = "antipodal pair needs two points per side";
          break;
        }
        const double da = pair_distance(expr, g.ambient_points[0], g.ambient_points[1]);
        const double dc = pair_distance(expr, g.child_points[0], g.child_points[1]);
        chk.residual = std::max(std::abs(da - kPi), std::abs(dc - kPi));
        chk.passed = chk.residual <= kLocusTol;
        chk.detail = "antipodal pair distances must be pi: ambient " + std::to_string(da) + ", child " +
                     std::to_string(dc);
        break;
      }
      case LocusKind::ArcChain: {
        const double la = g.ambient_arc.total_length;
        const double lc = g.child_arc.total_length;
        chk.residual = std::max({std::abs(la - lc), chain_residual(expr, g.ambient_arc),
                                 chain_residual(expr, g.child_arc)});
        chk.passed = chk.residual <= kLocusTol && la > 0.0 && la <= expr.truncation() + kLocusTol;
        chk.detail = "arc lengths must agree and lie in (0, truncation]: " + std::to_string(la) + " and " +
                     std::to_string(lc);
        break;
      }
      case LocusKind::Equator: {
        const bool ids = g.ambient_piece >= 0 && g.ambient_piece < np && g.child_piece >= 0 &&
                         g.child_piece < np;
        if (!ids) {
          chk.passed = false;
          chk.detail = "equator refers to a missing piece";
          break;
        }
        const Piece& amb = expr.piece(g.ambient_piece);
        const Piece& child = expr.piece(g.child_piece);
        if (!amb.sphere_like() || amb.kind == PieceKind::Hemisphere ||
            child.kind != PieceKind::Hemisphere || amb.n != child.n ||
            g.frame.rows() != amb.n + 1 || g.frame.cols() != amb.n) {
          chk.passed = false;
          chk.detail = "equator needs a sphere, a hemisphere of the same dimension and an (n+1) x n frame";
          break;
        }
        const Eigen::MatrixXd gram = g.frame.transpose() * g.frame;
        chk.residual = (gram - Eigen::MatrixXd::Identity(amb.n, amb.n)).cwiseAbs().maxCoeff();
        chk.passed = chk.residual <= kFrameTol;
        chk.detail = "equator frame must be orthonormal";
        break;
      }
    }
    rep.max_residual = std::max(rep.max_residual, chk.residual);
    if (!chk.passed) rep.problems.push_back("gluing " + std::to_string(gi) + ": " + chk.detail);
    rep.gluings.push_back(std::move(chk));
  }

  if (np > 0) {
    std::vector<char> seen(static_cast<std::size_t>(np), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : expr.index().neighbors[static_cast<std::size_t>(u)]) {
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          ++count;
          q.push(v);
        }
      }
    }
    rep.connected = count == np;
    if (!rep.connected) rep.problems.emplace_back("gluing graph is disconnected");
  }
  for (const auto& [name, p] : expr.labels()) {
    if (!point_ok(expr, p, rep.problems)) {
      rep.coordinates_ok = false;
      rep.problems.push_back("label '" + name + "' is invalid");
    }
  }
  return rep;
}

}  // namespace roundforge
