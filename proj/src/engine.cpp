#include <algorithm>
#include <cmath>
#include <limits>

#include "engine_internal.hpp"
#include "roundforge/error.hpp"
#include "roundforge/golden.hpp"

namespace roundforge {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieTol = 1e-9;
constexpr double kDistinctTol = 1e-7;

struct StageState {
  int crossing = -1;
  bool forward = true;
  double s = 0.0;
  Vec w;
  PointRef from;  // on the earlier piece of the stage
  PointRef to;    // on the later piece of the stage
};

struct PathSolution {
  std::vector<int> pieces;
  std::vector<StageState> stages;
  double cost = kInf;
  bool optimized = false;
  double achieved_tol = 0.0;
  int rounds = 0;
};

template <class Visit>
void enumerate_paths(const CrossingIndex& idx, int src, int dst, int max_pieces, Visit&& visit) {
  std::vector<int> path{src};
  std::vector<char> used(static_cast<std::size_t>(idx.piece_count), 0);
  used[static_cast<std::size_t>(src)] = 1;
  const bool cycle = src == dst;

  auto dfs = [&](auto&& self, int u) -> void {
    for (int v : idx.neighbors[static_cast<std::size_t>(u)]) {
      if (v == dst) {
        if (cycle && path.size() < 2) continue;
        if (static_cast<int>(path.size() + (cycle ? 0 : 1)) > max_pieces) continue;
        path.push_back(v);
        visit(path);
        path.pop_back();
        continue;
      }
      if (used[static_cast<std::size_t>(v)]) continue;
      const std::size_t distinct = path.size() + 1 + (cycle ? 0 : 1);
      if (static_cast<int>(distinct) > max_pieces) continue;
      used[static_cast<std::size_t>(v)] = 1;
      path.push_back(v);
      self(self, v);
      path.pop_back();
      used[static_cast<std::size_t>(v)] = 0;
    }
  };
  dfs(dfs, src);
}

class PathSolver {
 public:
  PathSolver(const SpaceExpr& expr, const PointRef& x, const PointRef& y)
      : expr_(expr), idx_(expr.index()), x_(x), y_(y) {}

  PathSolution solve(const std::vector<int>& pieces) const {
    PathSolution sol;
    sol.pieces = pieces;
    const int m = static_cast<int>(pieces.size()) - 1;
    sol.stages.resize(static_cast<std::size_t>(m));
    if (m >= 2) initialize_by_grid(sol);

    double cost = m >= 2 ? total(sol) : kInf;
    double improvement = 0.0;
    bool has_interval = false;
    bool has_equator = false;
    for (int round = 1; round <= kMaxRounds; ++round) {
      const std::vector<StageState> before = sol.stages;
      for (int j = 0; j < m; ++j) refine_stage(sol, j);
      double next = total(sol);
      if (m >= 2 && round >= 2) next = extrapolate(sol, before, next);
      improvement = std::isfinite(cost) ? std::max(0.0, cost - next) : 0.0;
      cost = next;
      sol.rounds = round;
      if (m == 1 || improvement <= 1e-15 * std::max(1.0, cost)) break;
    }
    for (const auto& st : sol.stages) {
      const auto kind = idx_.crossings[static_cast<std::size_t>(st.crossing)].kind;
      has_interval = has_interval || kind == Crossing::Kind::Interval;
      has_equator = has_equator || kind == Crossing::Kind::Equator;
    }
    sol.cost = cost;
    sol.optimized = has_interval || (m > 1 && has_equator);
    sol.achieved_tol = (has_interval ? kGoldenTol : kClosedFormTol) + (m > 1 ? improvement : 0.0);
    return sol;
  }

  double stage_cost(const PathSolution& sol, int j, const StageState& st) const {
    return d(prev_point(sol, j), st.from) + d(st.to, next_point(sol, j));
  }

  const PointRef& prev_point(const PathSolution& sol, int j) const {
    return j == 0 ? x_ : sol.stages[static_cast<std::size_t>(j - 1)].to;
  }
  const PointRef& next_point(const PathSolution& sol, int j) const {
    return j + 1 == static_cast<int>(sol.stages.size()) ? y_
                                                        : sol.stages[static_cast<std::size_t>(j + 1)].from;
  }

  StageState point_state(int ci, bool forward) const {
    const Crossing& c = idx_.crossings[static_cast<std::size_t>(ci)];
    StageState st;
    st.crossing = ci;
    st.forward = forward;
    st.from = forward ? c.point_a : c.point_b;
    st.to = forward ? c.point_b : c.point_a;
    return st;
  }

 private:
  double d(const PointRef& a, const PointRef& b) const { return piece_distance(expr_, a, b); }

  double total(const PathSolution& sol) const {
    const int m = static_cast<int>(sol.stages.size());
    double c = d(x_, sol.stages.front().from);
    for (int j = 1; j < m; ++j) {
      c += d(sol.stages[static_cast<std::size_t>(j - 1)].to, sol.stages[static_cast<std::size_t>(j)].from);
    }
    return c + d(sol.stages.back().to, y_);
  }

  struct Candidate {
    int crossing;
    int grid;
    bool forward;
  };

  const PointRef& cand_from(const Candidate& c) const {
    const Crossing& cr = idx_.crossings[static_cast<std::size_t>(c.crossing)];
    if (c.grid < 0) return c.forward ? cr.point_a : cr.point_b;
    const auto& g = cr.grid[static_cast<std::size_t>(c.grid)];
    return c.forward ? g.a : g.b;
  }
  const PointRef& cand_to(const Candidate& c) const {
    const Crossing& cr = idx_.crossings[static_cast<std::size_t>(c.crossing)];
    if (c.grid < 0) return c.forward ? cr.point_b : cr.point_a;
    const auto& g = cr.grid[static_cast<std::size_t>(c.grid)];
    return c.forward ? g.b : g.a;
  }

  // Layered shortest path over grid points of every stage.
  void initialize_by_grid(PathSolution& sol) const {
    const auto& pieces = sol.pieces;
    const int m = static_cast<int>(pieces.size()) - 1;
    std::vector<std::vector<Candidate>> cands(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
      const int pa = pieces[static_cast<std::size_t>(j)];
      const int pb = pieces[static_cast<std::size_t>(j + 1)];
      for (int ci : idx_.between(pa, pb)) {
        const Crossing& c = idx_.crossings[static_cast<std::size_t>(ci)];
        const bool fwd = c.piece_a == pa;
        if (c.kind == Crossing::Kind::Point) {
          cands[static_cast<std::size_t>(j)].push_back({ci, -1, fwd});
        } else {
          for (int g = 0; g < static_cast<int>(c.grid.size()); ++g) {
            cands[static_cast<std::size_t>(j)].push_back({ci, g, fwd});
          }
        }
      }
    }
    std::vector<std::vector<double>> value(static_cast<std::size_t>(m));
    std::vector<std::vector<int>> parent(static_cast<std::size_t>(m));
    for (std::size_t k = 0; k < cands[0].size(); ++k) value[0].push_back(d(x_, cand_from(cands[0][k])));
    for (int j = 1; j < m; ++j) {
      const auto& cur = cands[static_cast<std::size_t>(j)];
      const auto& prv = cands[static_cast<std::size_t>(j - 1)];
      auto& val = value[static_cast<std::size_t>(j)];
      auto& par = parent[static_cast<std::size_t>(j)];
      val.assign(cur.size(), kInf);
      par.assign(cur.size(), -1);
      for (std::size_t k = 0; k < cur.size(); ++k) {
        const PointRef& f = cand_from(cur[k]);
        for (std::size_t q = 0; q < prv.size(); ++q) {
          const double v = value[static_cast<std::size_t>(j - 1)][q] + d(cand_to(prv[q]), f);
          if (v < val[k]) {
            val[k] = v;
            par[k] = static_cast<int>(q);
          }
        }
      }
    }
    const auto& last = cands[static_cast<std::size_t>(m - 1)];
    int best = -1;
    double best_v = kInf;
    for (std::size_t k = 0; k < last.size(); ++k) {
      const double v = value[static_cast<std::size_t>(m - 1)][k] + d(cand_to(last[k]), y_);
      if (v < best_v) {
        best_v = v;
        best = static_cast<int>(k);
      }
    }
    for (int j = m - 1; j >= 0 && best >= 0; --j) {
      const Candidate& c = cands[static_cast<std::size_t>(j)][static_cast<std::size_t>(best)];
      const Crossing& cr = idx_.crossings[static_cast<std::size_t>(c.crossing)];
      StageState st;
      st.crossing = c.crossing;
      st.forward = c.forward;
      if (c.grid >= 0) {
        st.s = cr.grid[static_cast<std::size_t>(c.grid)].s;
        st.w = cr.grid[static_cast<std::size_t>(c.grid)].w;
      }
      st.from = cand_from(c);
      st.to = cand_to(c);
      sol.stages[static_cast<std::size_t>(j)] = std::move(st);
      if (j > 0) best = parent[static_cast<std::size_t>(j)][static_cast<std::size_t>(best)];
    }
  }

  StageState interval_state(const Crossing& c, int ci, bool fwd, double s) const {
    StageState st;
    st.crossing = ci;
    st.forward = fwd;
    st.s = s;
    PointRef a = c.map_a(s);
    PointRef b = c.map_b(s);
    st.from = fwd ? std::move(a) : std::move(b);
    st.to = fwd ? std::move(b) : std::move(a);
    return st;
  }

  StageState equator_state(const Crossing& c, int ci, bool fwd, const Vec& w) const {
    StageState st;
    st.crossing = ci;
    st.forward = fwd;
    st.w = w;
    PointRef a = c.equator_a(w);
    PointRef b = c.equator_b(w);
    st.from = fwd ? std::move(a) : std::move(b);
    st.to = fwd ? std::move(b) : std::move(a);
    return st;
  }

  StageState blend(const StageState& a, const StageState& b, double t) const {
    const Crossing& c = idx_.crossings[static_cast<std::size_t>(b.crossing)];
    switch (c.kind) {
      case Crossing::Kind::Interval:
        return interval_state(c, b.crossing, b.forward, std::clamp(a.s + t * (b.s - a.s), c.s0, c.s1));
      case Crossing::Kind::Equator: {
        const Vec w = a.w + t * (b.w - a.w);
        if (w.norm() < 1e-12) return b;
        return equator_state(c, b.crossing, b.forward, w.normalized());
      }
      case Crossing::Kind::Point:
        break;
    }
    return b;
  }

  // Alternating refinement creeps along narrow valleys; one line search along
  // the displacement of the last round skips most of the creeping.
  double extrapolate(PathSolution& sol, const std::vector<StageState>& before, double cost) const {
    bool moved = false;
    for (std::size_t j = 0; j < before.size(); ++j) {
      const StageState& a = before[j];
      const StageState& b = sol.stages[j];
      if (a.crossing != b.crossing || a.forward != b.forward) return cost;
      moved = moved || a.s != b.s || (a.w.size() > 0 && a.w != b.w);
    }
    if (!moved) return cost;
    auto path_at = [&](double t) {
      std::vector<StageState> out(before.size());
      for (std::size_t j = 0; j < before.size(); ++j) out[j] = blend(before[j], sol.stages[j], t);
      return out;
    };
    auto f = [&](double t) {
      PathSolution trial;
      trial.stages = path_at(t);
      return total(trial);
    };
    double lo = 1.0, mid = 2.0, fmid = f(mid);
    if (!(fmid < cost)) return cost;
    double hi = 4.0, fhi = f(hi);
    while (fhi < fmid && hi < 1e6) {
      lo = mid;
      mid = hi;
      fmid = fhi;
      hi *= 2.0;
      fhi = f(hi);
    }
    const auto m = golden_section_minimize(f, lo, hi, 1e-6 * hi);
    const double t = m.f < fmid ? m.x : mid;
    const double v = std::min(m.f, fmid);
    if (!(v < cost)) return cost;
    sol.stages = path_at(t);
    return total(sol);
  }

  // Best crossing of one stage with its neighbours held fixed.
  void refine_stage(PathSolution& sol, int j) const {
    const PointRef& prev = prev_point(sol, j);
    const PointRef& next = next_point(sol, j);
    const int pa = sol.pieces[static_cast<std::size_t>(j)];
    const int pb = sol.pieces[static_cast<std::size_t>(j + 1)];
    StageState& cur = sol.stages[static_cast<std::size_t>(j)];
    double best = cur.crossing >= 0 ? d(prev, cur.from) + d(cur.to, next) : kInf;
    StageState winner;
    bool replaced = false;
    auto offer = [&](StageState&& st, double cost) {
      if (cost < best) {
        best = cost;
        winner = std::move(st);
        replaced = true;
      }
    };

    for (int ci : idx_.between(pa, pb)) {
      const Crossing& c = idx_.crossings[static_cast<std::size_t>(ci)];
      const bool fwd = c.piece_a == pa;
      switch (c.kind) {
        case Crossing::Kind::Point: {
          StageState st = point_state(ci, fwd);
          const double cost = d(prev, st.from) + d(st.to, next);
          offer(std::move(st), cost);
          break;
        }
        case Crossing::Kind::Interval: {
          int kbest = 0;
          double vbest = kInf;
          for (int k = 0; k < static_cast<int>(c.grid.size()); ++k) {
            const auto& g = c.grid[static_cast<std::size_t>(k)];
            const double v = fwd ? d(prev, g.a) + d(g.b, next) : d(prev, g.b) + d(g.a, next);
            if (v < vbest) {
              vbest = v;
              kbest = k;
            }
          }
          const int last = static_cast<int>(c.grid.size()) - 1;
          const double lo = c.grid[static_cast<std::size_t>(std::max(kbest - 1, 0))].s;
          const double hi = c.grid[static_cast<std::size_t>(std::min(kbest + 1, last))].s;
          auto f = [&](double s) {
            const PointRef a = c.map_a(s);
            const PointRef b = c.map_b(s);
            return fwd ? d(prev, a) + d(b, next) : d(prev, b) + d(a, next);
          };
          const auto m = golden_section_minimize(f, lo, hi, kGoldenTol);
          const double s = m.f < vbest ? m.x : c.grid[static_cast<std::size_t>(kbest)].s;
          StageState st = interval_state(c, ci, fwd, s);
          const double cost = d(prev, st.from) + d(st.to, next);
          offer(std::move(st), cost);
          break;
        }
        case Crossing::Kind::Equator: {
          StageState st = equator_state(c, ci, fwd, unfold_equator(c, fwd ? prev : next, fwd ? next : prev));
          const double cost = d(prev, st.from) + d(st.to, next);
          offer(std::move(st), cost);
          break;
        }
      }
    }
    if (replaced) cur = std::move(winner);
  }

  // Places the hemisphere point on the far side of the equator from the
  // sphere point; the great arc between them crosses the equator at the
  // optimal crossing.
  Vec unfold_equator(const Crossing& c, const PointRef& sphere_pt, const PointRef& hemi_pt) const {
    const int n = static_cast<int>(c.frame.cols());
    const Vec& a = sphere_pt.coords;
    const Vec& h = hemi_pt.coords;
    const double an = a.dot(c.normal);
    const double sigma = an > 0.0 ? -1.0 : 1.0;
    Vec hp = c.frame * h.head(n) + sigma * h[n] * c.normal;
    const double hn = hp.dot(c.normal);
    Vec cross = std::abs(hn) * a + std::abs(an) * hp;
    if (std::abs(an) == 0.0) cross = a;
    cross -= cross.dot(c.normal) * c.normal;
    Vec w = c.frame.transpose() * cross;
    if (w.norm() < 1e-12) {
      // Antipodal configuration: every crossing is optimal, use the grid.
      double vbest = kInf;
      for (const auto& g : c.grid) {
        const double v = kernel::angle_between(a, g.a.coords) + kernel::angle_between(g.b.coords, h);
        if (v < vbest) {
          vbest = v;
          w = g.w;
        }
      }
      return w;
    }
    return w.normalized();
  }

  const SpaceExpr& expr_;
  const CrossingIndex& idx_;
  const PointRef& x_;
  const PointRef& y_;
};

std::vector<PathSolution> solve_all(const SpaceExpr& expr, const PointRef& x, const PointRef& y,
                                    const EngineOptions& opts) {
  const int max_pieces = opts.max_hops > 0 ? opts.max_hops : expr.piece_count();
  PathSolver solver(expr, x, y);
  std::vector<PathSolution> out;
  enumerate_paths(expr.index(), x.piece, y.piece, max_pieces,
                  [&](const std::vector<int>& path) { out.push_back(solver.solve(path)); });
  return out;
}

GeodesicDescriptor build_descriptor(const SpaceExpr& expr, const PointRef& x, const PointRef& y,
                                    const PathSolution* sol) {
  GeodesicDescriptor desc;
  desc.start = x;
  desc.end = y;
  const int m = sol ? static_cast<int>(sol->stages.size()) : 0;
  for (int k = 0; k <= m; ++k) {
    const PointRef& in = k == 0 ? x : sol->stages[static_cast<std::size_t>(k - 1)].to;
    const PointRef& out = k == m ? y : sol->stages[static_cast<std::size_t>(k)].from;
    Segment seg = piece_segment(expr, in, out);
    if (seg.length > 0.0) desc.segments.push_back(std::move(seg));
  }
  for (std::size_t i = 0; i + 1 < desc.segments.size(); ++i) {
    desc.breakpoints.push_back(desc.segments[i].to);
  }
  for (const auto& seg : desc.segments) desc.total_length += seg.length;
  return desc;
}

// Antipodal pair inside a sphere-like piece: the half circle through the
// last coordinate axis (which stays inside a hemisphere), else the first axis
// far from x.
GeodesicDescriptor antipodal_descriptor(const SpaceExpr& expr, const PointRef& x, const PointRef& y) {
  const Piece& piece = expr.piece(x.piece);
  const int m = piece.coords();
  Vec hint = kernel::basis(m, m - 1);
  for (int k = 0; std::abs(hint.dot(x.coords)) > 0.9 && k < m; ++k) hint = kernel::basis(m, k);
  Segment seg;
  seg.piece = x.piece;
  seg.from = x;
  seg.to = y;
  seg.diameter = piece.diameter;
  seg.arc = kernel::arc_between(x.coords, y.coords, hint, piece.sphere_params());
  seg.length = seg.arc.length;
  GeodesicDescriptor desc;
  desc.start = x;
  desc.end = y;
  desc.total_length = seg.length;
  desc.segments.push_back(std::move(seg));
  return desc;
}

PointRef midpoint(const GeodesicDescriptor& d) { return point_on_geodesic(d, 0.5 * d.total_length); }

void check_discrete_ties(const SpaceExpr& expr, const PathSolver& solver, const PathSolution& sol) {
  const auto& idx = expr.index();
  for (int j = 0; j < static_cast<int>(sol.stages.size()); ++j) {
    const StageState& cur = sol.stages[static_cast<std::size_t>(j)];
    const double here = solver.stage_cost(sol, j, cur);
    const int pa = sol.pieces[static_cast<std::size_t>(j)];
    const int pb = sol.pieces[static_cast<std::size_t>(j + 1)];
    for (int ci : idx.between(pa, pb)) {
      if (ci == cur.crossing) continue;
      const Crossing& c = idx.crossings[static_cast<std::size_t>(ci)];
      if (c.kind != Crossing::Kind::Point) continue;
      const StageState alt = solver.point_state(ci, c.piece_a == pa);
      if (std::abs(solver.stage_cost(sol, j, alt) - here) > kTieTol) continue;
      if (!points_coincide(expr, alt.to, cur.to, kDistinctTol)) {
        throw GeometryError(ErrorCode::AmbiguousGeodesic, "two crossings of one locus tie");
      }
    }
  }
}

}  // namespace

namespace detail {

DistanceResult distance_unchecked(const SpaceExpr& expr, const PointRef& x_in,
                                  const PointRef& y_in, const EngineOptions& opts) {
  const bool swap = point_less(y_in, x_in);
  const PointRef& x = swap ? y_in : x_in;
  const PointRef& y = swap ? x_in : y_in;

  DistanceResult res;
  res.value = kInf;
  if (x.piece == y.piece) {
    res.value = piece_distance(expr, x, y);
    res.achieved_tol = kClosedFormTol * std::max(1.0, res.value);
    if (opts.same_piece_shortcut) return res;
  }
  const auto sols = solve_all(expr, x, y, opts);
  res.paths_considered = static_cast<int>(sols.size());
  for (const auto& s : sols) {
    if (s.cost < res.value) {
      res.value = s.cost;
      res.achieved_tol = s.achieved_tol * std::max(1.0, s.cost);
      res.optimized = s.optimized;
      res.rounds = s.rounds;
    }
  }
  if (!std::isfinite(res.value)) {
    throw GeometryError(ErrorCode::HopLimitExceeded,
                        "no path between pieces " + std::to_string(x.piece) + " and " +
                            std::to_string(y.piece));
  }
  return res;
}

GeodesicDescriptor geodesic_unchecked(const SpaceExpr& expr, const PointRef& x, const PointRef& y,
                                      const EngineOptions& opts) {
  const bool same = x.piece == y.piece;
  const double intrinsic = same ? piece_distance(expr, x, y) : kInf;
  std::vector<PathSolution> sols;
  if (!same || !opts.same_piece_shortcut) {
    sols = solve_all(expr, x, y, opts);
    std::stable_sort(sols.begin(), sols.end(),
                     [](const PathSolution& a, const PathSolution& b) { return a.cost < b.cost; });
  }
  const double routed = sols.empty() ? kInf : sols.front().cost;
  const double d = std::min(intrinsic, routed);
  if (!std::isfinite(d)) {
    throw GeometryError(ErrorCode::HopLimitExceeded, "no path between the pieces of x and y");
  }
  if (d > expr.truncation() + 1e-12) {
    throw GeometryError(ErrorCode::TruncationExceeded,
                        "distance " + std::to_string(d) + " exceeds truncation " +
                            std::to_string(expr.truncation()), d);
  }
  if (d == 0.0 || (same && same_coordinates(x, y))) return GeodesicDescriptor::point(x);
  if (intrinsic <= routed) {
    if (!opts.first_on_tie) return build_descriptor(expr, x, y, nullptr);
    try {
      return build_descriptor(expr, x, y, nullptr);
    } catch (const GeometryError& e) {
      if (e.code() != ErrorCode::AmbiguousGeodesic || !expr.piece(x.piece).sphere_like()) throw;
      return antipodal_descriptor(expr, x, y);
    }
  }

  const PathSolution& best = sols.front();
  GeodesicDescriptor desc = build_descriptor(expr, x, y, &best);
  if (desc.degenerate()) return GeodesicDescriptor::point(x);
  if (opts.first_on_tie) return desc;

  PathSolver solver(expr, x, y);
  check_discrete_ties(expr, solver, best);
  const PointRef mid = midpoint(desc);
  for (std::size_t k = 1; k < sols.size() && sols[k].cost <= best.cost + kTieTol; ++k) {
    GeodesicDescriptor other;
    try {
      other = build_descriptor(expr, x, y, &sols[k]);
    } catch (const GeometryError&) {
      throw GeometryError(ErrorCode::AmbiguousGeodesic, "tied paths with an ambiguous segment");
    }
    if (distance_unchecked(expr, mid, midpoint(other), {}).value > kDistinctTol) {
      throw GeometryError(ErrorCode::AmbiguousGeodesic, "distinct piece paths tie");
    }
  }
  return desc;
}

}  // namespace detail

DistanceResult distance(const SpaceExpr& expr, const PointRef& x, const PointRef& y,
                        const EngineOptions& opts) {
  check_point(expr, x);
  check_point(expr, y);
  return detail::distance_unchecked(expr, x, y, opts);
}

double truncated_distance(const SpaceExpr& expr, const PointRef& x, const PointRef& y,
                          const EngineOptions& opts) {
  return std::min(expr.truncation(), distance(expr, x, y, opts).value);
}

GeodesicDescriptor geodesic(const SpaceExpr& expr, const PointRef& x, const PointRef& y,
                            const EngineOptions& opts) {
  check_point(expr, x);
  check_point(expr, y);
  return detail::geodesic_unchecked(expr, x, y, opts);
}

int dimension(const SpaceExpr& expr) { return expr.dimension(); }

bool points_coincide(const SpaceExpr& expr, const PointRef& a, const PointRef& b, double tol) {
  if (a.piece == b.piece) return piece_distance(expr, a, b) <= tol;
  return detail::distance_unchecked(expr, a, b, {}).value <= tol;
}

bool is_strongly_singular_structural(const SpaceExpr& expr, const PointRef& x) {
  check_point(expr, x);
  for (const auto& g : expr.gluings()) {
    if (g.kind != LocusKind::PointWedge && g.kind != LocusKind::AntipodalPair) continue;
    for (const auto& p : g.ambient_points) {
      if (points_coincide(expr, x, p)) return true;
    }
  }
  return false;
}

}  // namespace roundforge
