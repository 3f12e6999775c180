#include "roundforge/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "roundforge/error.hpp"
#include "roundforge/oracle.hpp"

namespace roundforge {
namespace {

struct Outcome {
  bool skipped = false;
  std::string skip_reason;
  std::vector<Violation> violations;
  double max_dev = 0.0;
  double max_gap = 0.0;
};

template <class Body>
void for_each_index(long n, ExecutionPolicy policy, Body&& body) {
  if (policy == ExecutionPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) body(i);
  } else {
    for (long i = 0; i < n; ++i) body(i);
  }
}

// Runs `sample(rng, outcome)` once per index and folds the outcomes in index
// order.
template <class Sample>
SuiteReport run_suite(const std::string& name, const SampleConfig& cfg, Sample&& sample) {
  const long n = std::max(0, cfg.count);
  std::vector<Outcome> outs(static_cast<std::size_t>(n));
  for_each_index(n, cfg.policy, [&](long i) {
    auto rng = sample_rng(cfg.seed, static_cast<std::uint64_t>(i));
    Outcome& out = outs[static_cast<std::size_t>(i)];
    try {
      sample(rng, out);
    } catch (const GeometryError& e) {
      if (e.code() == ErrorCode::AmbiguousGeodesic) {
        out = Outcome{};
        out.skipped = true;
        out.skip_reason = std::string(to_string(e.code()));
      } else {
        out.violations.push_back({{}, 0.0, 0.0, 0.0, std::string("error: ") + e.what()});
      }
    } catch (const std::exception& e) {
      out.violations.push_back({{}, 0.0, 0.0, 0.0, std::string("error: ") + e.what()});
    }
  });

  SuiteReport rep;
  rep.name = name;
  std::map<std::string, int> skips;
  for (auto& o : outs) {
    if (o.skipped) {
      ++rep.skipped;
      ++skips[o.skip_reason];
      continue;
    }
    ++rep.samples;
    rep.max_deviation = std::max(rep.max_deviation, o.max_dev);
    rep.max_abs_gap = std::max(rep.max_abs_gap, o.max_gap);
    for (auto& v : o.violations) {
      ++rep.violation_count;
      if (static_cast<int>(rep.violations.size()) < kMaxStoredViolations) {
        rep.violations.push_back(std::move(v));
      }
    }
  }
  for (const auto& [why, k] : skips) rep.notes.push_back("skipped " + std::to_string(k) + ": " + why);
  rep.passed = rep.violation_count == 0;
  return rep;
}

EngineOptions exhaustive(const SampleConfig& cfg) {
  EngineOptions o = cfg.engine();
  o.same_piece_shortcut = false;
  return o;
}

double tol_for(const SampleConfig& cfg, bool optimized) { return optimized ? cfg.tol_opt : cfg.tol; }

// Repairs triangle inequality failures below `slack` by shrinking the
// longest side.
bool close_triangle(double& a, double& b, double& c, double slack, double& excess) {
  excess = std::max({a - b - c, b - a - c, c - a - b, 0.0});
  if (excess > slack) return false;
  if (a > b + c) a = b + c;
  if (b > a + c) b = a + c;
  if (c > a + b) c = a + b;
  return true;
}

}  // namespace

EngineOptions SampleConfig::engine() const {
  EngineOptions o;
  o.max_hops = max_hops;
  return o;
}

SuiteReport check_metric_axioms(const SpaceExpr& expr, const SampleConfig& cfg) {
  const EngineOptions opts = cfg.engine();
  return run_suite("metric", cfg, [&](std::mt19937_64& rng, Outcome& out) {
    const PointRef x = sample_point(expr, rng, cfg.piece_weights);
    const PointRef y = sample_point(expr, rng, cfg.piece_weights);
    const PointRef z = sample_point(expr, rng, cfg.piece_weights);
    const auto xy = distance(expr, x, y, opts);
    const auto yx = distance(expr, y, x, opts);
    const auto yz = distance(expr, y, z, opts);
    const auto xz = distance(expr, x, z, opts);
    const auto xx = distance(expr, x, x, opts);

    const double asym = std::abs(xy.value - yx.value);
    if (xy.value != yx.value) out.violations.push_back({{x, y}, yx.value, xy.value, asym, "symmetry"});
    if (xx.value > xx.achieved_tol) {
      out.violations.push_back({{x}, xx.value, xx.achieved_tol, xx.value, "d(x,x)"});
    }
    const double tol = tol_for(cfg, xy.optimized || yz.optimized || xz.optimized);
    const double excess = xz.value - (xy.value + yz.value);
    if (excess > tol) {
      out.violations.push_back({{x, y, z}, xz.value, xy.value + yz.value, excess, "triangle inequality"});
    }
    out.max_dev = std::max({0.0, asym, xx.value, excess});
  });
}

SuiteReport check_cat1(const SpaceExpr& expr, const SampleConfig& cfg) {
  const EngineOptions opts = cfg.engine();
  constexpr double kFractions[] = {0.25, 0.5, 0.75};
  constexpr double kPerimeterMargin = 0.01;
  return run_suite("cat1", cfg, [&](std::mt19937_64& rng, Outcome& out) {
    PointRef v[3];
    DistanceResult d01, d02, d12;
    bool found = false;
    for (int attempt = 0; attempt < 100 && !found; ++attempt) {
      for (auto& p : v) p = sample_point(expr, rng, cfg.piece_weights);
      d01 = distance(expr, v[0], v[1], opts);
      d02 = distance(expr, v[0], v[2], opts);
      d12 = distance(expr, v[1], v[2], opts);
      const double lo = std::min({d01.value, d02.value, d12.value});
      const double hi = std::max({d01.value, d02.value, d12.value});
      found = lo > 1e-6 && hi < kPi - 1e-9 &&
              d01.value + d02.value + d12.value < 2.0 * kPi - kPerimeterMargin;
    }
    if (!found) {
      out.skipped = true;
      out.skip_reason = "no admissible triangle";
      return;
    }
    bool any_opt = d01.optimized || d02.optimized || d12.optimized;
    double a = d01.value, b = d02.value, c = d12.value, excess = 0.0;
    if (!close_triangle(a, b, c, tol_for(cfg, any_opt), excess)) {
      out.violations.push_back({{v[0], v[1], v[2]}, excess, 0.0, excess, "triangle inequality"});
      out.max_dev = excess;
      return;
    }
    const auto tri = kernel::realize_comparison_triangle(a, b, c);
    const auto model = kernel::SphereParams::unit(2);

    // side (i, j) with opposite vertex k
    constexpr int kSides[3][3] = {{0, 1, 2}, {0, 2, 1}, {1, 2, 0}};
    for (const auto& s : kSides) {
      const auto g = geodesic(expr, v[s[0]], v[s[1]], opts);
      const auto bar = kernel::arc_between(tri.vertices[static_cast<std::size_t>(s[0])],
                                           tri.vertices[static_cast<std::size_t>(s[1])], model);
      for (double f : kFractions) {
        const PointRef m = point_on_geodesic(g, f * g.total_length);
        const auto dm = distance(expr, m, v[s[2]], opts);
        const Vec mbar = kernel::arc_point(bar, f * bar.length, model);
        const double bound =
            kernel::angle_between(mbar, tri.vertices[static_cast<std::size_t>(s[2])]);
        const double tol = tol_for(cfg, any_opt || dm.optimized);
        const double dev = dm.value - bound;
        out.max_gap = std::max(out.max_gap, std::abs(dev));
        out.max_dev = std::max(out.max_dev, dev);
        if (dev > tol) {
          out.violations.push_back({{v[0], v[1], v[2], m}, dm.value, bound, dev,
                                    "thicker than comparison triangle"});
        }
      }
    }
  });
}

SuiteReport check_isometric_embedding(const SpaceExpr& expr, int piece, const SampleConfig& cfg) {
  expr.piece(piece);
  const EngineOptions opts = exhaustive(cfg);
  auto rep = run_suite("embed", cfg, [&](std::mt19937_64& rng, Outcome& out) {
    const PointRef a = sample_point_on_piece(expr, piece, rng);
    const PointRef b = sample_point_on_piece(expr, piece, rng);
    const double intrinsic = piece_distance(expr, a, b);
    const double ambient = distance(expr, a, b, opts).value;
    const double dev = std::abs(ambient - intrinsic);
    out.max_dev = dev;
    out.max_gap = dev;
    if (dev > cfg.tol) out.violations.push_back({{a, b}, ambient, intrinsic, dev, "ambient != intrinsic"});
  });
  rep.notes.push_back("piece " + std::to_string(piece));
  return rep;
}

SuiteReport check_truncated_embedding(const SpaceExpr& before, const SpaceExpr& after,
                                      const LevelEmbedding& map, const SampleConfig& cfg) {
  const EngineOptions opts = exhaustive(cfg);
  const double cap = before.truncation();
  auto rep = run_suite("truncated", cfg, [&](std::mt19937_64& rng, Outcome& out) {
    const PointRef x = sample_point(before, rng, {});
    const PointRef y = sample_point(before, rng, {});
    const auto db = distance(before, x, y, opts);
    const auto da = distance(after, map.apply(x), map.apply(y), opts);
    const double tb = std::min(cap, db.value);
    const double ta = std::min(cap, da.value);
    const double dev = std::abs(ta - tb);
    out.max_dev = dev;
    out.max_gap = dev;
    if (dev > tol_for(cfg, db.optimized || da.optimized)) {
      out.violations.push_back({{x, y}, ta, tb, dev, "truncated distance changed"});
    }
  });
  rep.notes.push_back("cap " + std::to_string(cap));
  return rep;
}

SuiteReport check_oracle(const SpaceExpr& expr, const SampleConfig& cfg) {
  const EngineOptions opts = cfg.engine();
  const double h = cfg.net_h;
  const long n = std::max(0, cfg.count);
  std::vector<std::pair<PointRef, PointRef>> pairs(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    auto rng = sample_rng(cfg.seed, static_cast<std::uint64_t>(i));
    pairs[static_cast<std::size_t>(i)].first = sample_point(expr, rng, cfg.piece_weights);
    pairs[static_cast<std::size_t>(i)].second = sample_point(expr, rng, cfg.piece_weights);
  }
  const auto oracle = oracle_batch(expr, pairs, h, cfg.policy);
  std::vector<DistanceResult> engine(pairs.size());
  for_each_index(n, cfg.policy, [&](long i) {
    const auto& [x, y] = pairs[static_cast<std::size_t>(i)];
    engine[static_cast<std::size_t>(i)] = distance(expr, x, y, opts);
  });

  SuiteReport rep;
  rep.name = "oracle";
  double c_est = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    ++rep.samples;
    const double e = engine[i].value;
    const double o = oracle[i];
    const double gap = std::abs(e - o);
    rep.max_abs_gap = std::max(rep.max_abs_gap, gap);
    rep.max_deviation = std::max(rep.max_deviation, gap);
    c_est = std::max(c_est, (o - e) / h);
    std::string why;
    if (gap > 3.0 * h) why = "|engine - oracle| > 3h";
    if (e > o + engine[i].achieved_tol + 1e-12) why = "engine above oracle";
    if (!why.empty()) {
      ++rep.violation_count;
      if (static_cast<int>(rep.violations.size()) < kMaxStoredViolations) {
        rep.violations.push_back({{pairs[i].first, pairs[i].second}, e, o, gap, why});
      }
    }
  }
  rep.passed = rep.violation_count == 0;
  rep.notes.push_back("h " + std::to_string(h) + ", empirical C " + std::to_string(c_est));
  return rep;
}

std::vector<AntipodePair> find_antipodes(const SpaceExpr& expr, const SampleConfig& cfg) {
  constexpr double kAntipodeTol = 1e-6;
  const EngineOptions opts = cfg.engine();
  std::vector<std::pair<PointRef, PointRef>> cands;

  for (int p = 0; p < expr.piece_count(); ++p) {
    const Piece& piece = expr.piece(p);
    if (piece.sphere_like()) {
      const Vec e1 = kernel::basis(piece.n + 1, 0);
      cands.emplace_back(PointRef::on_sphere(p, e1), PointRef::on_sphere(p, -e1));
    } else {
      cands.emplace_back(PointRef::apex(p, false), PointRef::apex(p, true));
    }
  }
  for (const auto& g : expr.gluings()) {
    if (g.kind != LocusKind::AntipodalPair) continue;
    cands.emplace_back(g.ambient_points[0], g.ambient_points[1]);
  }
  std::vector<PointRef> labelled;
  for (const auto& [name, p] : expr.labels()) labelled.push_back(p);
  for (std::size_t i = 0; i < labelled.size(); ++i) {
    for (std::size_t j = i + 1; j < labelled.size(); ++j) cands.emplace_back(labelled[i], labelled[j]);
  }

  // multi-start hill climbing on d(x, y)
  const long starts = std::clamp(cfg.count / 10, 8, 64);
  std::vector<std::pair<PointRef, PointRef>> climbed(static_cast<std::size_t>(starts));
  for_each_index(starts, cfg.policy, [&](long i) {
    auto rng = sample_rng(cfg.seed ^ 0xa5a5a5a5ULL, static_cast<std::uint64_t>(i));
    PointRef x = sample_point(expr, rng, cfg.piece_weights);
    PointRef y = sample_point(expr, rng, cfg.piece_weights);
    double best = distance(expr, x, y, opts).value;
    double sigma = 0.5;
    for (int it = 0; it < 80 && sigma > 1e-9; ++it) {
      const PointRef x2 = perturb_point(expr, x, sigma, rng);
      const PointRef y2 = perturb_point(expr, y, sigma, rng);
      const double d = distance(expr, x2, y2, opts).value;
      if (d > best) {
        best = d;
        x = x2;
        y = y2;
      } else {
        sigma *= 0.8;
      }
    }
    climbed[static_cast<std::size_t>(i)] = {x, y};
  });
  cands.insert(cands.end(), climbed.begin(), climbed.end());

  std::vector<AntipodePair> out;
  for (const auto& [p, q] : cands) {
    const double d = distance(expr, p, q, opts).value;
    if (d < kPi - kAntipodeTol) continue;
    const bool dup = std::any_of(out.begin(), out.end(), [&](const AntipodePair& a) {
      return (points_coincide(expr, a.p, p, kAntipodeTol) && points_coincide(expr, a.q, q, kAntipodeTol)) ||
             (points_coincide(expr, a.p, q, kAntipodeTol) && points_coincide(expr, a.q, p, kAntipodeTol));
    });
    if (!dup) out.push_back({p, q, d});
  }
  return out;
}

SuiteReport check_antipodes(const SpaceExpr& expr, const SampleConfig& cfg) {
  SuiteReport rep;
  rep.name = "antipodes";
  const auto pairs = find_antipodes(expr, cfg);
  EngineOptions fresh_opts = cfg.engine();
  fresh_opts.same_piece_shortcut = false;
  for (const auto& a : pairs) {
    ++rep.samples;
    const double fresh = distance(expr, a.q, a.p, fresh_opts).value;
    const double dev = std::max(0.0, kPi - 1e-6 - fresh);
    rep.max_deviation = std::max(rep.max_deviation, dev);
    if (dev > 0.0) {
      ++rep.violation_count;
      rep.violations.push_back({{a.p, a.q}, fresh, kPi - 1e-6, dev, "pair does not re-verify"});
    }
  }
  rep.notes.push_back(std::to_string(pairs.size()) + " antipodal pairs");
  rep.passed = rep.violation_count == 0;
  return rep;
}

namespace {

double structural_diameter(const SpaceExpr& e) {
  double d = 0.0;
  for (const auto& p : e.pieces()) {
    d = std::max(d, p.kind == PieceKind::Suspension ? kPi : p.diameter);
  }
  return d;
}

// Image of x in the ambient sphere of an equator gluing, if x lies on one.
std::optional<std::pair<int, Vec>> equator_image(const SpaceExpr& expr, const PointRef& x) {
  for (const auto& g : expr.gluings()) {
    if (g.kind != LocusKind::Equator) continue;
    if (x.piece == g.ambient_piece) return std::make_pair(x.piece, x.coords);
    if (x.piece == g.child_piece) {
      const int n = static_cast<int>(g.frame.cols());
      if (std::abs(x.coords[n]) > 1e-9) return std::nullopt;
      Vec a = g.frame * x.coords.head(n);
      return std::make_pair(g.ambient_piece, Vec(a.normalized()));
    }
  }
  return std::nullopt;
}

}  // namespace

PoleDecision decide_pole(const SpaceExpr& expr, const PointRef& x) {
  check_point(expr, x);
  const Piece& piece = expr.piece(x.piece);
  if (piece.kind == PieceKind::Suspension && x.is_apex()) {
    const double l = structural_diameter(*piece.base);
    if (l > kPi + 1e-12) return {true, "suspension apex over a base of diameter " + std::to_string(l)};
  }
  for (const auto& g : expr.gluings()) {
    if (g.kind != LocusKind::PointWedge && g.kind != LocusKind::AntipodalPair) continue;
    for (std::size_t k = 0; k < g.ambient_points.size() && k < g.child_points.size(); ++k) {
      const auto& a = g.ambient_points[k];
      const auto& c = g.child_points[k];
      const int dim = std::max(expr.piece(a.piece).dimension(), expr.piece(c.piece).dimension());
      if (dim < 2) continue;
      if (points_coincide(expr, x, a) || points_coincide(expr, x, c)) {
        return {true, std::string(to_string(g.kind)) + " junction"};
      }
    }
  }
  if (const auto img = equator_image(expr, x)) {
    std::vector<Vec> normals;
    for (const auto& g : expr.gluings()) {
      if (g.kind != LocusKind::Equator || g.ambient_piece != img->first) continue;
      const Vec nu = frame_normal(g.frame);
      if (std::abs(nu.dot(img->second)) > 1e-9) continue;
      const bool seen = std::any_of(normals.begin(), normals.end(), [&](const Vec& m) {
        return std::abs(std::abs(m.dot(nu)) - 1.0) <= 1e-12;
      });
      if (!seen) normals.push_back(nu);
    }
    if (normals.size() >= 2) return {true, "on " + std::to_string(normals.size()) + " equators"};
  }
  return {};
}

bool detect_pole(const SpaceExpr& expr, const PointRef& x) { return decide_pole(expr, x).pole; }

std::vector<PointRef> pole_candidates(const SpaceExpr& expr) {
  std::vector<PointRef> out;
  for (const auto& [name, p] : expr.labels()) out.push_back(p);
  for (int p = 0; p < expr.piece_count(); ++p) {
    if (expr.piece(p).kind == PieceKind::Suspension) {
      out.push_back(PointRef::apex(p, false));
      out.push_back(PointRef::apex(p, true));
    }
  }
  std::map<int, std::vector<Vec>> normals;
  for (const auto& g : expr.gluings()) {
    if (g.kind == LocusKind::PointWedge || g.kind == LocusKind::AntipodalPair) {
      out.insert(out.end(), g.ambient_points.begin(), g.ambient_points.end());
    }
    if (g.kind == LocusKind::Equator && g.frame.rows() == 3) {
      normals[g.ambient_piece].push_back(frame_normal(g.frame));
    }
  }
  for (const auto& [piece, ns] : normals) {
    for (std::size_t i = 0; i < ns.size(); ++i) {
      for (std::size_t j = i + 1; j < ns.size(); ++j) {
        Vec c(3);
        c << ns[i][1] * ns[j][2] - ns[i][2] * ns[j][1], ns[i][2] * ns[j][0] - ns[i][0] * ns[j][2],
            ns[i][0] * ns[j][1] - ns[i][1] * ns[j][0];
        if (c.norm() < 1e-9) continue;
        c.normalize();
        out.push_back(PointRef::on_sphere(piece, c));
        out.push_back(PointRef::on_sphere(piece, -c));
      }
    }
  }
  std::vector<PointRef> unique;
  for (auto& p : out) {
    bool seen = false;
    for (const auto& q : unique) seen = seen || same_coordinates(p, q);
    if (!seen) unique.push_back(std::move(p));
  }
  return unique;
}

SuiteReport check_poles(const SpaceExpr& expr) {
  SuiteReport rep;
  rep.name = "poles";
  int found = 0;
  for (const auto& p : pole_candidates(expr)) {
    ++rep.samples;
    const auto d = decide_pole(expr, p);
    if (!d.pole) continue;
    ++found;
    std::string where = "piece " + std::to_string(p.piece);
    if (p.is_apex()) where += p.height > 0.0 ? " south apex" : " north apex";
    if (p.coords.size() > 0) {
      where += " (";
      for (Eigen::Index k = 0; k < p.coords.size(); ++k) {
        char buf[32];
        std::snprintf(buf, sizeof buf, k ? ", %.4f" : "%.4f", p.coords[k]);
        where += buf;
      }
      where += ")";
    }
    for (const auto& [name, q] : expr.labels()) {
      if (same_coordinates(p, q)) where = name;
    }
    rep.notes.push_back("pole at " + where + ": " + d.rule);
  }
  rep.notes.push_back(std::to_string(found) + " poles among " + std::to_string(rep.samples) +
                      " structural candidates; undetected does not mean absent");
  return rep;
}

AngleEstimate angle(const SpaceExpr& expr, const PointRef& x, const PointRef& y,
                    const PointRef& z, std::vector<double> scales) {
  const double dxy = distance(expr, x, y).value;
  const double dxz = distance(expr, x, z).value;
  if (!(dxy > 0.0 && dxy < kPi && dxz > 0.0 && dxz < kPi)) {
    throw GeometryError(ErrorCode::OutOfRange, "angle needs 0 < d(x,y), d(x,z) < pi");
  }
  const double reach = std::min(dxy, dxz);
  if (scales.empty()) {
    const double h0 = std::min(0.1, 0.5 * reach);
    scales = {h0, h0 / 2, h0 / 4, h0 / 8};
  }
  std::sort(scales.begin(), scales.end(), std::greater<>());
  if (scales.front() > reach || scales.back() <= 0.0) {
    throw GeometryError(ErrorCode::OutOfRange, "scales must lie in (0, min(d(x,y), d(x,z))]");
  }
  const auto gy = geodesic(expr, x, y);
  const auto gz = geodesic(expr, x, z);
  AngleEstimate est;
  est.scales = scales;
  for (double h : scales) {
    const PointRef yh = point_on_geodesic(gy, h);
    const PointRef zh = point_on_geodesic(gz, h);
    double a = distance(expr, x, yh).value;
    double b = distance(expr, x, zh).value;
    double c = distance(expr, yh, zh).value;
    double excess = 0.0;
    close_triangle(a, b, c, kPi, excess);
    est.values.push_back(c <= 0.0 ? 0.0 : kernel::comparison_angle(a, b, c));
  }
  for (std::size_t k = 1; k < est.values.size(); ++k) {
    if (est.values[k] > est.values[k - 1] + 1e-4) est.monotone = false;
  }
  est.value = est.values.back();
  est.convergence =
      est.values.size() > 1 ? std::abs(est.values.back() - est.values[est.values.size() - 2]) : 0.0;
  return est;
}

}  // namespace roundforge
