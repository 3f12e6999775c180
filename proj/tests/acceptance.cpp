// One line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "roundforge/error.hpp"
#include "roundforge/oracle.hpp"
#include "roundforge/verify.hpp"

using namespace roundforge;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

void add(Outcome& o, bool ok, const std::string& what) {
  o.pass = o.pass && ok;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += (ok ? "" : "FAILED ") + what;
}

SpaceExpr sphere2() { return SpaceExpr::single(Piece::unit_sphere(2)); }

Vec v3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v.normalized();
}

SampleConfig config(int count, std::uint64_t seed) {
  SampleConfig c;
  c.count = count;
  c.seed = seed;
  return c;
}

Outcome model_exactness() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto rep = check_cat1(sphere2(), config(10000, 1));
  const double t = seconds_since(t0);
  add(o, rep.passed && rep.samples == 10000, std::to_string(rep.samples) + " triangles");
  add(o, rep.max_abs_gap <= 1e-9, "max |measured - comparison| " + fmt("%.2e", rep.max_abs_gap));
  add(o, t < 10.0, fmt("%.2fs", t));
  return o;
}

Outcome gluing_preserves_cat1() {
  Outcome o;
  SampleConfig c = config(10000, 2);
  c.tol = 1e-6;
  c.tol_opt = 1e-3;
  const std::vector<std::pair<std::string, SpaceExpr>> spaces{
      {"twospheres", build_example_twospheres(2)},
      {"pole", build_example_pole(2, 1.2 * kPi)},
      {"hemispherex", build_hemispherex(2, general_position_frames(2, 3, 1))},
      {"round_step", build_round_demo(7)},
  };
  for (const auto& [name, e] : spaces) {
    const auto t0 = Clock::now();
    const auto rep = check_cat1(e, c);
    const double t = seconds_since(t0);
    add(o, rep.passed && rep.samples == 10000 && t < 60.0,
        name + " " + std::to_string(rep.violation_count) + " violations, " + std::to_string(rep.skipped) +
            " skipped, " + fmt("%.1fs", t));
  }
  const auto g = geodesic(sphere2(), PointRef::on_sphere(0, v3(1, 0, 0)), PointRef::on_sphere(0, v3(0, 1, 0)));
  const SpaceExpr broken({Piece::unit_sphere(2), Piece::unit_sphere(2)},
                         {GluingLocus::arc_chain(g, canonical_arc(1, 2, kPi, kPi / 2 - 0.2))}, kPi, 0);
  const auto neg = check_cat1(broken, c);
  add(o, !neg.passed, "mismatched arc control " + std::to_string(neg.violation_count) + " violations");
  return o;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Outcome oracle_equivalence() {
  Outcome o;
  const auto t0 = Clock::now();
  const std::vector<std::pair<std::string, SpaceExpr>> spaces{
      {"sphere", sphere2()},
      {"twospheres", build_example_twospheres(2)},
      {"pole", build_example_pole(2, 1.2 * kPi)},
      {"hemispherex", build_hemispherex(2, general_position_frames(2, 3, 1))},
      {"round-demo", build_round_demo(7)},
  };
  std::vector<double> coarse_err, fine_err;
  for (const auto& [name, e] : spaces) {
    SampleConfig c = config(500, 3);
    c.net_h = 0.02;
    const auto rep = check_oracle(e, c);
    add(o, rep.passed, name + " max gap " + fmt("%.4f", rep.max_abs_gap));

    std::vector<std::pair<PointRef, PointRef>> pairs;
    for (std::uint64_t i = 0; i < 500; ++i) {
      auto rng = sample_rng(3, i);
      PointRef x = sample_point(e, rng);
      PointRef y = sample_point(e, rng);
      pairs.emplace_back(std::move(x), std::move(y));
    }
    const auto coarse = oracle_batch(e, pairs, 0.02);
    std::vector<std::size_t> moving;
    std::vector<double> truth;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const double d = distance(e, pairs[i].first, pairs[i].second).value;
      if (coarse[i] - d > 1e-9) {
        moving.push_back(i);
        truth.push_back(d);
      }
    }
    if (moving.empty()) continue;  // the net is exact on this space
    std::vector<std::pair<PointRef, PointRef>> sub;
    for (auto i : moving) sub.push_back(pairs[i]);
    const auto fine = oracle_batch(e, sub, 0.01);
    for (std::size_t k = 0; k < moving.size(); ++k) {
      coarse_err.push_back(coarse[moving[k]] - truth[k]);
      fine_err.push_back(std::max(0.0, fine[k] - truth[k]));
    }
  }
  const double mc = median(coarse_err), mf = median(fine_err);
  const double ratio = mf > 0.0 ? mc / mf : (mc > 0.0 ? 1e300 : 0.0);
  add(o, !coarse_err.empty() && ratio >= 1.5,
      "median error h=0.02 " + fmt("%.2e", mc) + " vs h=0.01 " + fmt("%.2e", mf) + " over " +
          std::to_string(coarse_err.size()) + " inexact pairs, ratio " + fmt("%.2f", ratio));
  const double t = seconds_since(t0);
  add(o, t < 120.0, fmt("%.1fs", t));
  return o;
}

Outcome round_witness() {
  Outcome o;
  const auto t0 = Clock::now();
  const SpaceExpr s = sphere2();
  SampleConfig emb = config(100, 4);
  emb.tol = 1e-6;
  SampleConfig trunc = config(100, 5);
  trunc.tol = 1e-9;
  trunc.tol_opt = 1e-9;
  double worst_emb = 0.0, worst_trunc = 0.0;
  int failed = 0, ties = 0;
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 100; ++i) {
    const PointRef x = PointRef::on_sphere(0, kernel::random_unit_vector(2, rng));
    const PointRef y = i < 5 ? x : PointRef::on_sphere(0, kernel::random_unit_vector(2, rng));
    try {
      const Witness w = witness_round_sphere(s, x, y, 2);
      const bool contains = w.x_image.piece == w.piece && w.y_image.piece == w.piece &&
                            points_coincide(w.expr, w.x_image, x) && points_coincide(w.expr, w.y_image, y);
      const auto e = check_isometric_embedding(w.expr, w.piece, emb);
      const auto t = check_truncated_embedding(s, w.expr, w.map, trunc);
      worst_emb = std::max(worst_emb, e.max_deviation);
      worst_trunc = std::max(worst_trunc, t.max_deviation);
      if (!contains || !e.passed || !t.passed) ++failed;
    } catch (const GeometryError& err) {
      if (err.code() == ErrorCode::AmbiguousGeodesic) ++ties;
      ++failed;
    }
  }
  const double t = seconds_since(t0);
  add(o, failed == 0, std::to_string(100 - failed) + "/100 witnesses (" + std::to_string(ties) + " ambiguous)");
  add(o, worst_emb <= 1e-6, "embedding max deviation " + fmt("%.2e", worst_emb));
  add(o, worst_trunc <= 1e-9, "truncated max deviation " + fmt("%.2e", worst_trunc));
  add(o, t < 60.0, fmt("%.1fs", t));
  return o;
}

Outcome rolling_witness() {
  Outcome o;
  const SpaceExpr ts = build_example_twospheres(2);
  const auto pairs = find_antipodes(ts, config(200, 6));
  add(o, !pairs.empty(), std::to_string(pairs.size()) + " antipodal pairs");
  if (pairs.empty()) return o;
  double min_d = 10.0;
  for (const auto& p : pairs) min_d = std::min(min_d, p.distance);
  add(o, min_d >= kPi - 1e-6, "min distance pi - " + fmt("%.2e", kPi - min_d));
  SampleConfig c = config(1000, 7);
  c.tol = 1e-6;
  double worst = 0.0;
  bool all = true;
  for (std::size_t k = 0; k < pairs.size() && k < 8; ++k) {
    const auto a = attach_sphere_at_antipodes(ts, pairs[k].p, pairs[k].q, 2);
    const auto rep = check_isometric_embedding(a.expr, a.piece, c);
    worst = std::max(worst, rep.max_deviation);
    all = all && rep.passed;
  }
  add(o, all, "embedding max deviation " + fmt("%.2e", worst));
  return o;
}

Outcome pole_bookkeeping() {
  Outcome o;
  add(o, detect_pole(build_example_pole(2, 1.2 * kPi), PointRef::apex(0, false)), "apex over 1.2pi is a pole");
  add(o, !detect_pole(build_example_pole(2, kPi), PointRef::apex(0, false)), "apex over pi is not");
  const SpaceExpr ts = build_example_twospheres(2);
  add(o, detect_pole(ts, ts.label("p")) && detect_pole(ts, ts.label("q")), "twospheres junctions");
  const SpaceExpr hx = build_hemispherex(2, general_position_frames(2, 3, 1));
  add(o, detect_pole(hx, hx.label("x12")), "hemispherex circle intersection");
  add(o, !detect_pole(sphere2(), PointRef::on_sphere(0, v3(0.3, -0.5, 0.8))), "generic sphere point is not");
  return o;
}

Outcome strong_singularity() {
  Outcome o;
  const SpaceExpr s = sphere2();
  std::mt19937_64 rng(8);
  GeodesicSet gammas;
  std::vector<PointRef> marked;
  gammas.push_back(geodesic(s, PointRef::on_sphere(0, v3(1, 0, 0)), PointRef::on_sphere(0, v3(0, 1, 0))));
  for (int k = 0; k < 5; ++k) {
    marked.push_back(PointRef::on_sphere(0, kernel::random_unit_vector(2, rng)));
    gammas.push_back(GeodesicDescriptor::point(marked.back()));
  }
  const StepResult r = round_step(s, gammas, 2);
  int hits = 0;
  for (const auto& z : marked) hits += is_strongly_singular_structural(r.expr, r.map.apply(z)) ? 1 : 0;
  add(o, hits == 5, std::to_string(hits) + "/5 marked points strongly singular");
  return o;
}

Outcome dimension_bookkeeping() {
  Outcome o;
  const SpaceExpr s = sphere2();
  const GeodesicSet gammas = round_demo_geodesics(s, 7);
  const int d3 = dimension(round_step(s, gammas, 3).expr);
  const int d1 = dimension(round_step(s, gammas, 1).expr);
  add(o, d3 == 3, "n=3 gives " + std::to_string(d3));
  add(o, d1 == 2, "n=1 gives " + std::to_string(d1));
  return o;
}

Outcome nl_variant() {
  Outcome o;
  const double l = 1.5 * kPi;
  const SpaceExpr base = SpaceExpr::single(Piece::scaled_sphere(2, l), l);
  const double angle = 1.2 * kPi / 1.5;
  const PointRef a = PointRef::on_sphere(0, v3(1, 0, 0));
  const PointRef b = PointRef::on_sphere(0, v3(std::cos(angle), std::sin(angle), 0));
  const auto gamma = geodesic(base, a, b);
  add(o, std::abs(gamma.total_length - 1.2 * kPi) < 1e-12, "arc length " + fmt("%.6f", gamma.total_length / kPi) + "pi");
  const Attachment att = attach_sphere_along_arc(base, gamma, 2, l);
  add(o, validate(att.expr).passed(), "validates");
  SampleConfig c = config(1000, 9);
  c.tol = 1e-6;
  const auto emb_new = check_isometric_embedding(att.expr, att.piece, c);
  const auto emb_base = check_isometric_embedding(att.expr, 0, c);
  add(o, emb_new.passed && emb_base.passed,
      "embedding max deviation " + fmt("%.2e", std::max(emb_new.max_deviation, emb_base.max_deviation)));
  SampleConfig tc = config(1000, 10);
  tc.tol = 1e-9;
  const LevelEmbedding map{0, 1, 1};
  const auto tr = check_truncated_embedding(base, att.expr, map, tc);
  add(o, tr.passed, "truncated at cap 1.5pi, max deviation " + fmt("%.2e", tr.max_deviation));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"model exactness", model_exactness},
      {"gluing preserves CAT(1)", gluing_preserves_cat1},
      {"oracle equivalence", oracle_equivalence},
      {"round witness", round_witness},
      {"rolling witness", rolling_witness},
      {"pole bookkeeping", pole_bookkeeping},
      {"strong singularity bookkeeping", strong_singularity},
      {"dimension bookkeeping", dimension_bookkeeping},
      {"(n,l) variant", nl_variant},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("[%s] %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
