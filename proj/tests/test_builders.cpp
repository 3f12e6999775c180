#include <random>

#include "support.hpp"
#include "roundforge/verify.hpp"

using rf::kPi;

namespace {

rf::SpaceExpr sphere2() { return rf::SpaceExpr::single(rf::Piece::unit_sphere(2)); }

rf::SampleConfig quick(int count = 200) {
  rf::SampleConfig c;
  c.count = count;
  c.seed = 17;
  return c;
}

void check_base_unchanged(const rf::SpaceExpr& before, const rf::SpaceExpr& after, int pairs) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < pairs; ++i) {
    const auto x = rf::sample_point(before, rng), y = rf::sample_point(before, rng);
    CHECK(std::abs(rf::distance(before, x, y).value - rf::distance(after, x, y).value) <= 1e-9);
  }
}

}  // namespace

TEST_CASE("attach_sphere_along_arc") {
  const auto s = sphere2();
  const auto g = rf::geodesic(s, on(0, {1, 0, 0}), on(0, {0, 1, 0}));
  const auto a = rf::attach_sphere_along_arc(s, g, 2);
  CHECK(a.expr.piece_count() == 2);
  CHECK(a.piece == 1);
  CHECK(rf::validate(a.expr).passed());
  CHECK(a.expr.piece(1).level == 1);
  check_base_unchanged(s, a.expr, 1000);
  CHECK(rf::check_isometric_embedding(a.expr, 1, quick()).passed);

  CHECK_CODE(rf::attach_sphere_along_arc(s, rf::GeodesicDescriptor::point(on(0, {1, 0, 0})), 2),
             rf::ErrorCode::DegenerateArc);
  const auto big = rf::SpaceExpr::single(rf::Piece::scaled_sphere(2, 1.5 * kPi), 1.5 * kPi);
  const rf::Vec far = vec({std::cos(1.2 * kPi / 1.5), std::sin(1.2 * kPi / 1.5), 0.0});
  const auto long_arc = rf::geodesic(big, on(0, {1, 0, 0}), rf::PointRef::on_sphere(0, far));
  CHECK(long_arc.total_length == doctest::Approx(1.2 * kPi));
  CHECK_CODE(rf::attach_sphere_along_arc(big, long_arc, 2, kPi), rf::ErrorCode::TruncationExceeded);
  const auto ok = rf::attach_sphere_along_arc(big, long_arc, 2, 1.5 * kPi);
  CHECK(ok.expr.piece(1).kind == rf::PieceKind::ScaledSphere);
  CHECK(rf::validate(ok.expr).passed());
}

TEST_CASE("attach_sphere_at_point") {
  const auto s = sphere2();
  const auto z = on(0, {0, 0, 1});
  const auto a = rf::attach_sphere_at_point(s, z, 2);
  CHECK(rf::is_strongly_singular_structural(a.expr, z));
  const auto x = on(0, {1, 0, 0});
  const double alpha = 0.7;
  const auto y = rf::PointRef::on_sphere(a.piece, vec({std::cos(alpha), std::sin(alpha), 0.0}));
  CHECK(rf::distance(a.expr, x, y).value == doctest::Approx(kPi / 2 + alpha).epsilon(1e-12));
  check_base_unchanged(s, a.expr, 300);
  CHECK_CODE(rf::attach_sphere_at_point(s, on(3, {1, 0, 0}), 2), rf::ErrorCode::InvalidPoint);
}

TEST_CASE("attach_sphere_at_antipodes") {
  const auto s = sphere2();
  const auto a = rf::attach_sphere_at_antipodes(s, on(0, {1, 0, 0}), on(0, {-1, 0, 0}), 2);
  CHECK(rf::validate(a.expr).passed());
  CHECK(rf::detect_pole(a.expr, on(0, {1, 0, 0})));
  // same metric as the twospheres example
  const auto ts = rf::build_example_twospheres(2);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto x = rf::sample_point(ts, rng), y = rf::sample_point(ts, rng);
    CHECK(rf::distance(a.expr, x, y).value == doctest::Approx(rf::distance(ts, x, y).value).epsilon(1e-12));
  }
  bool thrown = false;
  try {
    rf::attach_sphere_at_antipodes(s, on(0, {1, 0, 0}), on(0, {0, 1, 0}), 2);
  } catch (const rf::GeometryError& e) {
    thrown = true;
    CHECK(e.code() == rf::ErrorCode::NotAntipodal);
    REQUIRE(e.measured().has_value());
    CHECK(*e.measured() == doctest::Approx(kPi / 2));
  }
  CHECK(thrown);
}

TEST_CASE("attach_expr_along_arc") {
  const auto s = sphere2();
  const auto ts = rf::build_example_twospheres(2);
  const auto g = rf::geodesic(s, on(0, {1, 0, 0}), rf::PointRef::on_sphere(0, vec({std::cos(kPi / 3), std::sin(kPi / 3), 0})));
  const auto cg = rf::geodesic(ts, meridian(0, 0.2), meridian(0, 0.2 + kPi / 3));
  const auto e = rf::attach_expr_along_arc(s, g, ts, cg);
  CHECK(e.piece_count() == 3);
  CHECK(rf::validate(e).passed());
  check_base_unchanged(s, e, 200);
  // child internal distances, with child ids shifted by one
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    auto x = rf::sample_point(ts, rng), y = rf::sample_point(ts, rng);
    const double before = rf::distance(ts, x, y).value;
    x.piece += 1;
    y.piece += 1;
    CHECK(std::abs(rf::distance(e, x, y).value - before) <= 1e-9);
  }
  const auto short_g = rf::geodesic(ts, meridian(0, 0.2), meridian(0, 0.2 + kPi / 3 - 0.01));
  CHECK_CODE(rf::attach_expr_along_arc(s, g, ts, short_g), rf::ErrorCode::LengthMismatch);
}

TEST_CASE("round_step") {
  const auto s = sphere2();
  const auto gammas = rf::round_demo_geodesics(s, 7);
  REQUIRE(gammas.size() == 5);
  const auto r = rf::round_step(s, gammas, 2);
  CHECK(r.expr.piece_count() == 6);
  CHECK(r.expr.level() == 1);
  CHECK(r.map.source_level == 0);
  CHECK(r.map.target_level == 1);
  CHECK(r.new_pieces.size() == 5);
  CHECK(rf::validate(r.expr).passed());
  CHECK(rf::is_strongly_singular_structural(r.expr, gammas[3].start));
  CHECK(rf::is_strongly_singular_structural(r.expr, gammas[4].start));
  CHECK(rf::dimension(rf::round_step(s, gammas, 3).expr) == 3);
  CHECK(rf::dimension(rf::round_step(s, gammas, 1).expr) == 2);
  const auto same = rf::build_round_demo(7);
  CHECK(same.piece_count() == 6);
  CHECK(same.labels().count("w1") == 1);
}

TEST_CASE("rolling_step") {
  const auto pole = rf::build_example_pole(2, 1.2 * kPi);
  const auto n = rf::PointRef::apex(0, false), s = rf::PointRef::apex(0, true);
  const auto r = rf::rolling_step(pole, {{n, s}}, 2);
  CHECK(r.expr.piece_count() == 2);
  CHECK(r.expr.level() == 1);
  CHECK(rf::detect_pole(r.expr, n));
  CHECK(rf::detect_pole(r.expr, s));
  CHECK(rf::check_isometric_embedding(r.expr, 1, quick()).passed);

  const auto empty = rf::rolling_step(pole, {}, 2);
  CHECK(empty.expr.piece_count() == 1);
  CHECK(empty.expr.level() == 1);
}

TEST_CASE("witness_round_sphere") {
  const auto s = sphere2();
  const auto x = on(0, {1, 0, 0});
  const auto w0 = rf::witness_round_sphere(s, x, x, 2);
  CHECK(w0.expr.gluings().back().kind == rf::LocusKind::PointWedge);
  CHECK(rf::points_coincide(w0.expr, w0.x_image, x));

  const auto y = on(0, {0, 1, 0});
  const auto w = rf::witness_round_sphere(s, x, y, 2);
  CHECK(w.x_image.piece == w.piece);
  CHECK(w.y_image.piece == w.piece);
  CHECK(rf::points_coincide(w.expr, w.x_image, x));
  CHECK(rf::points_coincide(w.expr, w.y_image, y));
  const auto rep = rf::check_isometric_embedding(w.expr, w.piece, quick());
  CHECK(rep.passed);
  CHECK(rep.max_deviation <= 1e-6);

  const auto big = rf::SpaceExpr::single(rf::Piece::scaled_sphere(2, 1.5 * kPi), 1.5 * kPi);
  const rf::Vec far = vec({std::cos(1.3 * kPi / 1.5), std::sin(1.3 * kPi / 1.5), 0.0});
  CHECK_CODE(rf::witness_round_sphere(big, x, rf::PointRef::on_sphere(0, far), 2, kPi),
             rf::ErrorCode::TruncationExceeded);
}

TEST_CASE("examples") {
  const auto ts = rf::build_example_twospheres(2);
  CHECK(ts.piece_count() == 2);
  REQUIRE(ts.gluings().size() == 1);
  CHECK(ts.gluings()[0].kind == rf::LocusKind::AntipodalPair);
  CHECK(rf::dimension(ts) == 2);
  CHECK(rf::dimension(rf::build_example_twospheres(3)) == 3);

  const auto pole = rf::build_example_pole(2, 1.2 * kPi);
  CHECK(pole.piece(0).kind == rf::PieceKind::Suspension);

  const auto frames = rf::general_position_frames(2, 3, 5);
  CHECK(rf::hemispherex_condition(2, frames));
  const auto hx = rf::build_hemispherex(2, frames);
  CHECK(hx.piece_count() == 4);
  CHECK(rf::validate(hx).passed());
  CHECK(hx.labels().size() == 3);
  CHECK_CODE(rf::build_hemispherex(2, {frames[0]}), rf::ErrorCode::CommonAntipodes);
  CHECK_CODE(rf::build_hemispherex(2, {frames[0], frames[1]}), rf::ErrorCode::CommonAntipodes);
  // three circles through a common axis share its antipodes
  const std::vector<Eigen::MatrixXd> pencil{rf::frame_from_normal(unit({1, 0, 0})),
                                            rf::frame_from_normal(unit({0, 1, 0})),
                                            rf::frame_from_normal(unit({1, 1, 0}))};
  CHECK_CODE(rf::build_hemispherex(2, pencil), rf::ErrorCode::CommonAntipodes);
  const auto f = rf::frame_from_normal(unit({1, 2, 3}));
  CHECK((f.transpose() * f - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-12);
  CHECK(std::abs(std::abs(rf::frame_normal(f).dot(unit({1, 2, 3}))) - 1.0) < 1e-12);
}

TEST_CASE("every builder output validates") {
  for (const auto& e : {rf::build_example_twospheres(2), rf::build_example_pole(2, 1.2 * kPi),
                        rf::build_example_pole(3, 1.5 * kPi),
                        rf::build_hemispherex(2, rf::general_position_frames(2, 3, 2)),
                        rf::build_hemispherex(3, rf::general_position_frames(3, 4, 2)), rf::build_round_demo(7),
                        rf::build_round_demo(12)}) {
    CHECK(rf::validate(e).passed());
  }
}
