#include "support.hpp"
#include "roundforge/oracle.hpp"

using rf::kPi;

TEST_CASE("oracle on the unit sphere") {
  const auto s = rf::SpaceExpr::single(rf::Piece::unit_sphere(2));
  const double d = rf::oracle_distance(s, on(0, {1, 0, 0}), on(0, {0, 0, 1}), 0.02);
  CHECK(std::abs(d - kPi / 2) <= 0.06);
  CHECK(d >= kPi / 2 - 1e-12);
}

TEST_CASE("oracle on twospheres") {
  const auto ts = rf::build_example_twospheres(2);
  const auto x = meridian(0, kPi / 4), y = meridian(1, kPi / 4);
  const double d = rf::oracle_distance(ts, x, y, 0.02);
  // junctions are nodes themselves, so the net is exact here
  CHECK(d == doctest::Approx(kPi / 2).epsilon(1e-12));
}

TEST_CASE("oracle overestimates and converges on an arc gluing") {
  const auto s = rf::SpaceExpr::single(rf::Piece::unit_sphere(2));
  const auto g = rf::geodesic(s, on(0, {1, 0, 0}), on(0, {0, 1, 0}));
  const auto e = rf::attach_sphere_along_arc(s, g, 2).expr;
  std::vector<std::pair<rf::PointRef, rf::PointRef>> pairs;
  for (std::uint64_t i = 0; i < 40; ++i) {
    auto rng = rf::sample_rng(4, i);
    pairs.emplace_back(rf::sample_point_on_piece(e, 0, rng), rf::sample_point_on_piece(e, 1, rng));
  }
  double err_coarse = 0.0, err_fine = 0.0;
  const auto coarse = rf::oracle_batch(e, pairs, 0.08);
  const auto fine = rf::oracle_batch(e, pairs, 0.04);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double truth = rf::distance(e, pairs[i].first, pairs[i].second).value;
    CHECK(coarse[i] >= truth - 1e-9);
    CHECK(fine[i] >= truth - 1e-9);
    CHECK(fine[i] - truth <= 3 * 0.04);
    err_coarse += coarse[i] - truth;
    err_fine += fine[i] - truth;
  }
  CHECK(err_fine < err_coarse);
}

TEST_CASE("oracle guards") {
  const auto s3 = rf::SpaceExpr::single(rf::Piece::unit_sphere(3));
  CHECK_CODE(rf::oracle_distance(s3, on(0, {1, 0, 0, 0}), on(0, {0, 1, 0, 0}), 0.02), rf::ErrorCode::ResourceLimit);
  const auto hx = rf::build_hemispherex(2, rf::general_position_frames(2, 3, 1));
  rf::OracleOptions tight;
  tight.node_budget = 100;
  CHECK_CODE(rf::oracle_distance(hx, on(0, {1, 0, 0}), on(1, {0, 0, 1}), 0.02, tight), rf::ErrorCode::ResourceLimit);
}

TEST_CASE("oracle batch is schedule independent") {
  const auto hx = rf::build_hemispherex(2, rf::general_position_frames(2, 3, 1));
  std::vector<std::pair<rf::PointRef, rf::PointRef>> pairs;
  for (std::uint64_t i = 0; i < 12; ++i) {
    auto rng = rf::sample_rng(8, i);
    pairs.emplace_back(rf::sample_point(hx, rng), rf::sample_point(hx, rng));
  }
  const auto a = rf::oracle_batch(hx, pairs, 0.05, rf::ExecutionPolicy::Serial);
  const auto b = rf::oracle_batch(hx, pairs, 0.05, rf::ExecutionPolicy::Parallel);
  CHECK(a == b);
}
