#include <filesystem>
#include <fstream>

#include "support.hpp"
#include "roundforge/document.hpp"

using rf::kPi;

namespace {

std::vector<rf::SpaceExpr> corpus() {
  const auto s = rf::SpaceExpr::single(rf::Piece::unit_sphere(2));
  const auto ts = rf::build_example_twospheres(2);
  const auto g = rf::geodesic(s, on(0, {1, 0, 0}), on(0, {0, 1, 0}));
  const auto cg = rf::geodesic(ts, meridian(0, 0.1), meridian(0, 0.1 + kPi / 2));
  return {s,
          ts,
          rf::build_example_pole(2, 1.2 * kPi),
          rf::build_example_pole(3, 1.4 * kPi),
          rf::build_hemispherex(2, rf::general_position_frames(2, 3, 1)),
          rf::build_round_demo(7),
          rf::attach_expr_along_arc(s, g, ts, cg),
          rf::rolling_step(rf::build_example_pole(2, 1.2 * kPi),
                           {{rf::PointRef::apex(0, false), rf::PointRef::apex(0, true)}}, 2)
              .expr};
}

}  // namespace

TEST_CASE("serialize, parse, serialize is byte identical") {
  for (const auto& e : corpus()) {
    const std::string a = rf::dump_space(e);
    const auto parsed = rf::parse_space(a);
    const std::string b = rf::dump_space(parsed);
    CHECK(a == b);
    CHECK(parsed.piece_count() == e.piece_count());
    CHECK(parsed.level() == e.level());
    CHECK(rf::validate(parsed).passed());
  }
}

TEST_CASE("parsed spaces measure the same distances") {
  const auto e = rf::build_round_demo(7);
  const auto p = rf::parse_space(rf::dump_space(e));
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto rng = rf::sample_rng(2, i);
    const auto x = rf::sample_point(e, rng), y = rf::sample_point(e, rng);
    CHECK(rf::distance(e, x, y).value == rf::distance(p, x, y).value);
  }
}

TEST_CASE("descriptor round trip") {
  const auto ts = rf::build_example_twospheres(2);
  const auto g = rf::geodesic(ts, meridian(0, 0.5), meridian(1, 0.5));
  const auto j = rf::descriptor_to_json(g);
  const auto back = rf::descriptor_from_json(j);
  CHECK(rf::descriptor_to_json(back).dump() == j.dump());
  CHECK(back.total_length == g.total_length);
}

TEST_CASE("malformed documents") {
  CHECK_CODE(rf::parse_space("{"), rf::ErrorCode::InvalidDocument);
  CHECK_CODE(rf::parse_space("{\"format_version\": 99}"), rf::ErrorCode::InvalidDocument);
  auto j = rf::Json::parse(rf::dump_space(rf::build_example_twospheres(2)));
  j["pieces"][0]["kind"] = "torus";
  CHECK_CODE(rf::parse_space(j.dump()), rf::ErrorCode::InvalidDocument);
  auto k = rf::Json::parse(rf::dump_space(rf::build_example_twospheres(2)));
  k["gluings"][0].erase("ambient");
  CHECK_CODE(rf::parse_space(k.dump()), rf::ErrorCode::InvalidDocument);
}

TEST_CASE("atomic writes") {
  const auto dir = std::filesystem::temp_directory_path() / "roundforge_doc_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "space.json").string();
  rf::write_atomic(path, "first\n");
  rf::write_atomic(path, "second\n");
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "second");
  int files = 0;
  for ([[maybe_unused]] const auto& f : std::filesystem::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("fnv1a") {
  CHECK(rf::fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(rf::fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}
