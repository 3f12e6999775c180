#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "roundforge/cli.hpp"
#include "roundforge/document.hpp"

using rf::kPi;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = rf::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch() {
  const auto d = std::filesystem::temp_directory_path() / "roundforge_cli_test";
  std::filesystem::create_directories(d);
  return d;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("length and point parsing") {
  CHECK(rf::parse_length("pi") == kPi);
  CHECK(rf::parse_length("1.2pi") == doctest::Approx(1.2 * kPi));
  CHECK(rf::parse_length("0.5") == 0.5);
  CHECK_CODE(rf::parse_length("abc"), rf::ErrorCode::InvalidDocument);
  const auto ts = rf::build_example_twospheres(2);
  CHECK(rf::same_coordinates(rf::parse_point(ts, "p"), ts.label("p")));
  const auto v = rf::parse_point(ts, "1:0,3,4");
  CHECK(v.piece == 1);
  CHECK(v.coords[2] == doctest::Approx(0.8));
  CHECK_CODE(rf::parse_point(ts, "nowhere"), rf::ErrorCode::InvalidPoint);
  CHECK_CODE(rf::parse_point(ts, "3:1,0,0"), rf::ErrorCode::InvalidPoint);
  const auto pole = rf::build_example_pole(2, 1.2 * kPi);
  CHECK(rf::parse_point(pole, "0:north").is_apex());
  const auto m = rf::parse_point(pole, "0:t=0.5pi|0:1,0");
  CHECK(m.height == doctest::Approx(kPi / 2));
}

TEST_CASE("build writes the builtins") {
  const auto d = scratch();
  const auto path = (d / "ts.json").string();
  auto r = run({"build", "twospheres", "--n", "2", "--out", path});
  CHECK(r.code == rf::kExitVerified);
  const auto e = rf::parse_space(slurp(path));
  CHECK(e.piece_count() == 2);
  REQUIRE(e.gluings().size() == 1);
  CHECK(e.gluings()[0].kind == rf::LocusKind::AntipodalPair);

  r = run({"build", "pole", "--n", "2", "--l", "1.2pi"});
  CHECK(r.code == 0);
  const auto pole = rf::parse_space(r.out);
  CHECK(pole.piece(0).kind == rf::PieceKind::Suspension);

  // rebuilding from the written file reproduces it byte for byte
  r = run({"build", path});
  CHECK(r.code == 0);
  CHECK(r.out == slurp(path));

  r = run({"build", "sphere", "--round-step", "3", "--round-points", "2"});
  CHECK(r.code == 0);
  CHECK(rf::parse_space(r.out).piece_count() == 6);

  r = run({"build", "twospheres", "--rolling-step", "--max-pairs", "1"});
  CHECK(r.code == 0);
  CHECK(rf::parse_space(r.out).piece_count() == 3);

  r = run({"build", "sphere", "--witness", "e1", "e2"});
  CHECK(r.code == 0);
  CHECK(rf::parse_space(r.out).piece_count() == 2);
  std::filesystem::remove_all(d);
}

TEST_CASE("invalid input exits 2") {
  const auto d = scratch();
  auto j = rf::Json::parse(rf::dump_space(rf::build_example_twospheres(2)));
  j["gluings"][0]["ambient"][1]["coords"] = {0.0, 1.0, 0.0};
  const auto bad = (d / "bad.json").string();
  rf::write_atomic(bad, j.dump(2));
  auto r = run({"build", bad});
  CHECK(r.code == rf::kExitInvalid);
  CHECK(r.err.find("antipodal pair") != std::string::npos);
  CHECK(run({"build", "klein-bottle"}).code == rf::kExitInvalid);
  CHECK(run({"build", "pole", "--l", "0.5pi"}).code == rf::kExitInvalid);
  CHECK(run({"dist", "twospheres", "p", "nowhere"}).code == rf::kExitInvalid);
  CHECK(run({"verify", "sphere", "--suites", "bogus"}).code == rf::kExitInvalid);
  CHECK(run({"verify", "sphere", "--format", "yaml"}).code == rf::kExitInvalid);
  CHECK(run({}).code == rf::kExitInvalid);
  std::filesystem::remove_all(d);
}

TEST_CASE("dist") {
  auto r = run({"dist", "twospheres", "p", "q"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("distance 3.14159", 0) == 0);
  r = run({"dist", "twospheres", "0:0.7071067811865476,0,0.7071067811865476", "1:0.7071067811865476,0,0.7071067811865476",
           "--format", "json"});
  CHECK(r.code == 0);
  const auto j = rf::Json::parse(r.out);
  CHECK(j["raw"].get<double>() == doctest::Approx(kPi / 2));
  CHECK(j["truncated"].get<double>() == doctest::Approx(kPi / 2));
  CHECK(j.contains("achieved_tol"));
  r = run({"dist", "sphere", "e1", "e1"});
  CHECK(r.out.rfind("distance 0\n", 0) == 0);
}

TEST_CASE("verify exit codes and report") {
  auto r = run({"verify", "sphere", "--samples", "50", "--format", "json"});
  CHECK(r.code == rf::kExitVerified);
  auto j = rf::Json::parse(r.out);
  CHECK(j["passed"].get<bool>());
  CHECK(j["version"] == rf::kFormatVersion);
  CHECK(j["input_digest"].get<std::string>().size() == 16);
  CHECK(j["config"]["seed"] == 1);
  CHECK(j["suites"].size() == 6);
  CHECK(j.contains("wall_time"));

  // broken gluing control: child arc shorter than the parent arc
  const auto s = rf::SpaceExpr::single(rf::Piece::unit_sphere(2));
  const auto g = rf::geodesic(s, on(0, {1, 0, 0}), on(0, {0, 1, 0}));
  const auto broken = rf::SpaceExpr({rf::Piece::unit_sphere(2), rf::Piece::unit_sphere(2)},
                                    {rf::GluingLocus::arc_chain(g, rf::canonical_arc(1, 2, kPi, kPi / 2 - 0.2))}, kPi, 0);
  const auto d = scratch();
  const auto path = (d / "broken.json").string();
  rf::write_atomic(path, rf::dump_space(broken));
  CHECK(run({"verify", path, "--suites", "cat1"}).code == rf::kExitInvalid);
  r = run({"verify", path, "--suites", "cat1", "--allow-invalid", "--samples", "1000", "--format", "json"});
  CHECK(r.code == rf::kExitViolations);
  j = rf::Json::parse(r.out);
  CHECK_FALSE(j["suites"][0]["violations"].empty());

  r = run({"verify", "hemispherex", "--suites", "poles", "--circles", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("pole at x12") != std::string::npos);
  std::filesystem::remove_all(d);
}

TEST_CASE("verify is deterministic apart from wall time") {
  auto a = rf::Json::parse(run({"verify", "twospheres", "--samples", "40", "--format", "json"}).out);
  auto b = rf::Json::parse(run({"verify", "twospheres", "--samples", "40", "--format", "json", "--serial"}).out);
  a.erase("wall_time");
  b.erase("wall_time");
  CHECK(a.dump() == b.dump());
}

TEST_CASE("witness") {
  const auto d = scratch();
  const auto out = (d / "w.json").string(), rep = (d / "w_report.json").string();
  auto r = run({"witness", "sphere", "e1", "e2", "--out", out, "--report", rep});
  CHECK(r.code == rf::kExitVerified);
  CHECK(rf::parse_space(slurp(out)).piece_count() == 2);
  CHECK(rf::Json::parse(slurp(rep))["passed"].get<bool>());
  CHECK(run({"witness", "sphere", "e1", "e1"}).code == rf::kExitVerified);
  const auto big = rf::SpaceExpr::single(rf::Piece::scaled_sphere(2, 1.5 * kPi), 1.5 * kPi)
                       .with_label("a", on(0, {1, 0, 0}))
                       .with_label("b", rf::PointRef::on_sphere(0, vec({std::cos(0.8 * kPi), std::sin(0.8 * kPi), 0})));
  const auto big_path = (d / "big.json").string();
  rf::write_atomic(big_path, rf::dump_space(big));
  r = run({"witness", big_path, "a", "b"});
  CHECK(r.code == rf::kExitInvalid);
  CHECK(r.err.find("TruncationExceeded") != std::string::npos);
  CHECK(run({"witness", big_path, "a", "b", "--sphere-l", "1.5pi"}).code == rf::kExitVerified);
  std::filesystem::remove_all(d);
}

TEST_CASE("help lists every default") {
  auto r = run({"verify", "--help"});
  CHECK(r.code == 0);
  for (const char* s : {"--seed", "--samples", "--tol", "--tol-opt", "--max-hops", "--net-h", "--format"}) {
    CHECK(r.out.find(s) != std::string::npos);
  }
  CHECK(r.out.find("0.001") != std::string::npos);
  CHECK(r.out.find("0.02") != std::string::npos);
}

TEST_CASE("installed binary") {
  const std::string cmd = std::string(ROUNDFORGE_BIN) + " dist twospheres p q > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
  const std::string bad = std::string(ROUNDFORGE_BIN) + " dist twospheres p 9:1,0,0 2> /dev/null";
  const int status = std::system(bad.c_str());
  CHECK(WEXITSTATUS(status) == 2);
}
