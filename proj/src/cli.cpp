#include "roundforge/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "roundforge/document.hpp"
#include "roundforge/error.hpp"

namespace roundforge {
namespace {

struct RunConfig {
  std::uint64_t seed = 1;
  int samples = 1000;
  double tol = 1e-7;
  double tol_opt = 1e-3;
  int max_hops = 0;
  double net_h = 0.02;
  std::string format = "text";
  std::string out;
  bool serial = false;

  SampleConfig sample() const {
    SampleConfig c;
    c.seed = seed;
    c.count = samples;
    c.tol = tol;
    c.tol_opt = tol_opt;
    c.max_hops = max_hops;
    c.net_h = net_h;
    c.policy = serial ? ExecutionPolicy::Serial : ExecutionPolicy::Parallel;
    return c;
  }

  Json to_json() const {
    return {{"seed", seed},     {"samples", samples}, {"tol", tol},
            {"tol_opt", tol_opt}, {"max_hops", max_hops}, {"net_h", net_h}};
  }
};

void add_run_options(CLI::App* app, RunConfig& c) {
  app->add_option("--seed", c.seed, "sampling seed")->capture_default_str();
  app->add_option("--samples", c.samples, "samples per suite")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--tol", c.tol, "tolerance for closed-form results")->capture_default_str();
  app->add_option("--tol-opt", c.tol_opt, "tolerance for optimized crossings")->capture_default_str();
  app->add_option("--max-hops", c.max_hops, "max distinct pieces per path (0 = all)")->capture_default_str();
  app->add_option("--net-h", c.net_h, "oracle net resolution")->capture_default_str();
  app->add_option("--format", c.format, "output format")
      ->capture_default_str()
      ->check(CLI::IsMember({"text", "json"}));
  app->add_option("--out", c.out, "output path (default: standard output)");
  app->add_flag("--serial", c.serial, "run suites on one thread");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw GeometryError(ErrorCode::InvalidDocument, "cannot read '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

std::string hex(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
  } else {
    write_atomic(c.out, text);
  }
}

SpaceExpr load_input(const std::string& input, int n, double l, int circles, std::uint64_t seed) {
  if (std::filesystem::is_regular_file(input)) return parse_space(read_file(input));
  return builtin_space(input, n, l, circles, seed);
}

void require_valid(const SpaceExpr& expr, bool allow_invalid) {
  const auto rep = validate(expr);
  if (rep.passed() || allow_invalid) return;
  std::string what = "document fails validation";
  if (!rep.problems.empty()) what += ": " + rep.problems.front();
  throw GeometryError(ErrorCode::InvalidDocument, what);
}

GeodesicSet sample_geodesics(const SpaceExpr& expr, int arcs, int points, std::uint64_t seed) {
  GeodesicSet out;
  for (std::uint64_t i = 0; static_cast<int>(out.size()) < arcs && i < 1000; ++i) {
    auto rng = sample_rng(seed, i);
    const PointRef x = sample_point(expr, rng);
    const PointRef y = sample_point(expr, rng);
    try {
      auto g = geodesic(expr, x, y);
      if (!g.degenerate()) out.push_back(std::move(g));
    } catch (const GeometryError& e) {
      if (e.code() != ErrorCode::AmbiguousGeodesic && e.code() != ErrorCode::TruncationExceeded) throw;
    }
  }
  for (int k = 0; k < points; ++k) {
    auto rng = sample_rng(seed ^ 0x9e3779b97f4a7c15ULL, static_cast<std::uint64_t>(k));
    out.push_back(GeodesicDescriptor::point(sample_point(expr, rng)));
  }
  return out;
}

Json wrap_report(const RunConfig& c, const std::string& digest, const std::vector<SuiteReport>& suites,
                 double wall) {
  Json r;
  r["version"] = kFormatVersion;
  r["input_digest"] = digest;
  r["config"] = c.to_json();
  Json arr = Json::array();
  bool passed = true;
  for (const auto& s : suites) {
    arr.push_back(report_to_json(s));
    passed = passed && s.passed;
  }
  r["suites"] = std::move(arr);
  r["passed"] = passed;
  r["wall_time"] = wall;
  return r;
}

std::string text_report(const std::vector<SuiteReport>& suites) {
  std::ostringstream s;
  for (const auto& r : suites) {
    s << std::left << std::setw(10) << r.name << (r.passed ? "PASS" : "FAIL") << "  samples=" << r.samples
      << " skipped=" << r.skipped << " violations=" << r.violation_count
      << " max_deviation=" << num(r.max_deviation) << "\n";
    for (const auto& n : r.notes) s << "    " << n << "\n";
    for (std::size_t k = 0; k < r.violations.size() && k < 3; ++k) {
      const auto& v = r.violations[k];
      s << "    violation: " << v.detail << " measured=" << num(v.measured) << " bound=" << num(v.bound)
        << "\n";
    }
  }
  return s.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

}  // namespace

double parse_length(const std::string& text) {
  std::string t = text;
  double factor = 1.0;
  if (t.size() >= 2 && t.compare(t.size() - 2, 2, "pi") == 0) {
    factor = kPi;
    t.resize(t.size() - 2);
    if (!t.empty() && t.back() == '*') t.pop_back();
    if (t.empty()) return kPi;
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != t.size() || t.empty()) {
    throw GeometryError(ErrorCode::InvalidDocument, "cannot parse length '" + text + "'");
  }
  return v * factor;
}

PointRef parse_point(const SpaceExpr& expr, const std::string& text) {
  if (expr.labels().count(text)) return expr.label(text);
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw GeometryError(ErrorCode::InvalidPoint, "unknown point label '" + text + "'");
  }
  int piece = 0;
  try {
    piece = std::stoi(text.substr(0, colon));
  } catch (const std::exception&) {
    throw GeometryError(ErrorCode::InvalidPoint, "bad piece id in '" + text + "'");
  }
  if (piece < 0 || piece >= expr.piece_count()) {
    throw GeometryError(ErrorCode::InvalidPoint, "no piece " + std::to_string(piece) + " in '" + text + "'");
  }
  const Piece& p = expr.piece(piece);
  const std::string rest = text.substr(colon + 1);
  PointRef out;
  if (p.sphere_like()) {
    const auto parts = split(rest, ',');
    Vec v(static_cast<Eigen::Index>(std::min<std::size_t>(parts.size(), kMaxCoords)));
    if (parts.empty() || parts.size() > static_cast<std::size_t>(kMaxCoords)) {
      throw GeometryError(ErrorCode::InvalidPoint, "bad coordinates in '" + text + "'");
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
      try {
        v[static_cast<Eigen::Index>(i)] = std::stod(parts[i]);
      } catch (const std::exception&) {
        throw GeometryError(ErrorCode::InvalidPoint, "bad coordinate '" + parts[i] + "'");
      }
    }
    if (v.norm() == 0.0) throw GeometryError(ErrorCode::InvalidPoint, "zero vector in '" + text + "'");
    out = PointRef::on_sphere(piece, v.normalized());
  } else if (rest == "north" || rest == "south") {
    out = PointRef::apex(piece, rest == "south");
  } else if (rest.rfind("t=", 0) == 0) {
    const auto bar = rest.find('|');
    if (bar == std::string::npos) throw GeometryError(ErrorCode::InvalidPoint, "expected t=H|BASE");
    const double t = parse_length(rest.substr(2, bar - 2));
    auto base = std::make_shared<const PointRef>(parse_point(*p.base, rest.substr(bar + 1)));
    out = PointRef::on_suspension(piece, t, std::move(base));
  } else {
    throw GeometryError(ErrorCode::InvalidPoint, "cannot parse suspension point '" + text + "'");
  }
  check_point(expr, out);
  return out;
}

SpaceExpr builtin_space(const std::string& name, int n, double l, int circles, std::uint64_t seed) {
  if (name == "sphere") {
    SpaceExpr e = SpaceExpr::single(Piece::unit_sphere(n));
    for (int k = 0; k <= n && k < 3; ++k) {
      e = e.with_label("e" + std::to_string(k + 1), PointRef::on_sphere(0, kernel::basis(n + 1, k)));
    }
    return e.with_label("m1", PointRef::on_sphere(0, -kernel::basis(n + 1, 0)));
  }
  if (name == "twospheres") return build_example_twospheres(n);
  if (name == "pole") return build_example_pole(n, l);
  if (name == "hemispherex") return build_hemispherex(n, general_position_frames(n, circles, seed));
  if (name == "round-demo") return build_round_demo(seed);
  throw GeometryError(ErrorCode::InvalidDocument,
                      "'" + name + "' is neither a file nor a builtin "
                      "(sphere, twospheres, pole, hemispherex, round-demo)");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"roundforge: finite levels of glued CAT(1) spaces"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string input, px, py, suites = "metric,cat1,embed,antipodes,poles,truncated";
  int n = 2, circles = 3, round_arcs = 0, round_points = 0, round_n = 0, max_pairs = 4, piece = -1;
  std::string l_text = "1.2pi", sphere_l_text = "pi";
  bool rolling = false, allow_invalid = false;
  std::vector<std::string> witness;

  auto* build = app.add_subcommand("build", "write a space document from a builtin or a file");
  build->add_option("input", input, "builtin name or document path")->required();
  build->add_option("--n", n, "dimension for builtins")->capture_default_str();
  build->add_option("--l", l_text, "base diameter for the pole builtin")->capture_default_str();
  build->add_option("--circles", circles, "hyperspheres for hemispherex")->capture_default_str();
  build->add_option("--round-step", round_arcs, "one round step over this many sampled geodesics")
      ->capture_default_str();
  build->add_option("--round-points", round_points, "degenerate geodesics in the round step")
      ->capture_default_str();
  build->add_option("--sphere-n", round_n, "dimension of attached spheres (0 = space dimension)")
      ->capture_default_str();
  build->add_option("--sphere-l", sphere_l_text, "diameter of attached spheres")->capture_default_str();
  build->add_flag("--rolling-step", rolling, "one rolling step over found antipodes");
  build->add_option("--max-pairs", max_pairs, "antipodal pairs used by the rolling step")
      ->capture_default_str();
  build->add_option("--witness", witness, "attach a witness sphere through two points")->expected(2);
  build->add_flag("--allow-invalid", allow_invalid, "skip validation");
  add_run_options(build, cfg);

  auto* dist = app.add_subcommand("dist", "distance between two points");
  dist->add_option("doc", input, "builtin name or document path")->required();
  dist->add_option("x", px, "label or P:coords")->required();
  dist->add_option("y", py, "label or P:coords")->required();
  dist->add_option("--n", n, "dimension for builtins")->capture_default_str();
  dist->add_option("--l", l_text, "base diameter for the pole builtin")->capture_default_str();
  dist->add_option("--circles", circles, "hyperspheres for hemispherex")->capture_default_str();
  dist->add_flag("--allow-invalid", allow_invalid, "skip validation");
  add_run_options(dist, cfg);

  auto* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("doc", input, "builtin name or document path")->required();
  verify->add_option("--suites", suites, "comma list of metric,cat1,embed,antipodes,poles,truncated,oracle")
      ->capture_default_str();
  verify->add_option("--piece", piece, "piece for the embed suite (-1 = every piece)")->capture_default_str();
  verify->add_option("--n", n, "dimension for builtins")->capture_default_str();
  verify->add_option("--l", l_text, "base diameter for the pole builtin")->capture_default_str();
  verify->add_option("--circles", circles, "hyperspheres for hemispherex")->capture_default_str();
  verify->add_flag("--allow-invalid", allow_invalid, "verify documents that fail validation");
  add_run_options(verify, cfg);

  auto* wit = app.add_subcommand("witness", "materialize a witness sphere and check its embedding");
  std::string report_path;
  wit->add_option("doc", input, "builtin name or document path")->required();
  wit->add_option("x", px, "label or P:coords")->required();
  wit->add_option("y", py, "label or P:coords")->required();
  wit->add_option("--sphere-n", round_n, "dimension of the witness sphere (0 = 2)")->capture_default_str();
  wit->add_option("--sphere-l", sphere_l_text, "diameter of the witness sphere")->capture_default_str();
  wit->add_option("--report", report_path, "embedding report path");
  wit->add_option("--n", n, "dimension for builtins")->capture_default_str();
  wit->add_option("--l", l_text, "base diameter for the pole builtin")->capture_default_str();
  wit->add_option("--circles", circles, "hyperspheres for hemispherex")->capture_default_str();
  add_run_options(wit, cfg);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitVerified;
  } catch (const CLI::ParseError& e) {
    // help on a subcommand arrives as CallForHelp too; everything else is a usage error
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    const double l = parse_length(l_text);
    const double sphere_l = parse_length(sphere_l_text);
    SpaceExpr expr = load_input(input, n, l, circles, cfg.seed);
    require_valid(expr, allow_invalid);
    const SampleConfig scfg = cfg.sample();
    const std::string digest = hex(fnv1a(dump_space(expr)));

    if (build->parsed()) {
      const int sn = round_n > 0 ? round_n : expr.dimension();
      if (round_arcs > 0 || round_points > 0) {
        expr = round_step(expr, sample_geodesics(expr, round_arcs, round_points, cfg.seed), sn, sphere_l).expr;
      }
      if (rolling) {
        // only pairs that will pass validation at the locus tolerance
        AntipodeSet a;
        for (const auto& p : find_antipodes(expr, scfg)) {
          if (static_cast<int>(a.size()) >= max_pairs) break;
          if (std::abs(p.distance - kPi) <= 1e-9) a.emplace_back(p.p, p.q);
        }
        expr = rolling_step(expr, a, sn).expr;
      }
      if (witness.size() == 2) {
        const PointRef x = parse_point(expr, witness[0]);
        const PointRef y = parse_point(expr, witness[1]);
        expr = witness_round_sphere(expr, x, y, sn, sphere_l).expr;
      }
      require_valid(expr, allow_invalid);
      const std::string doc = dump_space(expr);
      emit(cfg, doc, out);
      if (!cfg.out.empty()) {
        out << "wrote " << cfg.out << ": " << expr.piece_count() << " pieces, " << expr.gluings().size()
            << " gluings\n";
      }
      return kExitVerified;
    }

    if (dist->parsed()) {
      const PointRef x = parse_point(expr, px);
      const PointRef y = parse_point(expr, py);
      const auto r = distance(expr, x, y, scfg.engine());
      const double t = std::min(expr.truncation(), r.value);
      std::string text;
      if (cfg.format == "json") {
        Json j = {{"raw", r.value},
                  {"truncated", t},
                  {"achieved_tol", r.achieved_tol},
                  {"optimized", r.optimized},
                  {"paths_considered", r.paths_considered},
                  {"rounds", r.rounds}};
        text = j.dump(2) + "\n";
      } else {
        text = "distance " + num(r.value) + "\ntruncated " + num(t) + "\nachieved_tol " +
               num(r.achieved_tol) + "\n";
      }
      emit(cfg, text, out);
      return kExitVerified;
    }

    if (verify->parsed()) {
      std::vector<SuiteReport> reports;
      for (const auto& s : split(suites, ',')) {
        if (s == "metric") {
          reports.push_back(check_metric_axioms(expr, scfg));
        } else if (s == "cat1") {
          reports.push_back(check_cat1(expr, scfg));
        } else if (s == "embed") {
          for (int p = 0; p < expr.piece_count(); ++p) {
            if (piece >= 0 && p != piece) continue;
            reports.push_back(check_isometric_embedding(expr, p, scfg));
          }
        } else if (s == "antipodes") {
          reports.push_back(check_antipodes(expr, scfg));
        } else if (s == "poles") {
          reports.push_back(check_poles(expr));
        } else if (s == "truncated") {
          const int top = expr.max_piece_level();
          const SpaceExpr before = top > 0 ? expr.restricted_to_level(top - 1) : expr;
          const LevelEmbedding map{before.level(), expr.level(), before.piece_count()};
          reports.push_back(check_truncated_embedding(before, expr, map, scfg));
        } else if (s == "oracle") {
          reports.push_back(check_oracle(expr, scfg));
        } else {
          throw GeometryError(ErrorCode::InvalidDocument, "unknown suite '" + s + "'");
        }
      }
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const Json rep = wrap_report(cfg, digest, reports, wall);
      emit(cfg, cfg.format == "json" ? rep.dump(2) + "\n" : text_report(reports), out);
      return rep["passed"].get<bool>() ? kExitVerified : kExitViolations;
    }

    if (wit->parsed()) {
      const PointRef x = parse_point(expr, px);
      const PointRef y = parse_point(expr, py);
      const Witness w = witness_round_sphere(expr, x, y, round_n > 0 ? round_n : 2, sphere_l);
      const SuiteReport emb = check_isometric_embedding(w.expr, w.piece, scfg);
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const Json rep = wrap_report(cfg, digest, {emb}, wall);
      emit(cfg, dump_space(w.expr), out);
      if (!report_path.empty()) write_atomic(report_path, rep.dump(2) + "\n");
      if (!cfg.out.empty() || !report_path.empty()) {
        out << "witness piece " << w.piece << "\n" << text_report({emb});
      }
      return emb.passed ? kExitVerified : kExitViolations;
    }
  } catch (const GeometryError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace roundforge
