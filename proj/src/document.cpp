#include "roundforge/document.hpp"

#include <cstdio>
#include <fstream>
#include <unistd.h>

#include "roundforge/error.hpp"

namespace roundforge {
namespace {

[[noreturn]] void bad(const std::string& what) { throw GeometryError(ErrorCode::InvalidDocument, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) bad(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

int integer(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) bad(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

Json vec_to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || j.size() > static_cast<std::size_t>(kMaxCoords)) {
    bad("coordinate arrays need 1 to " + std::to_string(kMaxCoords) + " numbers");
  }
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) bad("coordinates must be numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

std::string piece_kind_name(PieceKind k) { return std::string(to_string(k)); }

PieceKind piece_kind(const std::string& s) {
  for (auto k : {PieceKind::UnitSphere, PieceKind::ScaledSphere, PieceKind::Hemisphere,
                 PieceKind::Suspension}) {
    if (to_string(k) == s) return k;
  }
  bad("unknown piece kind '" + s + "'");
}

LocusKind locus_kind(const std::string& s) {
  for (auto k : {LocusKind::PointWedge, LocusKind::AntipodalPair, LocusKind::ArcChain,
                 LocusKind::Equator}) {
    if (to_string(k) == s) return k;
  }
  bad("unknown gluing kind '" + s + "'");
}

const char* mode_name(SuspensionPath::Mode m) {
  switch (m) {
    case SuspensionPath::Mode::Meridian: return "meridian";
    case SuspensionPath::Mode::Lune: return "lune";
    case SuspensionPath::Mode::ViaApex: return "via_apex";
  }
  return "meridian";
}

Json points_to_json(const std::vector<PointRef>& ps) {
  Json a = Json::array();
  for (const auto& p : ps) a.push_back(point_to_json(p));
  return a;
}

std::vector<PointRef> points_from_json(const Json& j) {
  if (!j.is_array()) bad("expected an array of points");
  std::vector<PointRef> out;
  for (const auto& p : j) out.push_back(point_from_json(p));
  return out;
}

}  // namespace

Json point_to_json(const PointRef& p) {
  Json j;
  j["piece"] = p.piece;
  if (p.coords.size() > 0) {
    j["coords"] = vec_to_json(p.coords);
  } else {
    j["height"] = p.height;
    if (p.base) j["base"] = point_to_json(*p.base);
  }
  return j;
}

PointRef point_from_json(const Json& j) {
  const int piece = integer(j, "piece");
  if (j.contains("coords")) return PointRef::on_sphere(piece, vec_from_json(j.at("coords")));
  const double t = number(j, "height");
  if (!j.contains("base")) {
    if (t != 0.0 && t != kPi) bad("suspension point without base must be an apex");
    return PointRef::apex(piece, t == kPi);
  }
  return PointRef::on_suspension(piece, t, std::make_shared<const PointRef>(point_from_json(j.at("base"))));
}

Json descriptor_to_json(const GeodesicDescriptor& d) {
  Json j;
  j["start"] = point_to_json(d.start);
  j["end"] = point_to_json(d.end);
  j["total_length"] = d.total_length;
  Json segs = Json::array();
  for (const auto& s : d.segments) {
    Json js;
    js["piece"] = s.piece;
    js["from"] = point_to_json(s.from);
    js["to"] = point_to_json(s.to);
    js["length"] = s.length;
    js["diameter"] = s.diameter;
    if (s.arc.start.size() > 0) {
      js["arc"] = {{"start", vec_to_json(s.arc.start)},
                   {"tangent", vec_to_json(s.arc.tangent)},
                   {"length", s.arc.length}};
    }
    if (s.from.coords.size() == 0) {
      Json sp;
      sp["mode"] = mode_name(s.suspension.mode);
      sp["alpha"] = s.suspension.alpha;
      sp["apex_height"] = s.suspension.apex_height;
      if (s.suspension.base_path) sp["base_path"] = descriptor_to_json(*s.suspension.base_path);
      js["suspension"] = std::move(sp);
    }
    segs.push_back(std::move(js));
  }
  j["segments"] = std::move(segs);
  return j;
}

GeodesicDescriptor descriptor_from_json(const Json& j) {
  GeodesicDescriptor d;
  d.start = point_from_json(field(j, "start"));
  d.end = point_from_json(field(j, "end"));
  d.total_length = number(j, "total_length");
  const Json& segs = field(j, "segments");
  if (!segs.is_array()) bad("segments must be an array");
  for (const auto& js : segs) {
    Segment s;
    s.piece = integer(js, "piece");
    s.from = point_from_json(field(js, "from"));
    s.to = point_from_json(field(js, "to"));
    s.length = number(js, "length");
    s.diameter = number(js, "diameter");
    if (js.contains("arc")) {
      const Json& a = js.at("arc");
      s.arc.start = vec_from_json(field(a, "start"));
      s.arc.tangent = vec_from_json(field(a, "tangent"));
      s.arc.length = number(a, "length");
    }
    if (js.contains("suspension")) {
      const Json& sp = js.at("suspension");
      const std::string mode = field(sp, "mode").get<std::string>();
      if (mode == "meridian") s.suspension.mode = SuspensionPath::Mode::Meridian;
      else if (mode == "lune") s.suspension.mode = SuspensionPath::Mode::Lune;
      else if (mode == "via_apex") s.suspension.mode = SuspensionPath::Mode::ViaApex;
      else bad("unknown suspension mode '" + mode + "'");
      s.suspension.alpha = number(sp, "alpha");
      s.suspension.apex_height = number(sp, "apex_height");
      if (sp.contains("base_path")) {
        s.suspension.base_path =
            std::make_shared<const GeodesicDescriptor>(descriptor_from_json(sp.at("base_path")));
      }
    }
    d.segments.push_back(std::move(s));
  }
  for (std::size_t i = 0; i + 1 < d.segments.size(); ++i) d.breakpoints.push_back(d.segments[i].to);
  return d;
}

Json space_to_json(const SpaceExpr& expr) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["truncation"] = expr.truncation();
  j["level"] = expr.level();
  Json pieces = Json::array();
  for (const auto& p : expr.pieces()) {
    Json jp;
    jp["kind"] = piece_kind_name(p.kind);
    jp["level"] = p.level;
    if (p.kind == PieceKind::Suspension) {
      jp["base"] = space_to_json(*p.base);
    } else {
      jp["n"] = p.n;
      if (p.kind == PieceKind::ScaledSphere) jp["diameter"] = p.diameter;
    }
    pieces.push_back(std::move(jp));
  }
  j["pieces"] = std::move(pieces);
  Json gluings = Json::array();
  for (const auto& g : expr.gluings()) {
    Json jg;
    jg["kind"] = std::string(to_string(g.kind));
    switch (g.kind) {
      case LocusKind::PointWedge:
      case LocusKind::AntipodalPair:
        jg["ambient"] = points_to_json(g.ambient_points);
        jg["child"] = points_to_json(g.child_points);
        break;
      case LocusKind::ArcChain:
        jg["ambient_arc"] = descriptor_to_json(g.ambient_arc);
        jg["child_arc"] = descriptor_to_json(g.child_arc);
        break;
      case LocusKind::Equator: {
        jg["ambient_piece"] = g.ambient_piece;
        jg["child_piece"] = g.child_piece;
        Json cols = Json::array();
        for (Eigen::Index c = 0; c < g.frame.cols(); ++c) cols.push_back(vec_to_json(g.frame.col(c)));
        jg["frame_columns"] = std::move(cols);
        break;
      }
    }
    gluings.push_back(std::move(jg));
  }
  j["gluings"] = std::move(gluings);
  Json pts = Json::object();
  for (const auto& [name, p] : expr.labels()) pts[name] = point_to_json(p);
  j["points"] = std::move(pts);
  return j;
}

SpaceExpr space_from_json(const Json& j) {
  if (integer(j, "format_version") != kFormatVersion) {
    bad("unsupported format_version (expected " + std::to_string(kFormatVersion) + ")");
  }
  const double truncation = number(j, "truncation");
  if (!(truncation >= kPi - 1e-12)) bad("truncation must be at least pi");
  const int level = j.contains("level") ? integer(j, "level") : 0;

  std::vector<Piece> pieces;
  const Json& jp = field(j, "pieces");
  if (!jp.is_array() || jp.empty()) bad("pieces must be a non-empty array");
  for (const auto& p : jp) {
    const PieceKind kind = piece_kind(field(p, "kind").get<std::string>());
    Piece piece;
    if (kind == PieceKind::Suspension) {
      piece = Piece::suspension(std::make_shared<const SpaceExpr>(space_from_json(field(p, "base"))));
    } else {
      const int n = integer(p, "n");
      if (n < 1 || n > kMaxSphereDim) bad("sphere dimension must lie in [1, 7]");
      if (kind == PieceKind::UnitSphere) piece = Piece::unit_sphere(n);
      if (kind == PieceKind::Hemisphere) piece = Piece::hemisphere(n);
      if (kind == PieceKind::ScaledSphere) {
        const double l = number(p, "diameter");
        if (!(l >= kPi)) bad("scaled sphere diameter must be at least pi");
        piece = Piece::scaled_sphere(n, l);
      }
    }
    piece.level = p.contains("level") ? integer(p, "level") : 0;
    pieces.push_back(std::move(piece));
  }

  std::vector<GluingLocus> gluings;
  const Json& jg = field(j, "gluings");
  if (!jg.is_array()) bad("gluings must be an array");
  for (const auto& g : jg) {
    const LocusKind kind = locus_kind(field(g, "kind").get<std::string>());
    GluingLocus locus;
    switch (kind) {
      case LocusKind::PointWedge:
      case LocusKind::AntipodalPair: {
        auto amb = points_from_json(field(g, "ambient"));
        auto child = points_from_json(field(g, "child"));
        const std::size_t need = kind == LocusKind::PointWedge ? 1 : 2;
        if (amb.size() != need || child.size() != need) bad("wrong number of gluing points");
        locus = kind == LocusKind::PointWedge
                    ? GluingLocus::point_wedge(amb[0], child[0])
                    : GluingLocus::antipodal_pair(amb[0], amb[1], child[0], child[1]);
        break;
      }
      case LocusKind::ArcChain:
        locus = GluingLocus::arc_chain(descriptor_from_json(field(g, "ambient_arc")),
                                       descriptor_from_json(field(g, "child_arc")));
        break;
      case LocusKind::Equator: {
        const Json& cols = field(g, "frame_columns");
        if (!cols.is_array() || cols.empty()) bad("frame_columns must be a non-empty array");
        const Vec c0 = vec_from_json(cols[0]);
        Eigen::MatrixXd frame(c0.size(), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c) {
          const Vec v = vec_from_json(cols[c]);
          if (v.size() != c0.size()) bad("frame columns differ in length");
          frame.col(static_cast<Eigen::Index>(c)) = v;
        }
        locus = GluingLocus::equator(integer(g, "ambient_piece"), frame, integer(g, "child_piece"));
        break;
      }
    }
    gluings.push_back(std::move(locus));
  }
  const int np = static_cast<int>(pieces.size());
  auto check_ref = [&](const PointRef& p) {
    if (p.piece < 0 || p.piece >= np) bad("point refers to missing piece " + std::to_string(p.piece));
  };
  for (const auto& g : gluings) {
    for (const auto& p : g.ambient_points) check_ref(p);
    for (const auto& p : g.child_points) check_ref(p);
    for (const auto* d : {&g.ambient_arc, &g.child_arc}) {
      for (const auto& s : d->segments) check_ref(s.from), check_ref(s.to);
    }
    if (g.kind == LocusKind::Equator) {
      if (g.ambient_piece < 0 || g.ambient_piece >= np || g.child_piece < 0 || g.child_piece >= np) {
        bad("equator refers to a missing piece");
      }
    }
  }

  std::map<std::string, PointRef> labels;
  if (j.contains("points")) {
    const Json& pts = j.at("points");
    if (!pts.is_object()) bad("points must be an object");
    for (const auto& [name, p] : pts.items()) {
      PointRef ref = point_from_json(p);
      check_ref(ref);
      labels.emplace(name, std::move(ref));
    }
  }
  return SpaceExpr(std::move(pieces), std::move(gluings), truncation, level, std::move(labels));
}

std::string dump_space(const SpaceExpr& expr) { return space_to_json(expr).dump(2) + "\n"; }

SpaceExpr parse_space(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("not valid JSON: ") + e.what());
  }
  try {
    return space_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("malformed document: ") + e.what());
  }
}

Json report_to_json(const SuiteReport& rep) {
  Json j;
  j["name"] = rep.name;
  j["samples"] = rep.samples;
  j["skipped"] = rep.skipped;
  j["violation_count"] = rep.violation_count;
  Json vs = Json::array();
  for (const auto& v : rep.violations) {
    vs.push_back({{"inputs", points_to_json(v.inputs)},
                  {"measured", v.measured},
                  {"bound", v.bound},
                  {"deviation", v.deviation},
                  {"detail", v.detail}});
  }
  j["violations"] = std::move(vs);
  j["max_deviation"] = rep.max_deviation;
  j["max_abs_gap"] = rep.max_abs_gap;
  j["passed"] = rep.passed;
  j["notes"] = rep.notes;
  return j;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp);
    f << contents;
    f.flush();
    if (!f) throw std::runtime_error("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
  }
}

}  // namespace roundforge
