#include "roundforge/space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/QR>

#include "roundforge/error.hpp"

namespace roundforge {

std::string_view to_string(PieceKind kind) {
  switch (kind) {
    case PieceKind::UnitSphere: return "unit_sphere";
    case PieceKind::ScaledSphere: return "scaled_sphere";
    case PieceKind::Hemisphere: return "hemisphere";
    case PieceKind::Suspension: return "suspension";
  }
  return "unknown";
}

std::string_view to_string(LocusKind kind) {
  switch (kind) {
    case LocusKind::PointWedge: return "point_wedge";
    case LocusKind::AntipodalPair: return "antipodal_pair";
    case LocusKind::ArcChain: return "arc_chain";
    case LocusKind::Equator: return "equator";
  }
  return "unknown";
}

Piece Piece::unit_sphere(int n) { return {PieceKind::UnitSphere, n, kPi, nullptr, 0}; }

Piece Piece::scaled_sphere(int n, double diameter) {
  return {PieceKind::ScaledSphere, n, diameter, nullptr, 0};
}

Piece Piece::hemisphere(int n) { return {PieceKind::Hemisphere, n, kPi, nullptr, 0}; }

Piece Piece::suspension(std::shared_ptr<const SpaceExpr> base) {
  const int n = 1 + base->dimension();
  return {PieceKind::Suspension, n, kPi, std::move(base), 0};
}

int Piece::dimension() const {
  if (kind == PieceKind::Suspension) return 1 + base->dimension();
  return n;
}

PointRef PointRef::on_sphere(int piece, Vec coords) {
  PointRef p;
  p.piece = piece;
  p.coords = std::move(coords);
  return p;
}

PointRef PointRef::on_suspension(int piece, double height,
                                 std::shared_ptr<const PointRef> base) {
  if (height <= 0.0 || height >= kPi) return apex(piece, height >= kPi);
  PointRef p;
  p.piece = piece;
  p.height = height;
  p.base = std::move(base);
  return p;
}

PointRef PointRef::apex(int piece, bool south) {
  PointRef p;
  p.piece = piece;
  p.height = south ? kPi : 0.0;
  return p;
}

bool same_coordinates(const PointRef& a, const PointRef& b) {
  if (a.piece != b.piece || a.coords.size() != b.coords.size()) return false;
  if (a.coords.size() > 0) return a.coords == b.coords;
  if (a.height != b.height) return false;
  if (!a.base || !b.base) return !a.base && !b.base;
  return same_coordinates(*a.base, *b.base);
}

bool point_less(const PointRef& a, const PointRef& b) {
  if (a.piece != b.piece) return a.piece < b.piece;
  if (a.coords.size() != b.coords.size()) return a.coords.size() < b.coords.size();
  if (a.coords.size() > 0) {
    return std::lexicographical_compare(a.coords.data(), a.coords.data() + a.coords.size(),
                                        b.coords.data(), b.coords.data() + b.coords.size());
  }
  if (a.height != b.height) return a.height < b.height;
  if (!a.base || !b.base) return !a.base && b.base;
  return point_less(*a.base, *b.base);
}

GeodesicDescriptor GeodesicDescriptor::point(const PointRef& p) {
  GeodesicDescriptor d;
  d.start = p;
  d.end = p;
  return d;
}

GluingLocus GluingLocus::point_wedge(PointRef ambient, PointRef child) {
  GluingLocus g;
  g.kind = LocusKind::PointWedge;
  g.child_piece = child.piece;
  g.ambient_points = {std::move(ambient)};
  g.child_points = {std::move(child)};
  return g;
}

GluingLocus GluingLocus::antipodal_pair(PointRef p, PointRef q, PointRef child_p,
                                        PointRef child_q) {
  GluingLocus g;
  g.kind = LocusKind::AntipodalPair;
  g.child_piece = child_p.piece;
  g.ambient_points = {std::move(p), std::move(q)};
  g.child_points = {std::move(child_p), std::move(child_q)};
  return g;
}

GluingLocus GluingLocus::arc_chain(GeodesicDescriptor ambient, GeodesicDescriptor child) {
  GluingLocus g;
  g.kind = LocusKind::ArcChain;
  g.child_piece = child.segments.empty() ? child.start.piece : child.segments.front().piece;
  g.ambient_arc = std::move(ambient);
  g.child_arc = std::move(child);
  return g;
}

GluingLocus GluingLocus::equator(int ambient_piece, Eigen::MatrixXd frame, int child_piece) {
  GluingLocus g;
  g.kind = LocusKind::Equator;
  g.ambient_piece = ambient_piece;
  g.child_piece = child_piece;
  g.frame = std::move(frame);
  return g;
}

PointRef Crossing::map_a(double s) const {
  return point_on_segment(seg_a, std::clamp(s - off_a, 0.0, seg_a.length));
}

PointRef Crossing::map_b(double s) const {
  return point_on_segment(seg_b, std::clamp(s * ratio - off_b, 0.0, seg_b.length));
}

PointRef Crossing::equator_a(const Vec& w) const {
  Vec p = frame * w;
  p.normalize();
  return PointRef::on_sphere(piece_a, std::move(p));
}

PointRef Crossing::equator_b(const Vec& w) const {
  Vec p = Vec::Zero(w.size() + 1);
  p.head(w.size()) = w;
  p.normalize();
  return PointRef::on_sphere(piece_b, std::move(p));
}

const std::vector<int>& CrossingIndex::between(int a, int b) const {
  if (a > b) std::swap(a, b);
  return edges[static_cast<std::size_t>(a) * piece_count + b];
}

namespace {

std::vector<Vec> equator_directions(int n) {
  std::vector<Vec> dirs;
  if (n == 1) {
    Vec w(1);
    w << 1.0;
    dirs.push_back(w);
    w << -1.0;
    dirs.push_back(w);
  } else if (n == 2) {
    for (int k = 0; k < kGridPoints; ++k) {
      const double th = 2.0 * kPi * k / kGridPoints;
      Vec w(2);
      w << std::cos(th), std::sin(th);
      dirs.push_back(w);
    }
  } else {
    std::mt19937_64 rng(0x5eed0000ULL + static_cast<std::uint64_t>(n));
    for (int k = 0; k < kGridPoints * (n - 1); ++k) dirs.push_back(kernel::random_unit_vector(n - 1, rng));
  }
  return dirs;
}

std::vector<double> cumulative(const std::vector<Segment>& segs) {
  std::vector<double> off(segs.size() + 1, 0.0);
  for (std::size_t i = 0; i < segs.size(); ++i) off[i + 1] = off[i] + segs[i].length;
  return off;
}

void add_arc_crossings(const GluingLocus& g, int gluing, std::vector<Crossing>& out) {
  const auto& sa = g.ambient_arc.segments;
  const auto& sb = g.child_arc.segments;
  if (sa.empty() || sb.empty()) return;
  const auto offa = cumulative(sa);
  const auto offb = cumulative(sb);
  const double la = offa.back();
  const double lb = offb.back();
  if (la <= 0.0 || lb <= 0.0) return;
  const double ratio = lb / la;

  std::vector<double> cuts(offa.begin(), offa.end());
  for (double o : offb) cuts.push_back(o / ratio);
  std::sort(cuts.begin(), cuts.end());

  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double u = cuts[k];
    const double v = std::min(cuts[k + 1], la);
    if (v - u <= 1e-15) continue;
    const double mid = 0.5 * (u + v);
    const auto ia = std::min<std::size_t>(
        std::upper_bound(offa.begin(), offa.end(), mid) - offa.begin() - 1, sa.size() - 1);
    const auto ib = std::min<std::size_t>(
        std::upper_bound(offb.begin(), offb.end(), mid * ratio) - offb.begin() - 1, sb.size() - 1);
    if (sa[ia].piece == sb[ib].piece) continue;
    Crossing c;
    c.kind = Crossing::Kind::Interval;
    c.gluing = gluing;
    c.piece_a = sa[ia].piece;
    c.piece_b = sb[ib].piece;
    c.seg_a = sa[ia];
    c.seg_b = sb[ib];
    c.s0 = u;
    c.s1 = v;
    c.off_a = offa[ia];
    c.off_b = offb[ib];
    c.ratio = ratio;
    for (int j = 0; j < kGridPoints; ++j) {
      const double s = u + (v - u) * j / (kGridPoints - 1);
      c.grid.push_back({s, Vec(), c.map_a(s), c.map_b(s)});
    }
    out.push_back(std::move(c));
  }
}

}  // namespace

SpaceExpr::SpaceExpr(std::vector<Piece> pieces, std::vector<GluingLocus> gluings,
                     double truncation, int level, std::map<std::string, PointRef> labels)
    : pieces_(std::move(pieces)),
      gluings_(std::move(gluings)),
      truncation_(truncation),
      level_(level),
      labels_(std::move(labels)) {
  rebuild();
}

SpaceExpr SpaceExpr::single(Piece piece, double truncation) {
  return SpaceExpr({std::move(piece)}, {}, truncation, 0);
}

const Piece& SpaceExpr::piece(int id) const {
  if (id < 0 || id >= piece_count()) {
    throw GeometryError(ErrorCode::UnknownPiece, "no piece with id " + std::to_string(id));
  }
  return pieces_[static_cast<std::size_t>(id)];
}

const PointRef& SpaceExpr::label(const std::string& name) const {
  const auto it = labels_.find(name);
  if (it == labels_.end()) {
    throw GeometryError(ErrorCode::InvalidPoint, "unknown point label '" + name + "'");
  }
  return it->second;
}

void SpaceExpr::rebuild() {
  dim_cache_ = 0;
  for (const auto& p : pieces_) dim_cache_ = std::max(dim_cache_, p.dimension());

  auto idx = std::make_shared<CrossingIndex>();
  const int np = piece_count();
  idx->piece_count = np;
  idx->neighbors.assign(static_cast<std::size_t>(np), {});
  idx->edges.assign(static_cast<std::size_t>(np) * np, {});

  auto add_point = [&](const PointRef& a, const PointRef& b, int gi) {
    if (a.piece == b.piece) return;
    Crossing c;
    c.kind = Crossing::Kind::Point;
    c.gluing = gi;
    c.piece_a = a.piece;
    c.piece_b = b.piece;
    c.point_a = a;
    c.point_b = b;
    idx->crossings.push_back(std::move(c));
  };

  for (int gi = 0; gi < static_cast<int>(gluings_.size()); ++gi) {
    const auto& g = gluings_[static_cast<std::size_t>(gi)];
    switch (g.kind) {
      case LocusKind::PointWedge:
      case LocusKind::AntipodalPair:
        for (std::size_t k = 0; k < g.ambient_points.size() && k < g.child_points.size(); ++k) {
          add_point(g.ambient_points[k], g.child_points[k], gi);
        }
        break;
      case LocusKind::ArcChain:
        add_arc_crossings(g, gi, idx->crossings);
        break;
      case LocusKind::Equator: {
        Crossing c;
        c.kind = Crossing::Kind::Equator;
        c.gluing = gi;
        c.piece_a = g.ambient_piece;
        c.piece_b = g.child_piece;
        c.frame = g.frame;
        const auto rows = g.frame.rows();
        const auto cols = g.frame.cols();
        if (rows != cols + 1 || cols < 1) break;
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(g.frame);
        Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, rows);
        c.normal = q.col(rows - 1);
        for (const Vec& w : equator_directions(static_cast<int>(cols))) {
          c.grid.push_back({0.0, w, c.equator_a(w), c.equator_b(w)});
        }
        idx->crossings.push_back(std::move(c));
        break;
      }
    }
  }

  for (int ci = 0; ci < static_cast<int>(idx->crossings.size()); ++ci) {
    const auto& c = idx->crossings[static_cast<std::size_t>(ci)];
    if (c.piece_a < 0 || c.piece_b < 0 || c.piece_a >= np || c.piece_b >= np) continue;
    const int lo = std::min(c.piece_a, c.piece_b);
    const int hi = std::max(c.piece_a, c.piece_b);
    idx->edges[static_cast<std::size_t>(lo) * np + hi].push_back(ci);
    idx->neighbors[static_cast<std::size_t>(lo)].push_back(hi);
    idx->neighbors[static_cast<std::size_t>(hi)].push_back(lo);
  }
  for (auto& nb : idx->neighbors) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  index_ = std::move(idx);
}

SpaceExpr SpaceExpr::with_piece(Piece piece) const {
  auto pieces = pieces_;
  pieces.push_back(std::move(piece));
  return SpaceExpr(std::move(pieces), gluings_, truncation_, level_, labels_);
}

SpaceExpr SpaceExpr::with_gluing(GluingLocus locus) const {
  auto gluings = gluings_;
  gluings.push_back(std::move(locus));
  return SpaceExpr(pieces_, std::move(gluings), truncation_, level_, labels_);
}

SpaceExpr SpaceExpr::with_level(int level) const {
  SpaceExpr copy = *this;
  copy.level_ = level;
  return copy;
}

SpaceExpr SpaceExpr::with_truncation(double truncation) const {
  SpaceExpr copy = *this;
  copy.truncation_ = truncation;
  return copy;
}

SpaceExpr SpaceExpr::with_label(const std::string& name, PointRef point) const {
  SpaceExpr copy = *this;
  copy.labels_[name] = std::move(point);
  return copy;
}

int SpaceExpr::max_piece_level() const {
  int lv = 0;
  for (const auto& p : pieces_) lv = std::max(lv, p.level);
  return lv;
}

namespace {

bool refs_kept(const PointRef& p, int kept) { return p.piece >= 0 && p.piece < kept; }

bool descriptor_kept(const GeodesicDescriptor& d, int kept) {
  if (!refs_kept(d.start, kept) || !refs_kept(d.end, kept)) return false;
  return std::all_of(d.segments.begin(), d.segments.end(),
                     [&](const Segment& s) { return s.piece >= 0 && s.piece < kept; });
}

}  // namespace

SpaceExpr SpaceExpr::restricted_to_level(int level) const {
  // Pieces are appended in level order, so the survivors form a prefix and
  // keep their ids.
  int kept = 0;
  while (kept < piece_count() && pieces_[static_cast<std::size_t>(kept)].level <= level) ++kept;
  std::vector<Piece> pieces(pieces_.begin(), pieces_.begin() + kept);
  std::vector<GluingLocus> gluings;
  for (const auto& g : gluings_) {
    bool ok = true;
    for (const auto& p : g.ambient_points) ok = ok && refs_kept(p, kept);
    for (const auto& p : g.child_points) ok = ok && refs_kept(p, kept);
    if (g.kind == LocusKind::ArcChain) {
      ok = ok && descriptor_kept(g.ambient_arc, kept) && descriptor_kept(g.child_arc, kept);
    }
    if (g.kind == LocusKind::Equator) {
      ok = ok && g.ambient_piece < kept && g.child_piece < kept;
    }
    if (ok) gluings.push_back(g);
  }
  std::map<std::string, PointRef> labels;
  for (const auto& [name, p] : labels_) {
    if (refs_kept(p, kept)) labels.emplace(name, p);
  }
  return SpaceExpr(std::move(pieces), std::move(gluings), truncation_, std::min(level_, level),
                   std::move(labels));
}

}  // namespace roundforge
