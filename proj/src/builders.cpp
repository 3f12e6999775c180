#include "roundforge/builders.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "roundforge/error.hpp"

namespace roundforge {
namespace {

constexpr double kLengthTol = 1e-9;
constexpr double kAntipodeTol = 1e-6;

struct Draft {
  std::vector<Piece> pieces;
  std::vector<GluingLocus> gluings;
  double truncation;
  int level;
  std::map<std::string, PointRef> labels;

  explicit Draft(const SpaceExpr& e)
      : pieces(e.pieces()),
        gluings(e.gluings()),
        truncation(e.truncation()),
        level(e.level()),
        labels(e.labels()) {}

  SpaceExpr finish() const { return SpaceExpr(pieces, gluings, truncation, level, labels); }
};

Piece sphere_piece(int n, double l, int level) {
  if (n < 1 || n > kMaxSphereDim) {
    throw GeometryError(ErrorCode::DimensionMismatch,
                        "sphere dimension must lie in [1, " + std::to_string(kMaxSphereDim) + "]");
  }
  if (!(l >= kPi - 1e-12)) {
    throw GeometryError(ErrorCode::InvalidDiameter, "sphere diameter must be at least pi", l);
  }
  Piece p = std::abs(l - kPi) <= 1e-12 ? Piece::unit_sphere(n) : Piece::scaled_sphere(n, l);
  p.level = level;
  return p;
}

int add_arc_sphere(Draft& d, const SpaceExpr& expr, const GeodesicDescriptor& gamma, int n,
                   double l) {
  if (gamma.degenerate() || gamma.total_length <= 0.0) {
    throw GeometryError(ErrorCode::DegenerateArc, "arc of length zero; attach at a point instead");
  }
  const double cap = std::min(expr.truncation(), l);
  if (gamma.total_length > cap + kLengthTol) {
    throw GeometryError(ErrorCode::TruncationExceeded,
                        "arc length " + std::to_string(gamma.total_length) + " exceeds " +
                            std::to_string(cap), gamma.total_length);
  }
  const int id = static_cast<int>(d.pieces.size());
  Piece p = sphere_piece(n, l, expr.level() + 1);
  const double length = std::min(gamma.total_length, p.diameter);
  d.pieces.push_back(p);
  d.gluings.push_back(GluingLocus::arc_chain(gamma, canonical_arc(id, n, p.diameter, length)));
  return id;
}

int add_point_sphere(Draft& d, const SpaceExpr& expr, const PointRef& z, int n, double l) {
  check_point(expr, z);
  const int id = static_cast<int>(d.pieces.size());
  d.pieces.push_back(sphere_piece(n, l, expr.level() + 1));
  d.gluings.push_back(GluingLocus::point_wedge(z, PointRef::on_sphere(id, kernel::basis(n + 1, 0))));
  return id;
}

int add_antipodal_sphere(Draft& d, const SpaceExpr& expr, const PointRef& p, const PointRef& q,
                         int n) {
  const double dpq = distance(expr, p, q).value;
  if (std::abs(dpq - kPi) > kAntipodeTol) {
    throw GeometryError(ErrorCode::NotAntipodal,
                        "points are at distance " + std::to_string(dpq) + ", not pi", dpq);
  }
  const int id = static_cast<int>(d.pieces.size());
  d.pieces.push_back(sphere_piece(n, kPi, expr.level() + 1));
  const Vec e1 = kernel::basis(n + 1, 0);
  d.gluings.push_back(GluingLocus::antipodal_pair(p, q, PointRef::on_sphere(id, e1),
                                                  PointRef::on_sphere(id, -e1)));
  return id;
}

PointRef shifted(PointRef p, int offset) {
  if (p.piece >= 0) p.piece += offset;
  return p;
}

GeodesicDescriptor shifted(GeodesicDescriptor d, int offset) {
  d.start = shifted(d.start, offset);
  d.end = shifted(d.end, offset);
  for (auto& s : d.segments) {
    s.piece += offset;
    s.from = shifted(s.from, offset);
    s.to = shifted(s.to, offset);
  }
  for (auto& b : d.breakpoints) b = shifted(b, offset);
  return d;
}

}  // namespace

PointRef LevelEmbedding::apply(const PointRef& p) const {
  if (p.piece < 0 || p.piece >= source_pieces) {
    throw GeometryError(ErrorCode::InvalidPoint, "point is not in the source of the embedding");
  }
  return p;
}

GeodesicDescriptor canonical_arc(int piece, int n, double diameter, double length) {
  const kernel::SphereParams params{n, diameter};
  Segment seg;
  seg.piece = piece;
  seg.length = length;
  seg.diameter = diameter;
  seg.arc.start = kernel::basis(n + 1, 0);
  seg.arc.tangent = kernel::basis(n + 1, 1);
  seg.arc.length = length;
  seg.from = PointRef::on_sphere(piece, seg.arc.start);
  seg.to = PointRef::on_sphere(piece, kernel::arc_point(seg.arc, length, params));
  GeodesicDescriptor d;
  d.start = seg.from;
  d.end = seg.to;
  d.total_length = length;
  d.segments.push_back(std::move(seg));
  return d;
}

Attachment attach_sphere_along_arc(const SpaceExpr& expr, const GeodesicDescriptor& gamma, int n,
                                   double l) {
  Draft d(expr);
  const int id = add_arc_sphere(d, expr, gamma, n, l);
  return {d.finish(), id};
}

Attachment attach_sphere_at_point(const SpaceExpr& expr, const PointRef& z, int n, double l) {
  Draft d(expr);
  const int id = add_point_sphere(d, expr, z, n, l);
  return {d.finish(), id};
}

Attachment attach_sphere_at_antipodes(const SpaceExpr& expr, const PointRef& p, const PointRef& q,
                                      int n) {
  Draft d(expr);
  const int id = add_antipodal_sphere(d, expr, p, q, n);
  return {d.finish(), id};
}

SpaceExpr attach_expr_along_arc(const SpaceExpr& expr, const GeodesicDescriptor& gamma,
                                const SpaceExpr& child, const GeodesicDescriptor& child_gamma) {
  const double la = gamma.total_length;
  const double lc = child_gamma.total_length;
  if (std::abs(la - lc) > kLengthTol) {
    throw GeometryError(ErrorCode::LengthMismatch,
                        "arc lengths " + std::to_string(la) + " and " + std::to_string(lc) +
                            " differ", la - lc);
  }
  if (gamma.degenerate() || child_gamma.degenerate()) {
    throw GeometryError(ErrorCode::DegenerateArc, "gluing arcs must have positive length");
  }
  if (la > expr.truncation() + kLengthTol || lc > child.truncation() + kLengthTol) {
    throw GeometryError(ErrorCode::TruncationExceeded, "gluing arc longer than the truncation", la);
  }
  Draft d(expr);
  const int offset = expr.piece_count();
  for (Piece p : child.pieces()) {
    p.level = expr.level() + 1;
    d.pieces.push_back(std::move(p));
  }
  for (GluingLocus g : child.gluings()) {
    for (auto& p : g.ambient_points) p = shifted(p, offset);
    for (auto& p : g.child_points) p = shifted(p, offset);
    g.ambient_arc = shifted(g.ambient_arc, offset);
    g.child_arc = shifted(g.child_arc, offset);
    if (g.ambient_piece >= 0) g.ambient_piece += offset;
    if (g.child_piece >= 0) g.child_piece += offset;
    d.gluings.push_back(std::move(g));
  }
  d.gluings.push_back(GluingLocus::arc_chain(gamma, shifted(child_gamma, offset)));
  return d.finish();
}

StepResult round_step(const SpaceExpr& expr, const GeodesicSet& gammas, int n, double l) {
  Draft d(expr);
  StepResult out;
  for (const auto& g : gammas) {
    out.new_pieces.push_back(g.degenerate() ? add_point_sphere(d, expr, g.start, n, l)
                                            : add_arc_sphere(d, expr, g, n, l));
  }
  d.level = expr.level() + 1;
  out.expr = d.finish();
  out.map = {expr.level(), d.level, expr.piece_count()};
  return out;
}

StepResult rolling_step(const SpaceExpr& expr, const AntipodeSet& pairs, int n) {
  Draft d(expr);
  StepResult out;
  for (const auto& [p, q] : pairs) out.new_pieces.push_back(add_antipodal_sphere(d, expr, p, q, n));
  d.level = expr.level() + 1;
  out.expr = d.finish();
  out.map = {expr.level(), d.level, expr.piece_count()};
  return out;
}

Witness witness_round_sphere(const SpaceExpr& expr, const PointRef& x, const PointRef& y, int n,
                             double l) {
  const double dxy = distance(expr, x, y).value;
  if (std::min(dxy, expr.truncation()) > l + kLengthTol || dxy > expr.truncation() + 1e-12) {
    throw GeometryError(ErrorCode::TruncationExceeded,
                        "points are " + std::to_string(dxy) + " apart, beyond " + std::to_string(l),
                        dxy);
  }
  const GeodesicDescriptor gamma = geodesic(expr, x, y);
  Draft d(expr);
  Witness w;
  if (gamma.degenerate()) {
    w.piece = add_point_sphere(d, expr, x, n, l);
    w.x_image = d.gluings.back().child_points.front();
    w.y_image = w.x_image;
  } else {
    w.piece = add_arc_sphere(d, expr, gamma, n, l);
    const auto& arc = d.gluings.back().child_arc;
    w.x_image = arc.start;
    w.y_image = arc.end;
  }
  d.level = expr.level() + 1;
  w.expr = d.finish();
  w.map = {expr.level(), d.level, expr.piece_count()};
  return w;
}

SpaceExpr build_example_pole(int n, double l) {
  if (n < 2 || n > kMaxSphereDim + 1) {
    throw GeometryError(ErrorCode::DimensionMismatch, "pole example needs 2 <= n <= 8");
  }
  if (!(l >= kPi)) {
    throw GeometryError(ErrorCode::InvalidDiameter, "base diameter below pi", l);
  }
  const Piece base_piece = l == kPi ? Piece::unit_sphere(n - 1) : Piece::scaled_sphere(n - 1, l);
  auto base = std::make_shared<const SpaceExpr>(SpaceExpr::single(base_piece, l));
  SpaceExpr e = SpaceExpr::single(Piece::suspension(base), kPi);
  e = e.with_label("north", PointRef::apex(0, false));
  e = e.with_label("south", PointRef::apex(0, true));
  return e;
}

SpaceExpr build_example_twospheres(int n) {
  if (n < 1 || n > kMaxSphereDim) {
    throw GeometryError(ErrorCode::DimensionMismatch, "sphere dimension out of range");
  }
  const Vec e1 = kernel::basis(n + 1, 0);
  const PointRef p = PointRef::on_sphere(0, e1);
  const PointRef q = PointRef::on_sphere(0, -e1);
  const PointRef pb = PointRef::on_sphere(1, e1);
  const PointRef qb = PointRef::on_sphere(1, -e1);
  Piece b = Piece::unit_sphere(n);
  return SpaceExpr({Piece::unit_sphere(n), b}, {GluingLocus::antipodal_pair(p, q, pb, qb)}, kPi, 0,
                   {{"p", p}, {"q", q}, {"p_bar", pb}, {"q_bar", qb}});
}

Eigen::MatrixXd frame_from_normal(const Vec& normal) {
  const auto m = normal.size();
  Eigen::MatrixXd v = normal.normalized();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(v);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, m);
  return q.rightCols(m - 1);
}

Vec frame_normal(const Eigen::MatrixXd& frame) {
  const auto m = frame.rows();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(frame);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, m);
  return q.col(m - 1);
}

bool hemispherex_condition(int n, const std::vector<Eigen::MatrixXd>& frames) {
  if (frames.empty()) return false;
  // The hyperplanes meet only in 0 iff their normals span R^{n+1}.
  Eigen::MatrixXd normals(static_cast<Eigen::Index>(frames.size()), n + 1);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    normals.row(static_cast<Eigen::Index>(i)) = frame_normal(frames[i]).transpose();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(normals);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv[i] > 1e-9 ? 1 : 0;
  return rank == n + 1;
}

std::vector<Eigen::MatrixXd> general_position_frames(int n, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Eigen::MatrixXd> out;
  for (int k = 0; k < count; ++k) out.push_back(frame_from_normal(kernel::random_unit_vector(n, rng)));
  return out;
}

SpaceExpr build_hemispherex(int n, const std::vector<Eigen::MatrixXd>& frames) {
  if (n < 2 || n > kMaxSphereDim) {
    throw GeometryError(ErrorCode::DimensionMismatch, "hemispherex needs 2 <= n <= 7");
  }
  for (const auto& f : frames) {
    if (f.rows() != n + 1 || f.cols() != n) {
      throw GeometryError(ErrorCode::DimensionMismatch, "frames must be (n+1) x n");
    }
  }
  if (!hemispherex_condition(n, frames)) {
    throw GeometryError(ErrorCode::CommonAntipodes,
                        "an antipodal pair lies on every hypersphere");
  }
  std::vector<Piece> pieces{Piece::unit_sphere(n)};
  std::vector<GluingLocus> gluings;
  std::map<std::string, PointRef> labels;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    pieces.push_back(Piece::hemisphere(n));
    gluings.push_back(GluingLocus::equator(0, frames[i], static_cast<int>(i) + 1));
  }
  if (n == 2) {
    for (std::size_t i = 0; i < frames.size(); ++i) {
      for (std::size_t j = i + 1; j < frames.size(); ++j) {
        const Eigen::Vector3d a = frame_normal(frames[i]);
        const Eigen::Vector3d b = frame_normal(frames[j]);
        const Eigen::Vector3d x = a.cross(b);
        if (x.norm() < 1e-9) continue;
        Vec v = x.normalized();
        labels.emplace("x" + std::to_string(i + 1) + std::to_string(j + 1), PointRef::on_sphere(0, v));
      }
    }
  }
  return SpaceExpr(std::move(pieces), std::move(gluings), kPi, 0, std::move(labels));
}

GeodesicSet round_demo_geodesics(const SpaceExpr& sphere, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GeodesicSet out;
  while (out.size() < 3) {
    const PointRef a = PointRef::on_sphere(0, kernel::random_unit_vector(2, rng));
    const PointRef b = PointRef::on_sphere(0, kernel::random_unit_vector(2, rng));
    const double d = piece_distance(sphere, a, b);
    if (d < 0.3 || d > 2.8) continue;
    out.push_back(geodesic(sphere, a, b));
  }
  for (int k = 0; k < 2; ++k) {
    out.push_back(GeodesicDescriptor::point(PointRef::on_sphere(0, kernel::random_unit_vector(2, rng))));
  }
  return out;
}

SpaceExpr build_round_demo(std::uint64_t seed) {
  const SpaceExpr sphere = SpaceExpr::single(Piece::unit_sphere(2));
  const GeodesicSet gammas = round_demo_geodesics(sphere, seed);
  SpaceExpr e = round_step(sphere, gammas, 2).expr;
  e = e.with_label("w1", gammas[3].start);
  e = e.with_label("w2", gammas[4].start);
  return e;
}

}  // namespace roundforge
