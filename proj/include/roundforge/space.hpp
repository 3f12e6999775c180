#pragma once

// Expression representation of finitely glued spaces: spherical pieces joined
// along points, antipodal pairs, geodesic arcs and great hyperspheres.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "roundforge/kernel.hpp"

namespace roundforge {

class SpaceExpr;

enum class PieceKind { UnitSphere, ScaledSphere, Hemisphere, Suspension };

std::string_view to_string(PieceKind kind);

struct Piece {
  PieceKind kind = PieceKind::UnitSphere;
  int n = 2;
  // Intrinsic diameter; pi except for scaled spheres.
  double diameter = kPi;
  // Suspension base. Shared, never mutated.
  std::shared_ptr<const SpaceExpr> base;
  // Construction level that introduced the piece.
  int level = 0;

  static Piece unit_sphere(int n);
  static Piece scaled_sphere(int n, double diameter);
  static Piece hemisphere(int n);
  static Piece suspension(std::shared_ptr<const SpaceExpr> base);

  bool sphere_like() const { return kind != PieceKind::Suspension; }
  int coords() const { return n + 1; }
  int dimension() const;
  kernel::SphereParams sphere_params() const { return {n, diameter}; }
};

// A point given in the local coordinates of one piece. Sphere-like pieces use
// `coords`; suspensions use (height, base) with a null base at the apexes.
struct PointRef {
  int piece = -1;
  Vec coords;
  double height = 0.0;
  std::shared_ptr<const PointRef> base;

  static PointRef on_sphere(int piece, Vec coords);
  static PointRef on_suspension(int piece, double height, std::shared_ptr<const PointRef> base);
  static PointRef apex(int piece, bool south);

  bool is_apex() const { return coords.size() == 0 && !base; }
};

bool same_coordinates(const PointRef& a, const PointRef& b);
bool point_less(const PointRef& a, const PointRef& b);

struct GeodesicDescriptor;

// Geodesic inside a suspension piece.
struct SuspensionPath {
  enum class Mode { Meridian, Lune, ViaApex };
  Mode mode = Mode::Meridian;
  // Lune: base separation (< pi) and the base geodesic spanning it.
  double alpha = 0.0;
  std::shared_ptr<const GeodesicDescriptor> base_path;
  // ViaApex: height of the apex passed through (0 or pi).
  double apex_height = 0.0;
};

struct Segment {
  int piece = -1;
  PointRef from;
  PointRef to;
  double length = 0.0;
  double diameter = kPi;       // diameter of the piece the arc lives on
  kernel::GreatArc arc;        // sphere-like pieces; unfolded lune arc for suspensions
  SuspensionPath suspension;   // suspension pieces
};

struct GeodesicDescriptor {
  PointRef start;
  PointRef end;
  std::vector<Segment> segments;
  // breakpoints[i] is segments[i].to, identified with segments[i+1].from.
  std::vector<PointRef> breakpoints;
  double total_length = 0.0;

  bool degenerate() const { return segments.empty(); }
  static GeodesicDescriptor point(const PointRef& p);
};

enum class LocusKind { PointWedge, AntipodalPair, ArcChain, Equator };

std::string_view to_string(LocusKind kind);

struct GluingLocus {
  LocusKind kind = LocusKind::PointWedge;
  // PointWedge: one point per side; AntipodalPair: two.
  std::vector<PointRef> ambient_points;
  std::vector<PointRef> child_points;
  // ArcChain: arclength parameterizations are matched (proportionally when
  // the lengths disagree, which only invalid expressions do).
  GeodesicDescriptor ambient_arc;
  GeodesicDescriptor child_arc;
  // Equator: columns of `frame` are an orthonormal basis of the hyperplane in
  // the ambient sphere; the hemisphere boundary point (w, 0) maps to frame * w.
  int ambient_piece = -1;
  int child_piece = -1;
  Eigen::MatrixXd frame;

  static GluingLocus point_wedge(PointRef ambient, PointRef child);
  static GluingLocus antipodal_pair(PointRef p, PointRef q, PointRef child_p, PointRef child_q);
  static GluingLocus arc_chain(GeodesicDescriptor ambient, GeodesicDescriptor child);
  static GluingLocus equator(int ambient_piece, Eigen::MatrixXd frame, int child_piece);
};

PointRef point_on_segment(const Segment& seg, double s);
PointRef point_on_geodesic(const GeodesicDescriptor& desc, double s);

// One connected family of identified points between two pieces, derived
// from a gluing. Parameterized by nothing (Point), an arclength interval, or
// a unit vector of the equatorial sphere.
struct Crossing {
  enum class Kind { Point, Interval, Equator };
  Kind kind = Kind::Point;
  int gluing = -1;
  int piece_a = -1;
  int piece_b = -1;

  PointRef point_a, point_b;

  Segment seg_a, seg_b;
  double s0 = 0.0, s1 = 0.0;  // interval in the ambient arclength parameter
  double off_a = 0.0;         // seg_a local arclength = s - off_a
  double off_b = 0.0;         // seg_b local arclength = s * ratio - off_b
  double ratio = 1.0;

  Eigen::MatrixXd frame;  // piece_a is the sphere, piece_b the hemisphere
  Vec normal;

  struct GridPoint {
    double s = 0.0;
    Vec w;
    PointRef a, b;
  };
  std::vector<GridPoint> grid;

  PointRef map_a(double s) const;
  PointRef map_b(double s) const;
  PointRef equator_a(const Vec& w) const;
  PointRef equator_b(const Vec& w) const;
};

struct CrossingIndex {
  std::vector<Crossing> crossings;
  std::vector<std::vector<int>> neighbors;
  // crossings between pieces i < j at edges[i * piece_count + j]
  std::vector<std::vector<int>> edges;
  int piece_count = 0;

  const std::vector<int>& between(int a, int b) const;
};

inline constexpr int kGridPoints = 64;

class SpaceExpr {
 public:
  SpaceExpr() = default;
  SpaceExpr(std::vector<Piece> pieces, std::vector<GluingLocus> gluings, double truncation,
            int level, std::map<std::string, PointRef> labels = {});

  static SpaceExpr single(Piece piece, double truncation = kPi);

  const std::vector<Piece>& pieces() const { return pieces_; }
  const Piece& piece(int id) const;
  int piece_count() const { return static_cast<int>(pieces_.size()); }
  const std::vector<GluingLocus>& gluings() const { return gluings_; }
  double truncation() const { return truncation_; }
  int level() const { return level_; }
  int dimension() const { return dim_cache_; }
  const std::map<std::string, PointRef>& labels() const { return labels_; }
  const PointRef& label(const std::string& name) const;
  const CrossingIndex& index() const { return *index_; }

  // Copy-producing edits; the receiver is never modified.
  SpaceExpr with_piece(Piece piece) const;
  SpaceExpr with_gluing(GluingLocus locus) const;
  SpaceExpr with_level(int level) const;
  SpaceExpr with_truncation(double truncation) const;
  SpaceExpr with_label(const std::string& name, PointRef point) const;

  // Drops pieces introduced after `level` together with their gluings.
  SpaceExpr restricted_to_level(int level) const;
  int max_piece_level() const;

 private:
  void rebuild();

  std::vector<Piece> pieces_;
  std::vector<GluingLocus> gluings_;
  double truncation_ = kPi;
  int level_ = 0;
  int dim_cache_ = 0;
  std::map<std::string, PointRef> labels_;
  std::shared_ptr<const CrossingIndex> index_ = std::make_shared<CrossingIndex>();
};

using SpacePtr = std::shared_ptr<const SpaceExpr>;

}  // namespace roundforge
