#pragma once

// Quotient-metric distance engine for glued spaces.
//
// Same-piece pairs are answered by the piece's closed form. Other pairs are
// answered by enumerating simple piece paths in the adjacency graph and
// minimizing over one crossing point per traversed locus: discrete loci are
// enumerated, arc loci are scanned on a 64-point grid and refined by golden
// section, equatorial loci are solved by unfolding the hemisphere across the
// equator. Multi-stage paths start from a dynamic program over the grid
// points and are refined stage by stage until they stop improving.

#include <string>
#include <vector>

#include "roundforge/space.hpp"

namespace roundforge {

struct EngineOptions {
  // Maximum number of distinct pieces on a path; 0 means piece_count().
  int max_hops = 0;
  // When false, same-piece pairs also consider excursions through other
  // pieces (used by the embedding checks).
  bool same_piece_shortcut = true;
  // Geodesics with tied minimizers either raise AmbiguousGeodesic or return
  // the first one in deterministic path order.
  bool first_on_tie = false;
};

struct DistanceResult {
  double value = 0.0;
  double achieved_tol = 0.0;
  bool optimized = false;
  int paths_considered = 0;
  int rounds = 0;
};

inline constexpr double kClosedFormTol = 1e-12;
inline constexpr double kGoldenTol = 1e-9;
inline constexpr int kMaxRounds = 50;

void check_point(const SpaceExpr& expr, const PointRef& p);

// Intrinsic distance and geodesic between two points of the same piece.
double piece_distance(const SpaceExpr& expr, const PointRef& a, const PointRef& b);
Segment piece_segment(const SpaceExpr& expr, const PointRef& a, const PointRef& b);

DistanceResult distance(const SpaceExpr& expr, const PointRef& x, const PointRef& y,
                        const EngineOptions& opts = {});

double truncated_distance(const SpaceExpr& expr, const PointRef& x, const PointRef& y,
                          const EngineOptions& opts = {});

GeodesicDescriptor geodesic(const SpaceExpr& expr, const PointRef& x, const PointRef& y,
                            const EngineOptions& opts = {});

int dimension(const SpaceExpr& expr);

bool points_coincide(const SpaceExpr& expr, const PointRef& a, const PointRef& b,
                     double tol = 1e-9);

// True when x is a point-wedge junction or an antipodal-pair junction; the
// attached sphere then contributes its own component of directions at x.
// False means "not detected", not "manifold point".
bool is_strongly_singular_structural(const SpaceExpr& expr, const PointRef& x);

struct GluingCheck {
  int gluing = -1;
  LocusKind kind = LocusKind::PointWedge;
  bool passed = true;
  double residual = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<GluingCheck> gluings;
  bool connected = true;
  bool coordinates_ok = true;
  double max_residual = 0.0;
  std::vector<std::string> problems;

  bool passed() const;
};

ValidationReport validate(const SpaceExpr& expr);

}  // namespace roundforge
