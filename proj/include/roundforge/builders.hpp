#pragma once

// Constructions: single attachments, one level of the round and rolling
// steps, witness spheres, and the three example spaces.

#include <cstdint>
#include <utility>
#include <vector>

#include "roundforge/engine.hpp"

namespace roundforge {

using GeodesicSet = std::vector<GeodesicDescriptor>;
using AntipodeSet = std::vector<std::pair<PointRef, PointRef>>;

// f_i : Y_{i-1} -> Y_i; piece ids are kept, so the map is the identity on
// the first source_pieces pieces.
struct LevelEmbedding {
  int source_level = 0;
  int target_level = 0;
  int source_pieces = 0;

  PointRef apply(const PointRef& p) const;
};

struct Attachment {
  SpaceExpr expr;
  int piece = -1;
};

struct StepResult {
  SpaceExpr expr;
  LevelEmbedding map;
  std::vector<int> new_pieces;
};

struct Witness {
  SpaceExpr expr;
  int piece = -1;
  PointRef x_image;
  PointRef y_image;
  LevelEmbedding map;
};

// Canonical great arc of the given length starting at e1 towards e2.
GeodesicDescriptor canonical_arc(int piece, int n, double diameter, double length);

Attachment attach_sphere_along_arc(const SpaceExpr& expr, const GeodesicDescriptor& gamma, int n,
                                   double l = kPi);
Attachment attach_sphere_at_point(const SpaceExpr& expr, const PointRef& z, int n,
                                  double l = kPi);
Attachment attach_sphere_at_antipodes(const SpaceExpr& expr, const PointRef& p, const PointRef& q,
                                      int n);
SpaceExpr attach_expr_along_arc(const SpaceExpr& expr, const GeodesicDescriptor& gamma,
                                const SpaceExpr& child, const GeodesicDescriptor& child_gamma);

StepResult round_step(const SpaceExpr& expr, const GeodesicSet& gammas, int n, double l = kPi);
StepResult rolling_step(const SpaceExpr& expr, const AntipodeSet& pairs, int n);

Witness witness_round_sphere(const SpaceExpr& expr, const PointRef& x, const PointRef& y, int n,
                             double l = kPi);

// Suspension over S^{n-1} of diameter l. l = pi is accepted and gives the
// round sphere without poles.
SpaceExpr build_example_pole(int n, double l);
SpaceExpr build_example_twospheres(int n);
SpaceExpr build_hemispherex(int n, const std::vector<Eigen::MatrixXd>& frames);

// Orthonormal (n+1) x n basis of the hyperplane orthogonal to `normal`.
Eigen::MatrixXd frame_from_normal(const Vec& normal);
Vec frame_normal(const Eigen::MatrixXd& frame);
// True when no antipodal pair lies on all the hyperspheres.
bool hemispherex_condition(int n, const std::vector<Eigen::MatrixXd>& frames);
std::vector<Eigen::MatrixXd> general_position_frames(int n, int count, std::uint64_t seed);

// Unit 2-sphere after one round step over 3 arcs and 2 points.
SpaceExpr build_round_demo(std::uint64_t seed = 7);
GeodesicSet round_demo_geodesics(const SpaceExpr& sphere, std::uint64_t seed = 7);

}  // namespace roundforge
