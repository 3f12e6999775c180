#pragma once

// Closed-form spherical trigonometry on standard spheres of any dimension and
// diameter, plus comparison triangles on the model 2-sphere.

#include <array>
#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/Core>

namespace roundforge {

inline constexpr double kPi = std::numbers::pi;

// Points of S^n live in R^(n+1); n is capped so vectors stay on the stack.
inline constexpr int kMaxCoords = 8;
inline constexpr int kMaxSphereDim = kMaxCoords - 1;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxCoords, 1>;

namespace kernel {

struct SphereParams {
  int n = 2;
  double diameter = kPi;

  double scale() const { return diameter / kPi; }
  static SphereParams unit(int n) { return {n, kPi}; }
};

struct GreatArc {
  Vec start;
  Vec tangent;
  double length = 0.0;
};

// Vertices v1, v2, v3 with d(v1,v2) = sides[0], d(v1,v3) = sides[1],
// d(v2,v3) = sides[2].
struct ComparisonTriangle {
  std::array<double, 3> sides{};
  std::array<Vec, 3> vertices;
};

Vec basis(int coords, int k);
bool is_unit(const Vec& v, double tol = 1e-12);

// Angle between unit vectors, atan2 of rejection norm and dot product.
// Inputs are ordered canonically first so the result is bitwise symmetric.
double angle_between(const Vec& u, const Vec& v);

double geodesic_distance(const Vec& u, const Vec& v, const SphereParams& params);

Vec arc_point(const GreatArc& arc, double s, const SphereParams& params);

// Throws AntipodalAmbiguity when u and v are (numerically) antipodal.
GreatArc arc_between(const Vec& u, const Vec& v, const SphereParams& params);

// Antipodal-safe variant: `hint` picks the half great circle when u, v are
// antipodal; it is ignored otherwise.
GreatArc arc_between(const Vec& u, const Vec& v, const Vec& hint,
                     const SphereParams& params);

// Angle between sides a and b of a spherical triangle, opposite side c.
double comparison_angle(double a, double b, double c);

ComparisonTriangle realize_comparison_triangle(double a, double b, double c);

Vec random_unit_vector(int n, std::uint64_t seed);
Vec random_unit_vector(int n, std::mt19937_64& rng);

}  // namespace kernel
}  // namespace roundforge
