#include "roundforge/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "roundforge/error.hpp"

namespace roundforge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::AntipodalAmbiguity: return "AntipodalAmbiguity";
    case ErrorCode::DegenerateSide: return "DegenerateSide";
    case ErrorCode::InvalidTriangle: return "InvalidTriangle";
    case ErrorCode::DegenerateArc: return "DegenerateArc";
    case ErrorCode::HopLimitExceeded: return "HopLimitExceeded";
    case ErrorCode::InvalidPoint: return "InvalidPoint";
    case ErrorCode::TruncationExceeded: return "TruncationExceeded";
    case ErrorCode::AmbiguousGeodesic: return "AmbiguousGeodesic";
    case ErrorCode::NotAntipodal: return "NotAntipodal";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidDiameter: return "InvalidDiameter";
    case ErrorCode::CommonAntipodes: return "CommonAntipodes";
    case ErrorCode::UnknownPiece: return "UnknownPiece";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
    case ErrorCode::InvalidDocument: return "InvalidDocument";
  }
  return "Unknown";
}

namespace kernel {
namespace {

constexpr double kAntipodalSlack = 1e-9;

double hav(double x) {
  const double s = std::sin(0.5 * x);
  return s * s;
}

void check_dims(const Vec& u, const SphereParams& params) {
  if (params.n < 1 || u.size() != params.n + 1) {
    throw GeometryError(ErrorCode::DimensionMismatch,
                        "expected " + std::to_string(params.n + 1) + " coordinates, got " +
                            std::to_string(u.size()));
  }
}

}  // namespace

Vec basis(int coords, int k) {
  Vec e = Vec::Zero(coords);
  e[k] = 1.0;
  return e;
}

bool is_unit(const Vec& v, double tol) {
  return v.size() >= 2 && std::abs(v.norm() - 1.0) <= tol;
}

double angle_between(const Vec& u_in, const Vec& v_in) {
  const bool swap = std::lexicographical_compare(v_in.data(), v_in.data() + v_in.size(),
                                                 u_in.data(), u_in.data() + u_in.size());
  const Vec& u = swap ? v_in : u_in;
  const Vec& v = swap ? u_in : v_in;
  const double c = u.dot(v);
  double rej2 = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double r = v[i] - c * u[i];
    rej2 += r * r;
  }
  return std::atan2(std::sqrt(rej2), c);
}

double geodesic_distance(const Vec& u, const Vec& v, const SphereParams& params) {
  check_dims(u, params);
  check_dims(v, params);
  return params.scale() * angle_between(u, v);
}

Vec arc_point(const GreatArc& arc, double s, const SphereParams& params) {
  if (s < -1e-12 || s > arc.length + 1e-12) {
    throw GeometryError(ErrorCode::OutOfRange,
                        "arclength " + std::to_string(s) + " outside [0, " +
                            std::to_string(arc.length) + "]");
  }
  s = std::clamp(s, 0.0, arc.length);
  if (s == 0.0) return arc.start;
  const double theta = s / params.scale();
  Vec p = arc.start * std::cos(theta) + arc.tangent * std::sin(theta);
  p.normalize();
  return p;
}

GreatArc arc_between(const Vec& u, const Vec& v, const SphereParams& params) {
  check_dims(u, params);
  check_dims(v, params);
  const double theta = angle_between(u, v);
  if (theta > kPi - kAntipodalSlack) {
    throw GeometryError(ErrorCode::AntipodalAmbiguity,
                        "endpoints are antipodal; minimizing geodesic is not unique", theta);
  }
  if (theta == 0.0) {
    throw GeometryError(ErrorCode::DegenerateArc, "endpoints coincide");
  }
  Vec t = v - u.dot(v) * u;
  t.normalize();
  return {u, t, params.scale() * theta};
}

GreatArc arc_between(const Vec& u, const Vec& v, const Vec& hint, const SphereParams& params) {
  check_dims(u, params);
  check_dims(v, params);
  const double theta = angle_between(u, v);
  if (theta <= kPi - kAntipodalSlack) return arc_between(u, v, params);
  Vec t = hint - u.dot(hint) * u;
  if (t.norm() < 1e-12) {
    throw GeometryError(ErrorCode::AntipodalAmbiguity, "tie-break direction is parallel to the endpoints");
  }
  t.normalize();
  return {u, t, params.scale() * theta};
}

double comparison_angle(double a, double b, double c) {
  constexpr double slack = 1e-12;
  const bool valid = a >= 0.0 && b >= 0.0 && c >= 0.0 && a <= kPi + slack &&
                     b <= kPi + slack && c <= kPi + slack && a + b + c < 2.0 * kPi &&
                     c <= a + b + slack && a <= b + c + slack && b <= a + c + slack;
  if (!valid) {
    throw GeometryError(ErrorCode::InvalidTriangle,
                        "sides (" + std::to_string(a) + ", " + std::to_string(b) + ", " +
                            std::to_string(c) + ") do not form a spherical triangle");
  }
  if (std::sin(a) * std::sin(b) < 1e-12) {
    throw GeometryError(ErrorCode::DegenerateSide, "adjacent side has vanishing sine");
  }
  // Haversine form of the law of cosines; stable at both 0 and pi.
  const double num = std::max(0.0, hav(c) - hav(a - b));
  const double den = std::max(0.0, hav(a + b) - hav(c));
  return 2.0 * std::atan2(std::sqrt(num), std::sqrt(den));
}

ComparisonTriangle realize_comparison_triangle(double a, double b, double c) {
  double gamma = 0.0;
  try {
    gamma = comparison_angle(a, b, c);
  } catch (const GeometryError& e) {
    if (e.code() != ErrorCode::DegenerateSide) throw;
    // One vertex sits on v1 or its antipode; any direction reproduces c.
    gamma = 0.0;
  }
  ComparisonTriangle tri;
  tri.sides = {a, b, c};
  tri.vertices[0] = basis(3, 2);
  tri.vertices[1] = Vec(3);
  tri.vertices[1] << std::sin(a), 0.0, std::cos(a);
  tri.vertices[2] = Vec(3);
  tri.vertices[2] << std::sin(b) * std::cos(gamma), std::sin(b) * std::sin(gamma), std::cos(b);
  return tri;
}

Vec random_unit_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(n + 1);
  double norm = 0.0;
  do {
    for (int i = 0; i <= n; ++i) v[i] = gauss(rng);
    norm = v.norm();
  } while (norm < 1e-150);
  return v / norm;
}

Vec random_unit_vector(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_unit_vector(n, rng);
}

}  // namespace kernel
}  // namespace roundforge
