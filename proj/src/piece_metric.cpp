#include <algorithm>
#include <cmath>

#include "engine_internal.hpp"
#include "roundforge/error.hpp"

namespace roundforge {
namespace {

double hav(double x) {
  const double s = std::sin(0.5 * x);
  return s * s;
}

// cos d = cos t1 cos t2 + sin t1 sin t2 cos(alpha), in haversine form.
double suspension_formula(double t1, double t2, double alpha) {
  const double h = std::clamp(hav(t1 - t2) + std::sin(t1) * std::sin(t2) * hav(alpha), 0.0, 1.0);
  return 2.0 * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
}

double base_separation(const Piece& piece, const PointRef& a, const PointRef& b) {
  return detail::distance_unchecked(*piece.base, *a.base, *b.base, {}).value;
}

Vec lune_vector(double t, double phi) {
  Vec v(3);
  v << std::sin(t) * std::cos(phi), std::sin(t) * std::sin(phi), std::cos(t);
  return v;
}

Segment zero_segment(const Piece& piece, const PointRef& a) {
  Segment seg;
  seg.piece = a.piece;
  seg.from = a;
  seg.to = a;
  seg.length = 0.0;
  seg.diameter = piece.diameter;
  if (piece.sphere_like()) {
    seg.arc.start = a.coords;
    seg.arc.tangent = Vec::Zero(a.coords.size());
  }
  return seg;
}

}  // namespace

void check_point(const SpaceExpr& expr, const PointRef& p) {
  if (p.piece < 0 || p.piece >= expr.piece_count()) {
    throw GeometryError(ErrorCode::InvalidPoint, "point refers to missing piece " + std::to_string(p.piece));
  }
  const Piece& piece = expr.piece(p.piece);
  if (piece.sphere_like()) {
    if (p.coords.size() != piece.coords()) {
      throw GeometryError(ErrorCode::InvalidPoint,
                          "piece " + std::to_string(p.piece) + " needs " +
                              std::to_string(piece.coords()) + " coordinates");
    }
    if (!p.coords.allFinite() || std::abs(p.coords.norm() - 1.0) > 1e-9) {
      throw GeometryError(ErrorCode::InvalidPoint, "coordinates are not a unit vector");
    }
    if (piece.kind == PieceKind::Hemisphere && p.coords[piece.n] < -1e-12) {
      throw GeometryError(ErrorCode::InvalidPoint, "point lies outside the closed hemisphere",
                          p.coords[piece.n]);
    }
    return;
  }
  if (p.coords.size() != 0 || !std::isfinite(p.height) || p.height < 0.0 || p.height > kPi) {
    throw GeometryError(ErrorCode::InvalidPoint, "suspension height must lie in [0, pi]");
  }
  if (p.is_apex()) {
    if (p.height != 0.0 && p.height != kPi) {
      throw GeometryError(ErrorCode::InvalidPoint, "suspension point without a base point");
    }
    return;
  }
  check_point(*piece.base, *p.base);
}

double piece_distance(const SpaceExpr& expr, const PointRef& a, const PointRef& b) {
  const Piece& piece = expr.pieces()[static_cast<std::size_t>(a.piece)];
  if (piece.sphere_like()) {
    const double theta = kernel::angle_between(a.coords, b.coords);
    return piece.kind == PieceKind::ScaledSphere ? piece.diameter / kPi * theta : theta;
  }
  if (a.is_apex() || b.is_apex()) return std::abs(a.height - b.height);
  const double alpha = std::min(kPi, base_separation(piece, a, b));
  return suspension_formula(a.height, b.height, alpha);
}

Segment piece_segment(const SpaceExpr& expr, const PointRef& a, const PointRef& b) {
  const Piece& piece = expr.piece(a.piece);
  const double d = piece_distance(expr, a, b);
  if (d == 0.0) return zero_segment(piece, a);

  Segment seg;
  seg.piece = a.piece;
  seg.from = a;
  seg.to = b;
  seg.length = d;
  seg.diameter = piece.diameter;

  if (piece.sphere_like()) {
    try {
      seg.arc = kernel::arc_between(a.coords, b.coords, piece.sphere_params());
    } catch (const GeometryError& e) {
      if (e.code() == ErrorCode::AntipodalAmbiguity) {
        throw GeometryError(ErrorCode::AmbiguousGeodesic,
                            "antipodal points inside piece " + std::to_string(a.piece));
      }
      if (e.code() == ErrorCode::DegenerateArc) return zero_segment(piece, a);
      throw;
    }
    seg.length = seg.arc.length;
    return seg;
  }

  auto& sp = seg.suspension;
  if (a.is_apex() && b.is_apex()) {
    throw GeometryError(ErrorCode::AmbiguousGeodesic, "apex to apex: every meridian is minimizing");
  }
  if (a.is_apex() || b.is_apex()) {
    sp.mode = SuspensionPath::Mode::Meridian;
    return seg;
  }
  const double d_base = base_separation(piece, a, b);
  if (d_base == 0.0) {
    sp.mode = SuspensionPath::Mode::Meridian;
    return seg;
  }
  if (d_base < kPi) {
    sp.mode = SuspensionPath::Mode::Lune;
    sp.alpha = d_base;
    sp.base_path = std::make_shared<const GeodesicDescriptor>(
        detail::geodesic_unchecked(*piece.base, *a.base, *b.base, {}));
    seg.arc = kernel::arc_between(lune_vector(a.height, 0.0), lune_vector(b.height, d_base),
                                  kernel::SphereParams::unit(2));
    return seg;
  }
  const double via_north = a.height + b.height;
  const double via_south = 2.0 * kPi - a.height - b.height;
  if (std::abs(via_north - via_south) <= 1e-12) {
    throw GeometryError(ErrorCode::AmbiguousGeodesic, "paths through both apexes tie");
  }
  sp.mode = SuspensionPath::Mode::ViaApex;
  sp.apex_height = via_north < via_south ? 0.0 : kPi;
  return seg;
}

PointRef point_on_segment(const Segment& seg, double s) {
  s = std::clamp(s, 0.0, seg.length);
  if (seg.length == 0.0 || s == 0.0) return seg.from;
  if (s == seg.length) return seg.to;

  if (seg.from.coords.size() > 0) {
    const int n = static_cast<int>(seg.arc.start.size()) - 1;
    return PointRef::on_sphere(seg.piece, kernel::arc_point(seg.arc, s, {n, seg.diameter}));
  }

  const auto& sp = seg.suspension;
  const PointRef& a = seg.from;
  const PointRef& b = seg.to;
  switch (sp.mode) {
    case SuspensionPath::Mode::Meridian: {
      const double t = a.height + (b.height - a.height) * (s / seg.length);
      return PointRef::on_suspension(seg.piece, t, a.base ? a.base : b.base);
    }
    case SuspensionPath::Mode::ViaApex: {
      const double first = std::abs(sp.apex_height - a.height);
      if (s <= first) {
        const double t = a.height + (sp.apex_height > a.height ? s : -s);
        return PointRef::on_suspension(seg.piece, t, a.base);
      }
      const double rest = s - first;
      const double t = sp.apex_height + (b.height > sp.apex_height ? rest : -rest);
      return PointRef::on_suspension(seg.piece, t, b.base);
    }
    case SuspensionPath::Mode::Lune: {
      const Vec v = kernel::arc_point(seg.arc, std::min(s, seg.arc.length), kernel::SphereParams::unit(2));
      const double t = std::atan2(std::hypot(v[0], v[1]), v[2]);
      const double phi = std::clamp(std::atan2(v[1], v[0]), 0.0, sp.alpha);
      if (t <= 0.0 || t >= kPi) return PointRef::apex(seg.piece, t >= kPi);
      const double along = std::min(phi, sp.base_path->total_length);
      return PointRef::on_suspension(
          seg.piece, t, std::make_shared<const PointRef>(point_on_geodesic(*sp.base_path, along)));
    }
  }
  return seg.from;
}

PointRef point_on_geodesic(const GeodesicDescriptor& desc, double s) {
  if (s < -1e-12 || s > desc.total_length + 1e-12) {
    throw GeometryError(ErrorCode::OutOfRange,
                        "arclength " + std::to_string(s) + " outside [0, " +
                            std::to_string(desc.total_length) + "]");
  }
  if (desc.degenerate() || s <= 0.0) return desc.start;
  if (s >= desc.total_length) return desc.end;
  for (std::size_t i = 0; i < desc.segments.size(); ++i) {
    const Segment& seg = desc.segments[i];
    if (s <= seg.length || i + 1 == desc.segments.size()) return point_on_segment(seg, s);
    s -= seg.length;
  }
  return desc.end;
}

}  // namespace roundforge
