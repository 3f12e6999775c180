#include "roundforge/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "roundforge/error.hpp"

namespace roundforge {

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

PointRef sample_point_on_piece(const SpaceExpr& expr, int piece, std::mt19937_64& rng) {
  const Piece& p = expr.piece(piece);
  switch (p.kind) {
    case PieceKind::UnitSphere:
    case PieceKind::ScaledSphere:
      return PointRef::on_sphere(piece, kernel::random_unit_vector(p.n, rng));
    case PieceKind::Hemisphere: {
      Vec v = kernel::random_unit_vector(p.n, rng);
      v[p.n] = std::abs(v[p.n]);
      return PointRef::on_sphere(piece, std::move(v));
    }
    case PieceKind::Suspension: {
      // density proportional to sin^m(t), m = dim of the base
      const int m = p.base->dimension();
      std::uniform_real_distribution<double> u(0.0, 1.0);
      double t = 0.5 * kPi;
      for (int tries = 0; tries < 1000; ++tries) {
        t = kPi * u(rng);
        if (u(rng) <= std::pow(std::sin(t), m)) break;
      }
      auto base = std::make_shared<const PointRef>(sample_point(*p.base, rng));
      return PointRef::on_suspension(piece, t, std::move(base));
    }
  }
  return {};
}

PointRef sample_point(const SpaceExpr& expr, std::mt19937_64& rng,
                      const std::vector<double>& weights) {
  const int np = expr.piece_count();
  if (np == 0) throw GeometryError(ErrorCode::InvalidPoint, "expression has no pieces");
  int piece = 0;
  if (weights.empty()) {
    piece = std::uniform_int_distribution<int>(0, np - 1)(rng);
  } else {
    if (static_cast<int>(weights.size()) != np) {
      throw GeometryError(ErrorCode::DimensionMismatch, "one weight per piece is required");
    }
    piece = std::discrete_distribution<int>(weights.begin(), weights.end())(rng);
  }
  return sample_point_on_piece(expr, piece, rng);
}

PointRef perturb_point(const SpaceExpr& expr, const PointRef& p, double sigma,
                       std::mt19937_64& rng) {
  const Piece& piece = expr.piece(p.piece);
  std::normal_distribution<double> g(0.0, sigma);
  if (piece.sphere_like()) {
    Vec v = p.coords;
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] += g(rng);
    v.normalize();
    if (piece.kind == PieceKind::Hemisphere) v[piece.n] = std::abs(v[piece.n]);
    return PointRef::on_sphere(p.piece, std::move(v));
  }
  const double t = std::clamp(p.height + g(rng), 0.0, kPi);
  std::shared_ptr<const PointRef> base = p.base;
  if (base) {
    base = std::make_shared<const PointRef>(perturb_point(*piece.base, *base, sigma, rng));
  } else if (t > 0.0 && t < kPi) {
    base = std::make_shared<const PointRef>(sample_point(*piece.base, rng));
  }
  return PointRef::on_suspension(p.piece, t, std::move(base));
}

}  // namespace roundforge
