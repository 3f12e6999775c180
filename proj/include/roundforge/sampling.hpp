#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "roundforge/space.hpp"

namespace roundforge {

enum class ExecutionPolicy { Serial, Parallel };

// Independent stream per (seed, sample index); results do not depend on
// which thread draws them.
std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index);

// Piece drawn by weight (uniform when `weights` is empty), then a uniform
// point on that piece.
PointRef sample_point(const SpaceExpr& expr, std::mt19937_64& rng,
                      const std::vector<double>& weights = {});
PointRef sample_point_on_piece(const SpaceExpr& expr, int piece, std::mt19937_64& rng);

// Random nearby point in the same piece, roughly `sigma` away.
PointRef perturb_point(const SpaceExpr& expr, const PointRef& p, double sigma,
                       std::mt19937_64& rng);

}  // namespace roundforge
