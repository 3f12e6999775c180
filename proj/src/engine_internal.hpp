#pragma once

#include "roundforge/engine.hpp"

namespace roundforge::detail {

// Entry points without argument validation, for calls whose arguments the
// engine produced itself.
DistanceResult distance_unchecked(const SpaceExpr& expr, const PointRef& x, const PointRef& y,
                                  const EngineOptions& opts);
GeodesicDescriptor geodesic_unchecked(const SpaceExpr& expr, const PointRef& x,
                                      const PointRef& y, const EngineOptions& opts);

}  // namespace roundforge::detail
