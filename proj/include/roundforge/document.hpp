#pragma once

// JSON documents for spaces, points, geodesics and suite reports.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "roundforge/verify.hpp"

namespace roundforge {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

Json point_to_json(const PointRef& p);
PointRef point_from_json(const Json& j);

Json descriptor_to_json(const GeodesicDescriptor& d);
GeodesicDescriptor descriptor_from_json(const Json& j);

Json space_to_json(const SpaceExpr& expr);
SpaceExpr space_from_json(const Json& j);

// Throws GeometryError(InvalidDocument) on malformed input.
std::string dump_space(const SpaceExpr& expr);
SpaceExpr parse_space(const std::string& text);

Json report_to_json(const SuiteReport& rep);

std::uint64_t fnv1a(const std::string& bytes);

// Writes to a temporary sibling and renames it over `path`.
void write_atomic(const std::string& path, const std::string& contents);

}  // namespace roundforge
