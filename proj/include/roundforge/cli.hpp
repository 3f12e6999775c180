#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "roundforge/space.hpp"

namespace roundforge {

// Exit codes of the command-line tool.
inline constexpr int kExitVerified = 0;
inline constexpr int kExitViolations = 1;
inline constexpr int kExitInvalid = 2;

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "1.2pi", "pi", "3.5"
double parse_length(const std::string& text);

// A label, "P:c1,c2,..." (normalized), "P:north", "P:south" or
// "P:t=H|BASE" for suspension points.
PointRef parse_point(const SpaceExpr& expr, const std::string& text);

SpaceExpr builtin_space(const std::string& name, int n, double l, int circles, std::uint64_t seed);

}  // namespace roundforge
