#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace roundforge {

enum class ErrorCode {
  DimensionMismatch,
  OutOfRange,
  AntipodalAmbiguity,
  DegenerateSide,
  InvalidTriangle,
  DegenerateArc,
  HopLimitExceeded,
  InvalidPoint,
  TruncationExceeded,
  AmbiguousGeodesic,
  NotAntipodal,
  LengthMismatch,
  InvalidDiameter,
  CommonAntipodes,
  UnknownPiece,
  ResourceLimit,
  InvalidDocument,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a code; some also carry the
// offending measurement (e.g. the distance that was not pi).
class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorCode code, const std::string& what,
                std::optional<double> measured = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        measured_(measured) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<double> measured() const noexcept { return measured_; }

 private:
  ErrorCode code_;
  std::optional<double> measured_;
};

}  // namespace roundforge
