#pragma once

// Sampling-based property suites. Every sample draws from its own stream
// (seed, index), so serial and parallel runs produce identical reports.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "roundforge/builders.hpp"
#include "roundforge/sampling.hpp"

namespace roundforge {

struct SampleConfig {
  std::uint64_t seed = 1;
  int count = 1000;
  double tol = 1e-7;      // closed-form regime
  double tol_opt = 1e-3;  // results involving optimized crossings
  double net_h = 0.02;
  int max_hops = 0;
  ExecutionPolicy policy = ExecutionPolicy::Parallel;
  std::vector<double> piece_weights;

  EngineOptions engine() const;
};

struct Violation {
  std::vector<PointRef> inputs;
  double measured = 0.0;
  double bound = 0.0;
  double deviation = 0.0;
  std::string detail;
};

struct SuiteReport {
  std::string name;
  int samples = 0;
  int skipped = 0;
  int violation_count = 0;
  std::vector<Violation> violations;  // first kMaxStoredViolations only
  double max_deviation = 0.0;
  // Largest |measured - bound| over all checks (0 for equality checks).
  double max_abs_gap = 0.0;
  bool passed = true;
  std::vector<std::string> notes;
};

inline constexpr int kMaxStoredViolations = 50;

SuiteReport check_metric_axioms(const SpaceExpr& expr, const SampleConfig& cfg);
SuiteReport check_cat1(const SpaceExpr& expr, const SampleConfig& cfg);
SuiteReport check_isometric_embedding(const SpaceExpr& expr, int piece, const SampleConfig& cfg);
SuiteReport check_truncated_embedding(const SpaceExpr& before, const SpaceExpr& after,
                                      const LevelEmbedding& map, const SampleConfig& cfg);
// Engine against the graph oracle: |engine - oracle| <= 3h and
// engine <= oracle + achieved tolerance.
SuiteReport check_oracle(const SpaceExpr& expr, const SampleConfig& cfg);

struct AntipodePair {
  PointRef p;
  PointRef q;
  double distance = 0.0;
};

std::vector<AntipodePair> find_antipodes(const SpaceExpr& expr, const SampleConfig& cfg);
SuiteReport check_antipodes(const SpaceExpr& expr, const SampleConfig& cfg);

struct PoleDecision {
  bool pole = false;
  std::string rule;  // which structural rule fired, empty if none
};

PoleDecision decide_pole(const SpaceExpr& expr, const PointRef& x);
bool detect_pole(const SpaceExpr& expr, const PointRef& x);
// Candidate points for the structural rules: apexes, junctions, labels and
// pairwise equator intersections.
std::vector<PointRef> pole_candidates(const SpaceExpr& expr);
SuiteReport check_poles(const SpaceExpr& expr);

struct AngleEstimate {
  double value = 0.0;
  double convergence = 0.0;  // |last - previous|
  bool monotone = true;
  std::vector<double> scales;
  std::vector<double> values;
};

// Comparison angles at x along geodesic(x,y) and geodesic(x,z), one per scale.
AngleEstimate angle(const SpaceExpr& expr, const PointRef& x, const PointRef& y,
                    const PointRef& z, std::vector<double> scales);

}  // namespace roundforge
