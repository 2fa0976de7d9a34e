#pragma once

// Parameter-homotopy path tracking: x(t) solving f(x; phi(t)) = 0 is
// continued from t = 0 to t = 1 with an RK4 predictor on the Davidenko ODE
// and a Newton corrector.

#include <cstddef>
#include <span>
#include <vector>

#include "galmon/linalg.hpp"
#include "galmon/slp.hpp"

namespace galmon {

/// Projective gamma-weighted segment
///   phi(t) = ((1-t) g0 z_start + t g1 z_end) / ((1-t) g0 + t g1).
/// With g0 == g1 this is the affine segment.
struct PathSegment {
  CVector z_start;
  CVector z_end;
  Complex gamma_start{1.0, 0.0};
  Complex gamma_end{1.0, 0.0};

  /// The same path traversed from z_end to z_start.
  PathSegment reversed() const { return {z_end, z_start, gamma_end, gamma_start}; }
};

struct TrackerOptions {
  double initial_step = 0.05;
  double min_step = 1e-7;
  double max_step = 0.25;
  double corrector_tolerance = 1e-8;
  int max_corrector_iters = 3;
  /// A corrector update that stops contracting is still accepted when it is
  /// within this multiple of the tolerance.
  double stall_acceptance = 1e4;
  double step_increase_factor = 1.5;
  double step_decrease_factor = 0.5;
  int max_steps = 10000;
  int endpoint_refine_iters = 5;

  /// Throws InvalidArgument when the options are inconsistent.
  void validate() const;
};

enum class TrackStatus { Success, MinStepReached, MaxStepsReached, CorrectorDiverged, SingularEndpoint };

const char* to_string(TrackStatus s);

struct TrackResult {
  TrackStatus status = TrackStatus::MinStepReached;
  CVector endpoint;  // meaningful only on Success
  int steps_taken = 0;
  double t_reached = 0.0;
  double residual = 0.0;

  bool ok() const { return status == TrackStatus::Success; }
};

/// phi(t); throws DegeneratePath when the weight denominator vanishes.
CVector path_point(const PathSegment& seg, double t);
/// phi'(t) = g0 g1 (z_end - z_start) / ((1-t) g0 + t g1)^2.
CVector path_derivative(const PathSegment& seg, double t);

TrackResult track(const GateSystem& sys, const PathSegment& seg, std::span<const Complex> x_start,
                  const TrackerOptions& opts = {});

/// Result of a fixed number of Newton steps.
struct RefineResult {
  CVector x;
  double residual = 0.0;
};

/// Runs `iters` Newton steps at parameters z; SingularMatrix propagates.
RefineResult refine(const GateSystem& sys, std::span<const Complex> z, std::span<const Complex> x, int iters);

/// Tracks every start independently; results are in input order. Paths may
/// run on `workers` threads without affecting the results.
std::vector<TrackResult> track_many(const GateSystem& sys, const PathSegment& seg, const std::vector<CVector>& starts,
                                    const TrackerOptions& opts = {}, unsigned workers = 1);

}  // namespace galmon
