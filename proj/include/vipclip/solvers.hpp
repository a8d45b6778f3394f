#pragma once

#include "vipclip/common.hpp"
#include "vipclip/oracle.hpp"
#include "vipclip/problems.hpp"
#include "vipclip/schedules.hpp"

#include <cstdint>
#include <vector>

namespace vipclip {

struct SegStepResult {
  Vector next;
  Vector extrapolation;
};

// One clipped-SEG iteration k. The extrapolation and update batches are drawn
// from the kSegExtrapolation and kSegUpdate channels of `seed`. With
// `clipped` false both clip operations are skipped.
SegStepResult seg_step(const AffineProblem& problem, const NoiseModel& model,
                       const Vector& x, const SegSchedule& schedule,
                       std::int64_t k, std::uint64_t seed, bool clipped = true);

Vector sgda_step(const AffineProblem& problem, const NoiseModel& model,
                 const Vector& x, const SgdaSchedule& schedule, std::int64_t k,
                 std::uint64_t seed, bool clipped = true);

struct RunOptions {
  bool record_iterates = false;
  // Per-iteration metric values for trajectory export.
  bool record_sq_norms = false;
};

struct Trajectory {
  std::vector<Vector> iterates;        // x^0..x^{K+1} when recorded
  std::vector<Vector> extrapolations;  // SEG only, when recorded
  std::vector<double> sq_norms;        // |F(x^k)|^2, k = 0..K, when recorded
  Vector final_iterate;                // x^{K+1}, or the last finite iterate
  Vector avg_extrapolation;            // (1/(K+1)) sum x~^k
  Vector avg_iterate;                  // (1/(K+1)) sum x^k, k = 0..K
  double sq_norm_sum = 0.0;            // sum |F(x^k)|^2, k = 0..K
  std::int64_t oracle_calls = 0;
  std::int64_t steps_completed = 0;
  bool diverged = false;
};

// Runs K + 1 steps. Unclipped methods reuse the schedule's stepsizes and batch
// sizes and bypass clipping. Divergence halts the run and is flagged.
Trajectory run_solver(const AffineProblem& problem, const NoiseModel& model,
                      Method method, const Schedule& schedule, const Vector& x0,
                      std::uint64_t seed, const RunOptions& options = {});

}  // namespace vipclip
