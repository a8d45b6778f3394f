#include "vipclip/solvers.hpp"

namespace vipclip {

namespace {

Vector estimate(const AffineProblem& problem, const NoiseModel& model,
                const Vector& x, std::int64_t m, double lambda, bool clipped,
                const NoiseStream& stream) {
  Vector g = batch_mean(problem, model, x, m, stream);
  return clipped ? clip(g, lambda) : g;
}

}  // namespace

SegStepResult seg_step(const AffineProblem& problem, const NoiseModel& model,
                       const Vector& x, const SegSchedule& schedule,
                       std::int64_t k, std::uint64_t seed, bool clipped) {
  require_dim(x.size(), problem.dimension(), "seg_step");
  require(k >= 0 && k < schedule.horizon(), "seg_step: iteration index outside [0, K]");
  const auto iter = static_cast<std::uint64_t>(k);
  SegStepResult out;
  out.extrapolation = x - schedule.gamma1 * estimate(problem, model, x, schedule.m1.at(k),
                                                     schedule.lambda1.at(k), clipped,
                                                     {seed, channel::kSegExtrapolation, iter});
  out.next = x - schedule.gamma2 * estimate(problem, model, out.extrapolation,
                                            schedule.m2.at(k), schedule.lambda2.at(k),
                                            clipped, {seed, channel::kSegUpdate, iter});
  return out;
}

Vector sgda_step(const AffineProblem& problem, const NoiseModel& model,
                 const Vector& x, const SgdaSchedule& schedule, std::int64_t k,
                 std::uint64_t seed, bool clipped) {
  require_dim(x.size(), problem.dimension(), "sgda_step");
  require(k >= 0 && k < schedule.horizon(), "sgda_step: iteration index outside [0, K]");
  return x - schedule.gamma * estimate(problem, model, x, schedule.m.at(k),
                                       schedule.lambda.at(k), clipped,
                                       {seed, channel::kSgda, static_cast<std::uint64_t>(k)});
}

Trajectory run_solver(const AffineProblem& problem, const NoiseModel& model,
                      Method method, const Schedule& schedule, const Vector& x0,
                      std::uint64_t seed, const RunOptions& options) {
  require_dim(x0.size(), problem.dimension(), "run_solver x0");
  require(all_finite(x0), "run_solver: x0 must be finite");
  const bool seg = is_extragradient(method);
  if (seg != std::holds_alternative<SegSchedule>(schedule)) {
    throw InvalidArgument("schedule does not match method '" + std::string(to_string(method)) + "'");
  }
  const bool clipped = is_clipped(method);
  const std::int64_t horizon = schedule_K(schedule) + 1;
  const Eigen::Index d = problem.dimension();

  Trajectory t;
  Vector x = x0;
  Vector sum_x = Vector::Zero(d);
  Vector sum_xt = Vector::Zero(d);
  if (options.record_iterates) {
    t.iterates.reserve(static_cast<std::size_t>(horizon + 1));
    t.iterates.push_back(x);
  }

  for (std::int64_t k = 0; k < horizon; ++k) {
    const double sq = evaluate(problem, x).squaredNorm();
    t.sq_norm_sum += sq;
    if (options.record_sq_norms) t.sq_norms.push_back(sq);
    sum_x += x;

    Vector next;
    if (seg) {
      const auto& s = std::get<SegSchedule>(schedule);
      SegStepResult r = seg_step(problem, model, x, s, k, seed, clipped);
      t.oracle_calls += s.m1.at(k) + s.m2.at(k);
      if (!all_finite(r.extrapolation)) {
        t.diverged = true;
        break;
      }
      sum_xt += r.extrapolation;
      if (options.record_iterates) t.extrapolations.push_back(r.extrapolation);
      next = std::move(r.next);
    } else {
      const auto& s = std::get<SgdaSchedule>(schedule);
      next = sgda_step(problem, model, x, s, k, seed, clipped);
      t.oracle_calls += s.m.at(k);
    }
    if (!all_finite(next) || !std::isfinite(t.sq_norm_sum)) {
      t.diverged = true;
      break;
    }
    x = std::move(next);
    ++t.steps_completed;
    if (options.record_iterates) t.iterates.push_back(x);
  }

  t.final_iterate = x;
  const double n = static_cast<double>(horizon);
  t.avg_iterate = sum_x / n;
  t.avg_extrapolation = seg ? Vector(sum_xt / n) : Vector(t.avg_iterate);
  if (t.diverged) {
    t.avg_iterate.setConstant(std::numeric_limits<double>::quiet_NaN());
    t.avg_extrapolation.setConstant(std::numeric_limits<double>::quiet_NaN());
    t.sq_norm_sum = std::numeric_limits<double>::infinity();
  }
  return t;
}

}  // namespace vipclip
