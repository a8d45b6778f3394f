#pragma once

#include "vipclip/common.hpp"
#include "vipclip/metrics.hpp"
#include "vipclip/oracle.hpp"
#include "vipclip/problems.hpp"
#include "vipclip/schedules.hpp"
#include "vipclip/solvers.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

namespace vipclip {

enum class Metric { Gap, AvgSqNorm, DistSq };

std::string_view to_string(Metric metric);
Metric metric_from_string(std::string_view name);
// The metric each theorem case bounds.
Metric metric_for_case(Case c);

struct ExperimentSpec {
  AffineProblem problem;
  NoiseModel noise;
  Method method = Method::ClippedSEG;
  Schedule schedule;
  Vector x0;
  std::int64_t n_seeds = 200;
  std::uint64_t base_seed = 0;
  Metric metric = Metric::DistSq;
  double R = 1.0;
  int threads = 1;
  bool record_trajectories = false;
};

// Schedule parameters as requested by a user; unset constants are taken from
// the problem and noise model, R from |x0 - x*|.
struct ScheduleRequest {
  Case schedule_case = Case::Monotone;
  Regime regime = Regime::LargeStep;
  std::int64_t K = 0;
  double beta = 0.1;
  std::optional<double> L, mu, rho, ell, sigma, R;
};

ScheduleParams resolve_schedule_params(const ScheduleRequest& request,
                                       const AffineProblem& problem,
                                       const NoiseModel& noise, const Vector& x0);

// Builds a spec for a theorem case with the case's own metric and R.
ExperimentSpec make_theorem_spec(const AffineProblem& problem, const NoiseModel& noise,
                                 Method method, const ScheduleRequest& request,
                                 const Vector& x0, std::int64_t n_seeds,
                                 std::uint64_t base_seed);

struct ExperimentReport {
  std::vector<double> per_seed_metric;  // NaN for diverged seeds
  std::vector<bool> diverged;
  std::vector<std::int64_t> oracle_calls;
  std::vector<std::vector<double>> trajectories;  // per-k metric, when recorded
  std::optional<double> bound;
  std::optional<double> success_fraction;
  std::map<double, double> quantiles;
  std::int64_t n_diverged = 0;
  std::int64_t planned_oracle_calls = 0;
  std::int64_t gap_unconverged = 0;
  double wall_time = 0.0;
  double R = 0.0;
  double beta = 0.1;
  Metric metric = Metric::DistSq;
  Method method = Method::ClippedSEG;
  Schedule schedule;
  std::uint64_t base_seed = 0;
};

ExperimentReport run_experiment(const ExperimentSpec& spec);

// Fraction of finite values <= bound; non-finite values count as failures.
double success_fraction(const std::vector<double>& values, double bound);

// success_fraction >= 1 - beta, inclusive up to rounding.
bool meets_confidence(double success_fraction, double beta);

// Linear interpolation at position (n - 1) q of the sorted values; NaN sorts
// as +inf.
double empirical_quantile(std::vector<double> values, double q);

struct Comparison {
  double median_a = 0.0;
  double median_b = 0.0;
  std::int64_t diverged_a = 0;
  std::int64_t diverged_b = 0;
};

// Paired medians of the final metric; the specs must share problem, noise,
// x0 and oracle budget.
Comparison compare_methods(const ExperimentSpec& a, const ExperimentSpec& b);

// Thread count from VIPCLIP_THREADS, else the available parallelism.
int default_thread_count();

}  // namespace vipclip
