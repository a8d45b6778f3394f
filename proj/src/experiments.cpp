#include "vipclip/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

namespace vipclip {

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::Gap: return "gap";
    case Metric::AvgSqNorm: return "avg_sq_norm";
    case Metric::DistSq: return "dist_sq";
  }
  return "unknown";
}

Metric metric_from_string(std::string_view name) {
  for (Metric m : {Metric::Gap, Metric::AvgSqNorm, Metric::DistSq}) {
    if (to_string(m) == name) return m;
  }
  throw InvalidArgument("unknown metric '" + std::string(name) + "'");
}

Metric metric_for_case(Case c) {
  switch (c) {
    case Case::Monotone:
    case Case::MonotoneSC: return Metric::Gap;
    case Case::WeakMinty:
    case Case::SC: return Metric::AvgSqNorm;
    case Case::QSM:
    case Case::QSM_SC: return Metric::DistSq;
    case Case::Custom: break;
  }
  throw InvalidArgument("custom schedules have no associated metric; set one explicitly");
}

ScheduleParams resolve_schedule_params(const ScheduleRequest& request,
                                       const AffineProblem& problem,
                                       const NoiseModel& noise, const Vector& x0) {
  require_dim(x0.size(), problem.dimension(), "schedule x0");
  ScheduleParams p;
  p.K = request.K;
  p.beta = request.beta;
  p.L = request.L.value_or(problem.lipschitz());
  p.mu = request.mu.value_or(problem.qsm_mu());
  p.sigma = request.sigma.value_or(noise.sigma());
  const double r0 = (x0 - problem.solution()).norm();
  p.R = request.R.value_or(r0);
  if (p.R < r0 * (1.0 - 1e-12)) {
    throw InvalidArgument("R = " + std::to_string(p.R) + " is below |x0 - x*| = " +
                          std::to_string(r0) + "; the guarantees need R >= |x0 - x*|");
  }
  require(p.R > 0.0, "R must be positive (x0 coincides with x*; pass R explicitly)");

  const Case c = request.schedule_case;
  if (c == Case::WeakMinty) {
    if (request.rho) {
      p.rho = *request.rho;
    } else if (problem.snc_rho()) {
      p.rho = *problem.snc_rho();
    } else {
      throw MissingConstant("weak_minty schedule needs rho; the problem certifies none");
    }
  } else {
    p.rho = request.rho.value_or(problem.snc_rho().value_or(0.0));
  }
  if (is_sgda_case(c)) {
    if (request.ell) {
      p.ell = *request.ell;
    } else if (problem.sc_ell()) {
      p.ell = *problem.sc_ell();
    } else {
      throw MissingConstant("case '" + std::string(to_string(c)) +
                            "' needs the star-cocoercivity constant ell; the problem certifies none");
    }
  } else {
    p.ell = request.ell.value_or(problem.sc_ell().value_or(0.0));
  }
  if ((c == Case::QSM || c == Case::QSM_SC) && !(p.mu > 0.0)) {
    throw MissingConstant("case '" + std::string(to_string(c)) +
                          "' needs mu > 0; the problem is not quasi-strongly monotone");
  }
  return p;
}

ExperimentSpec make_theorem_spec(const AffineProblem& problem, const NoiseModel& noise,
                                 Method method, const ScheduleRequest& request,
                                 const Vector& x0, std::int64_t n_seeds,
                                 std::uint64_t base_seed) {
  const ScheduleParams p = resolve_schedule_params(request, problem, noise, x0);
  ExperimentSpec spec{problem, noise, method,
                      build_schedule(method, request.schedule_case, request.regime, p), x0};
  spec.n_seeds = n_seeds;
  spec.base_seed = base_seed;
  spec.metric = metric_for_case(request.schedule_case);
  spec.R = p.R;
  spec.threads = default_thread_count();
  return spec;
}

int default_thread_count() {
  if (const char* env = std::getenv("VIPCLIP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 4096) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

double success_fraction(const std::vector<double>& values, double bound) {
  require(!values.empty(), "success_fraction: empty value list");
  std::size_t ok = 0;
  for (double v : values) {
    if (std::isfinite(v) && v <= bound) ++ok;
  }
  return static_cast<double>(ok) / static_cast<double>(values.size());
}

bool meets_confidence(double success_fraction, double beta) {
  return success_fraction >= 1.0 - beta - 1e-12;
}

double empirical_quantile(std::vector<double> values, double q) {
  require(!values.empty(), "empirical_quantile: empty value list");
  require(q >= 0.0 && q <= 1.0, "empirical_quantile: q must lie in [0, 1]");
  for (double& v : values) {
    if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
  }
  std::sort(values.begin(), values.end());
  const double h = static_cast<double>(values.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0 || values[lo] == values[hi]) return values[lo];
  return values[lo] + frac * (values[hi] - values[lo]);
}

namespace {

struct SeedResult {
  double metric = 0.0;
  bool diverged = false;
  bool gap_unconverged = false;
  std::int64_t oracle_calls = 0;
  std::vector<double> curve;
};

double gap_value(const ExperimentSpec& spec, const Vector& point, bool& unconverged) {
  const GapResult g = gap_restricted(spec.problem, point, spec.R);
  if (!g.converged) unconverged = true;
  return g.value;
}

std::vector<double> metric_curve(const ExperimentSpec& spec, const Trajectory& t) {
  std::vector<double> curve;
  const bool seg = is_extragradient(spec.method);
  const std::size_t steps = static_cast<std::size_t>(t.steps_completed);
  const Eigen::Index d = spec.problem.dimension();
  switch (spec.metric) {
    case Metric::DistSq:
      for (const Vector& x : t.iterates) curve.push_back(dist_sq(x, spec.problem));
      break;
    case Metric::AvgSqNorm: {
      double sum = 0.0;
      for (std::size_t k = 0; k < steps; ++k) {
        sum += evaluate(spec.problem, t.iterates[k]).squaredNorm();
        curve.push_back(sum / static_cast<double>(k + 1));
      }
      break;
    }
    case Metric::Gap: {
      Vector sum = Vector::Zero(d);
      bool unused = false;
      for (std::size_t k = 0; k < steps; ++k) {
        sum += seg ? t.extrapolations[k] : t.iterates[k];
        curve.push_back(gap_value(spec, sum / static_cast<double>(k + 1), unused));
      }
      break;
    }
  }
  return curve;
}

SeedResult run_seed(const ExperimentSpec& spec, std::uint64_t seed) {
  RunOptions options;
  options.record_iterates = spec.record_trajectories;
  const Trajectory t = run_solver(spec.problem, spec.noise, spec.method, spec.schedule,
                                  spec.x0, seed, options);
  SeedResult r;
  r.diverged = t.diverged;
  r.oracle_calls = t.oracle_calls;
  if (spec.record_trajectories) r.curve = metric_curve(spec, t);
  if (t.diverged) {
    r.metric = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  const double n = static_cast<double>(schedule_K(spec.schedule) + 1);
  switch (spec.metric) {
    case Metric::Gap:
      r.metric = gap_value(spec, is_extragradient(spec.method) ? t.avg_extrapolation : t.avg_iterate,
                           r.gap_unconverged);
      break;
    case Metric::AvgSqNorm: r.metric = t.sq_norm_sum / n; break;
    case Metric::DistSq: r.metric = dist_sq(t.final_iterate, spec.problem); break;
  }
  return r;
}

void validate_spec(const ExperimentSpec& spec) {
  require(spec.n_seeds >= 1, "n_seeds must be positive");
  require_dim(spec.x0.size(), spec.problem.dimension(), "experiment x0");
  require(all_finite(spec.x0), "x0 must be finite");
  require(spec.R > 0.0 && std::isfinite(spec.R), "R must be finite and positive");
  const double r0 = (spec.x0 - spec.problem.solution()).norm();
  require(spec.R >= r0 * (1.0 - 1e-12), "R must be at least |x0 - x*|");
  if (is_extragradient(spec.method) != std::holds_alternative<SegSchedule>(spec.schedule)) {
    throw InvalidArgument("schedule does not match method '" + std::string(to_string(spec.method)) + "'");
  }
  const Case c = schedule_case(spec.schedule);
  if (c != Case::Custom && std::abs(spec.R - schedule_R(spec.schedule)) > 1e-12 * spec.R) {
    throw InvalidArgument("metric radius R differs from the R the schedule was built with");
  }
  if (c != Case::Custom && spec.metric != metric_for_case(c)) {
    throw InvalidArgument("metric '" + std::string(to_string(spec.metric)) +
                          "' does not match case '" + std::string(to_string(c)) +
                          "' (expected '" + std::string(to_string(metric_for_case(c))) + "')");
  }
}

}  // namespace

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  validate_spec(spec);
  const auto start = std::chrono::steady_clock::now();
  const auto n = static_cast<std::size_t>(spec.n_seeds);
  std::vector<SeedResult> results(n);

  const int threads = std::clamp(spec.threads, 1, static_cast<int>(std::min<std::size_t>(n, 4096)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        results[i] = run_seed(spec, spec.base_seed + i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentReport report;
  report.metric = spec.metric;
  report.method = spec.method;
  report.schedule = spec.schedule;
  report.R = spec.R;
  report.beta = schedule_beta(spec.schedule);
  report.base_seed = spec.base_seed;
  report.planned_oracle_calls = planned_oracle_calls(spec.method, spec.schedule);
  for (auto& r : results) {
    report.per_seed_metric.push_back(r.metric);
    report.diverged.push_back(r.diverged);
    report.oracle_calls.push_back(r.oracle_calls);
    if (r.diverged) ++report.n_diverged;
    if (r.gap_unconverged) ++report.gap_unconverged;
    if (spec.record_trajectories) report.trajectories.push_back(std::move(r.curve));
  }
  if (schedule_case(spec.schedule) != Case::Custom && is_clipped(spec.method)) {
    report.bound = theoretical_bound(spec.method, spec.schedule, schedule_R(spec.schedule));
    report.success_fraction = success_fraction(report.per_seed_metric, *report.bound);
  }
  for (double q : {0.5, 0.9, 1.0 - report.beta}) {
    report.quantiles[q] = empirical_quantile(report.per_seed_metric, q);
  }
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

Comparison compare_methods(const ExperimentSpec& a, const ExperimentSpec& b) {
  require(a.problem == b.problem, "compare_methods: specs use different problems");
  require(a.noise == b.noise, "compare_methods: specs use different noise models");
  require(a.x0 == b.x0, "compare_methods: specs use different starting points");
  require(a.n_seeds == b.n_seeds, "compare_methods: specs use different seed counts");
  const std::int64_t budget_a = planned_oracle_calls(a.method, a.schedule);
  const std::int64_t budget_b = planned_oracle_calls(b.method, b.schedule);
  if (budget_a != budget_b) {
    throw InvalidArgument("compare_methods: oracle budgets differ (" + std::to_string(budget_a) +
                          " vs " + std::to_string(budget_b) + ")");
  }
  const ExperimentReport ra = run_experiment(a);
  const ExperimentReport rb = run_experiment(b);
  return Comparison{empirical_quantile(ra.per_seed_metric, 0.5),
                    empirical_quantile(rb.per_seed_metric, 0.5), ra.n_diverged, rb.n_diverged};
}

}  // namespace vipclip
