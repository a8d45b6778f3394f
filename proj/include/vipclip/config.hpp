#pragma once

#include "vipclip/experiments.hpp"
#include "vipclip/oracle.hpp"
#include "vipclip/problems.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace vipclip {

// Invalid configuration; the message carries the line and column when known.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct ProblemConfig {
  std::string kind;  // strongly_monotone | bilinear | weak_minty | star_cocoercive | file
  std::optional<std::int64_t> d;
  std::optional<double> mu, L, s, eps, ell, min_eig;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> placement;  // randomized | canonical
  std::optional<std::string> path;       // JSON problem file, relative to the config

  bool operator==(const ProblemConfig&) const = default;
};

struct NoiseConfig {
  std::string kind = "none";
  double sigma = 0.0;
  std::optional<double> nu, alpha, p_spike;

  bool operator==(const NoiseConfig&) const = default;
};

struct ScheduleConfig {
  std::string schedule_case;
  std::string regime = "large_step";
  std::int64_t K = 0;
  double beta = 0.1;
  // Overrides of the problem's and noise model's constants.
  std::optional<double> L, mu, rho, ell, sigma, R;
  // Custom case only; a lambda of +inf disables clipping.
  std::optional<double> gamma, gamma1, gamma2, lambda, lambda1, lambda2;
  std::optional<std::int64_t> m, m1, m2;

  bool operator==(const ScheduleConfig&) const = default;
};

// Either an explicit point or x* plus `distance` along a seeded direction.
struct StartConfig {
  std::optional<std::vector<double>> point;
  std::optional<double> distance;
  std::uint64_t seed = 0;

  bool operator==(const StartConfig&) const = default;
};

struct ExperimentConfig {
  std::int64_t n_seeds = 200;
  std::uint64_t base_seed = 0;
  std::optional<std::string> metric;

  bool operator==(const ExperimentConfig&) const = default;
};

struct OutputConfig {
  std::string dir = "out";
  bool emit_trajectory = false;
  std::optional<int> threads;  // unset = auto

  bool operator==(const OutputConfig&) const = default;
};

struct TailsConfig {
  std::int64_t n = 100000;
  std::int64_t m = 1;
  std::int64_t n_bins = 50;
  std::uint64_t seed = 0;
  std::optional<std::vector<double>> at;  // default x*

  bool operator==(const TailsConfig&) const = default;
};

struct EstimatorConfig {
  std::int64_t m = 1;
  double lambda = 1.0;
  std::int64_t n_trials = 100000;
  std::uint64_t seed = 0;
  std::optional<std::vector<double>> x;  // default x*

  bool operator==(const EstimatorConfig&) const = default;
};

struct RunConfig {
  ProblemConfig problem;
  NoiseConfig noise;
  std::optional<std::string> method;
  std::optional<ScheduleConfig> schedule;
  std::optional<StartConfig> x0;
  ExperimentConfig experiment;
  OutputConfig output;
  std::optional<TailsConfig> tails;
  std::optional<EstimatorConfig> estimator;
  std::filesystem::path base_dir;  // directory relative paths resolve against

  bool operator==(const RunConfig& o) const;
};

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);
std::string emit_config(const RunConfig& config);

AffineProblem build_problem(const ProblemConfig& config, const std::filesystem::path& base_dir = {});
NoiseModel build_noise(const NoiseConfig& config);
Vector build_start(const StartConfig& config, const AffineProblem& problem);

// Thread count: config value, else VIPCLIP_THREADS, else available parallelism.
int resolve_threads(const OutputConfig& config);

ExperimentSpec build_experiment_spec(const RunConfig& config);

}  // namespace vipclip
