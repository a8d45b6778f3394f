#pragma once

#include "vipclip/common.hpp"
#include "vipclip/problems.hpp"
#include "vipclip/random.hpp"

#include <cstdint>
#include <limits>
#include <string_view>

namespace vipclip {

enum class NoiseKind { None, Gaussian, StudentT, SymmetricPareto, BernoulliSpike };

std::string_view to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(std::string_view name);

// Additive zero-mean noise with E|xi|^2 = sigma^2. Each coordinate is
// sigma / sqrt(d) times a unit-variance base draw.
class NoiseModel {
 public:
  NoiseModel() = default;

  static NoiseModel none();
  static NoiseModel gaussian(double sigma);
  static NoiseModel student_t(double sigma, double nu);
  static NoiseModel symmetric_pareto(double sigma, double alpha);
  static NoiseModel bernoulli_spike(double sigma, double p_spike);

  NoiseKind kind() const { return kind_; }
  double sigma() const { return kind_ == NoiseKind::None ? 0.0 : sigma_; }
  double nu() const { return nu_; }
  double alpha() const { return alpha_; }
  double p_spike() const { return p_spike_; }

  // One unit-variance, zero-mean base draw.
  double base_draw(CounterEngine& engine) const;

  bool operator==(const NoiseModel&) const = default;

 private:
  NoiseKind kind_ = NoiseKind::None;
  double sigma_ = 0.0;
  double nu_ = 0.0;
  double alpha_ = 0.0;
  double p_spike_ = 0.0;
};

Vector sample_noise(const NoiseModel& model, Eigen::Index d,
                    CounterEngine& engine);

// F(x) + (1/m) sum_i xi_i, sample i drawn from stream.sample_engine(i).
Vector batch_mean(const AffineProblem& problem, const NoiseModel& model,
                  const Vector& x, std::int64_t m, const NoiseStream& stream);

inline constexpr double kNoClipping = std::numeric_limits<double>::infinity();

// min{1, lambda / |y|} y with clip(0, lambda) = 0. lambda = +inf bypasses.
Vector clip(const Vector& y, double lambda);

Vector clipped_estimate(const AffineProblem& problem, const NoiseModel& model,
                        const Vector& x, std::int64_t m, double lambda,
                        const NoiseStream& stream);

struct EstimatorStats {
  double bias_norm = 0.0;               // |mean(X~) - F(x)|
  double bias_standard_error = 0.0;     // sqrt(centered_second_moment / n)
  double second_moment = 0.0;           // mean |X~ - F(x)|^2
  double centered_second_moment = 0.0;  // mean |X~ - mean(X~)|^2
  double max_dev = 0.0;                 // max |X~ - mean(X~)|
  std::int64_t n_trials = 0;
  double sigma_eff_sq = 0.0;            // sigma^2 / m
  double lambda = 0.0;
  double f_norm = 0.0;                  // |F(x)|
};

// Monte-Carlo moments of clip(batch_mean(x, m), lambda). Requires
// |F(x)| <= lambda / 2, the regime where the clipped-estimator bounds
// (bias <= 4 sigma^2 / lambda, second moments <= 18 sigma^2) apply.
EstimatorStats estimator_stats(const AffineProblem& problem,
                               const NoiseModel& model, const Vector& x,
                               std::int64_t m, double lambda,
                               std::int64_t n_trials, std::uint64_t seed);

}  // namespace vipclip
