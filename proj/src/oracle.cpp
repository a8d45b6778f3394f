#include "vipclip/oracle.hpp"

#include <boost/random/student_t_distribution.hpp>

#include <cmath>
#include <sstream>

namespace vipclip {

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::None: return "none";
    case NoiseKind::Gaussian: return "gaussian";
    case NoiseKind::StudentT: return "student_t";
    case NoiseKind::SymmetricPareto: return "symmetric_pareto";
    case NoiseKind::BernoulliSpike: return "bernoulli_spike";
  }
  return "unknown";
}

NoiseKind noise_kind_from_string(std::string_view name) {
  for (NoiseKind k : {NoiseKind::None, NoiseKind::Gaussian, NoiseKind::StudentT,
                      NoiseKind::SymmetricPareto, NoiseKind::BernoulliSpike}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown noise kind '" + std::string(name) + "'");
}

NoiseModel NoiseModel::none() { return NoiseModel{}; }

NoiseModel NoiseModel::gaussian(double sigma) {
  require(sigma >= 0.0 && std::isfinite(sigma), "noise sigma must be finite and nonnegative");
  NoiseModel m;
  m.kind_ = NoiseKind::Gaussian;
  m.sigma_ = sigma;
  return m;
}

NoiseModel NoiseModel::student_t(double sigma, double nu) {
  NoiseModel m = gaussian(sigma);
  require(nu > 2.0 && std::isfinite(nu),
          "student_t: nu must exceed 2 (finite variance)");
  m.kind_ = NoiseKind::StudentT;
  m.nu_ = nu;
  return m;
}

NoiseModel NoiseModel::symmetric_pareto(double sigma, double alpha) {
  NoiseModel m = gaussian(sigma);
  require(alpha > 2.0 && std::isfinite(alpha),
          "symmetric_pareto: alpha must exceed 2 (finite variance)");
  m.kind_ = NoiseKind::SymmetricPareto;
  m.alpha_ = alpha;
  return m;
}

NoiseModel NoiseModel::bernoulli_spike(double sigma, double p_spike) {
  NoiseModel m = gaussian(sigma);
  require(p_spike > 0.0 && p_spike < 1.0,
          "bernoulli_spike: p_spike must lie in (0, 1)");
  m.kind_ = NoiseKind::BernoulliSpike;
  m.p_spike_ = p_spike;
  return m;
}

double NoiseModel::base_draw(CounterEngine& engine) const {
  switch (kind_) {
    case NoiseKind::None:
      return 0.0;
    case NoiseKind::Gaussian:
      return engine.standard_normal();
    case NoiseKind::StudentT: {
      boost::random::student_t_distribution<double> t(nu_);
      return std::sqrt((nu_ - 2.0) / nu_) * t(engine);
    }
    case NoiseKind::SymmetricPareto: {
      // Centered Pareto(alpha, x_m = 1) with unit variance, sign-symmetrized.
      const double mean = alpha_ / (alpha_ - 1.0);
      const double var = alpha_ / ((alpha_ - 1.0) * (alpha_ - 1.0) * (alpha_ - 2.0));
      const double pareto = std::pow(engine.uniform01_open_left(), -1.0 / alpha_);
      const double centered = (pareto - mean) / std::sqrt(var);
      return (engine() >> 63) ? -centered : centered;
    }
    case NoiseKind::BernoulliSpike: {
      const double u = engine.uniform01();
      const double spike = 1.0 / std::sqrt(p_spike_);
      if (u < 0.5 * p_spike_) return spike;
      if (u < p_spike_) return -spike;
      return 0.0;
    }
  }
  return 0.0;
}

Vector sample_noise(const NoiseModel& model, Eigen::Index d,
                    CounterEngine& engine) {
  require(d > 0, "noise dimension must be positive");
  Vector xi = Vector::Zero(d);
  if (model.kind() == NoiseKind::None) return xi;
  const double scale = model.sigma() / std::sqrt(static_cast<double>(d));
  for (Eigen::Index i = 0; i < d; ++i) xi[i] = scale * model.base_draw(engine);
  return xi;
}

Vector batch_mean(const AffineProblem& problem, const NoiseModel& model,
                  const Vector& x, std::int64_t m, const NoiseStream& stream) {
  require(m >= 1, "batch size must be at least 1");
  Vector fx = evaluate(problem, x);
  if (model.kind() == NoiseKind::None) return fx;
  const Eigen::Index d = problem.dimension();
  Vector sum = Vector::Zero(d);
  for (std::int64_t i = 0; i < m; ++i) {
    CounterEngine engine = stream.sample_engine(static_cast<std::uint64_t>(i));
    sum += sample_noise(model, d, engine);
  }
  return fx + sum / static_cast<double>(m);
}

Vector clip(const Vector& y, double lambda) {
  require(lambda > 0.0, "clipping level must be positive");
  if (std::isinf(lambda)) return y;
  const double norm = y.norm();
  if (norm <= lambda) return y;
  Vector out = (lambda / norm) * y;
  // Rounding in the rescale can leave the norm one ulp above lambda.
  while (out.norm() > lambda) out *= 1.0 - 0x1.0p-52;
  return out;
}

Vector clipped_estimate(const AffineProblem& problem, const NoiseModel& model,
                        const Vector& x, std::int64_t m, double lambda,
                        const NoiseStream& stream) {
  return clip(batch_mean(problem, model, x, m, stream), lambda);
}

EstimatorStats estimator_stats(const AffineProblem& problem,
                               const NoiseModel& model, const Vector& x,
                               std::int64_t m, double lambda,
                               std::int64_t n_trials, std::uint64_t seed) {
  require(m >= 1, "batch size must be at least 1");
  require(lambda > 0.0 && std::isfinite(lambda),
          "estimator check needs a finite positive clipping level");
  require(n_trials >= 1000, "estimator check needs at least 1000 trials");
  const Vector fx = evaluate(problem, x);
  if (fx.norm() > 0.5 * lambda) {
    std::ostringstream msg;
    msg << "|F(x)| = " << fx.norm() << " exceeds lambda / 2 = " << 0.5 * lambda
        << "; the clipped-estimator bounds do not apply";
    throw PreconditionViolation(msg.str());
  }

  const Eigen::Index d = problem.dimension();
  Matrix draws(d, n_trials);
  for (std::int64_t t = 0; t < n_trials; ++t) {
    const NoiseStream stream{seed, channel::kEstimator, static_cast<std::uint64_t>(t)};
    draws.col(t) = clipped_estimate(problem, model, x, m, lambda, stream) - fx;
  }

  // Columns hold X~ - F(x), so a noiseless oracle yields exact zeros.
  const double n = static_cast<double>(n_trials);
  const Vector mean_dev = draws.rowwise().sum() / n;
  EstimatorStats stats;
  stats.n_trials = n_trials;
  stats.lambda = lambda;
  stats.f_norm = fx.norm();
  stats.sigma_eff_sq = model.sigma() * model.sigma() / static_cast<double>(m);
  stats.bias_norm = mean_dev.norm();
  double second = 0.0;
  double centered = 0.0;
  double max_dev = 0.0;
  for (std::int64_t t = 0; t < n_trials; ++t) {
    second += draws.col(t).squaredNorm();
    const double dev = (draws.col(t) - mean_dev).norm();
    centered += dev * dev;
    max_dev = std::max(max_dev, dev);
  }
  stats.second_moment = second / n;
  stats.centered_second_moment = centered / n;
  stats.max_dev = max_dev;
  stats.bias_standard_error = std::sqrt(stats.centered_second_moment / n);
  return stats;
}

}  // namespace vipclip
