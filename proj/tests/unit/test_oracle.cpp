#include "vipclip/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace vipclip;

namespace {

AffineProblem identity_problem(Eigen::Index d) {
  return AffineProblem(Matrix::Identity(d, d), Vector::Zero(d), Vector::Zero(d),
                       Constants{1.0, 1.0, 1.0, 0.0});
}

std::vector<NoiseModel> all_models(double sigma) {
  return {NoiseModel::gaussian(sigma), NoiseModel::student_t(sigma, 3.0),
          NoiseModel::symmetric_pareto(sigma, 3.0), NoiseModel::bernoulli_spike(sigma, 0.01)};
}

}  // namespace

TEST_CASE("clip: zero input and hand cases") {
  CHECK(clip(Vector::Zero(3), 1.0) == Vector::Zero(3));
  Vector y(2);
  y << 3, 4;
  CHECK(clip(y, 10.0) == y);
  const Vector c = clip(y, 2.5);
  CHECK(c(0) == doctest::Approx(1.5));
  CHECK(c(1) == doctest::Approx(2.0));
  CHECK(clip(y, kNoClipping) == y);
  CHECK_THROWS_AS(clip(y, 0.0), InvalidArgument);
  CHECK_THROWS_AS(clip(y, -1.0), InvalidArgument);
}

TEST_CASE("property: clip norm bound, homogeneity and idempotence") {
  CounterEngine engine{1, 2, 3};
  for (int i = 0; i < 2000; ++i) {
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(engine() % 7);
    Vector y(d);
    const double scale = std::exp(8.0 * (engine.uniform01() - 0.5));
    for (Eigen::Index j = 0; j < d; ++j) y(j) = scale * engine.standard_normal();
    const double lambda = std::exp(6.0 * (engine.uniform01() - 0.5));
    const Vector c = clip(y, lambda);
    CHECK(c.norm() <= lambda);
    CHECK(clip(c, lambda) == c);
    // Powers of two scale exactly in binary floating point.
    const double t = std::ldexp(1.0, static_cast<int>(engine() % 9) - 4);
    CHECK(clip(t * y, t * lambda) == t * c);
    if (y.norm() > 0) CHECK(c.dot(y) >= 0.0);
  }
}

TEST_CASE("noise models validate their parameters") {
  CHECK_THROWS_AS(NoiseModel::student_t(1.0, 2.0), InvalidArgument);
  CHECK_THROWS_AS(NoiseModel::symmetric_pareto(1.0, 1.5), InvalidArgument);
  CHECK_THROWS_AS(NoiseModel::bernoulli_spike(1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(NoiseModel::bernoulli_spike(1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(NoiseModel::gaussian(-1.0), InvalidArgument);
  CHECK(noise_kind_from_string("student_t") == NoiseKind::StudentT);
  CHECK_THROWS_AS(noise_kind_from_string("cauchy"), InvalidArgument);
}

TEST_CASE("none model draws zero") {
  CounterEngine engine{0};
  CHECK(sample_noise(NoiseModel::none(), 4, engine) == Vector::Zero(4));
}

TEST_CASE("Gaussian noise has the target second moment") {
  const NoiseModel g = NoiseModel::gaussian(1.0);
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    CounterEngine e{7, 0, static_cast<std::uint64_t>(i)};
    sum += sample_noise(g, 4, e).squaredNorm();
  }
  CHECK(std::abs(sum / n - 1.0) <= 0.01);
}

TEST_CASE("Student-t noise is normalized to unit variance") {
  const NoiseModel t = NoiseModel::student_t(1.0, 3.0);
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    CounterEngine e{8, 0, static_cast<std::uint64_t>(i)};
    sum += sample_noise(t, 1, e).squaredNorm();
  }
  CHECK(std::abs(sum / n - 1.0) <= 0.05);
}

TEST_CASE("property: every noise model is centered with E|xi|^2 = sigma^2") {
  const double sigma = 2.0;
  // alpha = 4.5 keeps the fourth moment finite so the sample second moment concentrates.
  const std::vector<NoiseModel> models = {
      NoiseModel::gaussian(sigma), NoiseModel::student_t(sigma, 3.0),
      NoiseModel::symmetric_pareto(sigma, 4.5), NoiseModel::bernoulli_spike(sigma, 0.01)};
  for (const NoiseModel& model : models) {
    for (Eigen::Index d : {1, 5, 50}) {
      const int n = d == 50 ? 200000 : 1000000;
      Vector mean = Vector::Zero(d);
      double sq = 0.0;
      for (int i = 0; i < n; ++i) {
        CounterEngine e{static_cast<std::uint64_t>(d), 1, static_cast<std::uint64_t>(i)};
        const Vector xi = sample_noise(model, d, e);
        mean += xi;
        sq += xi.squaredNorm();
      }
      mean /= n;
      sq /= n;
      INFO("kind " << to_string(model.kind()) << ", d " << d);
      // CLT scale: sigma / sqrt(n) per draw; 5 sigma / 10^3 at n = 10^6.
      CHECK(mean.norm() <= 5.0 * sigma / std::sqrt(static_cast<double>(n)));
      const double tol = model.kind() == NoiseKind::Gaussian ? 0.1 : 0.2;
      CHECK(sq >= sigma * sigma * (1.0 - tol));
      CHECK(sq <= sigma * sigma * (1.0 + tol));
    }
  }
}

TEST_CASE("Bernoulli spike takes the three documented values") {
  const NoiseModel b = NoiseModel::bernoulli_spike(1.0, 0.04);
  int spikes = 0;
  for (int i = 0; i < 100000; ++i) {
    CounterEngine e{3, 0, static_cast<std::uint64_t>(i)};
    const double v = b.base_draw(e);
    CHECK((v == 0.0 || std::abs(std::abs(v) - 5.0) < 1e-12));
    if (v != 0.0) ++spikes;
  }
  CHECK(std::abs(spikes / 100000.0 - 0.04) < 0.004);
}

TEST_CASE("symmetric Pareto takes both signs") {
  const NoiseModel p = NoiseModel::symmetric_pareto(1.0, 3.0);
  int positive = 0;
  for (int i = 0; i < 10000; ++i) {
    CounterEngine e{4, 0, static_cast<std::uint64_t>(i)};
    if (p.base_draw(e) > 0) ++positive;
  }
  CHECK(positive > 4000);
  CHECK(positive < 6000);
}

TEST_CASE("batch mean: exact without noise, variance sigma^2 / m with it") {
  const AffineProblem id = identity_problem(3);
  Vector x(3);
  x << 1, -2, 0.5;
  for (std::int64_t m : {1, 7, 100}) {
    CHECK(batch_mean(id, NoiseModel::none(), x, m, {1, 2, 3}) == x);
  }
  const NoiseModel g = NoiseModel::gaussian(2.0);
  double sq = 0.0;
  const int trials = 100000;
  for (int t = 0; t < trials; ++t) {
    sq += (batch_mean(id, g, x, 4, {5, 6, static_cast<std::uint64_t>(t)}) - x).squaredNorm();
  }
  CHECK(std::abs(sq / trials - 1.0) <= 0.02);
  CHECK_THROWS_AS(batch_mean(id, g, x, 0, {}), InvalidArgument);
  CHECK_THROWS_AS(batch_mean(id, g, Vector::Zero(2), 1, {}), DimensionMismatch);
}

TEST_CASE("batch mean of size one adds a single draw") {
  const AffineProblem id = identity_problem(2);
  const NoiseModel g = NoiseModel::gaussian(1.0);
  const NoiseStream stream{9, 1, 4};
  CounterEngine e = stream.sample_engine(0);
  const Vector expected = Vector::Ones(2) + sample_noise(g, 2, e);
  CHECK(batch_mean(id, g, Vector::Ones(2), 1, stream) == expected);
}

TEST_CASE("clipped estimate composes clip and batch mean") {
  const AffineProblem id = identity_problem(2);
  Vector x(2);
  x << 3, 4;
  CHECK(clipped_estimate(id, NoiseModel::none(), x, 1, 10.0, {}) == x);
  const Vector c = clipped_estimate(id, NoiseModel::none(), x, 1, 2.5, {});
  CHECK(c(0) == doctest::Approx(1.5));
  CHECK(c(1) == doctest::Approx(2.0));
}

TEST_CASE("clipped estimate bias stays within 4 sigma_eff^2 / lambda") {
  const AffineProblem id = identity_problem(2);
  Vector x(2);
  x << 0.6, 0.8;
  const EstimatorStats s = estimator_stats(id, NoiseModel::gaussian(1.0), x, 100, 10.0, 100000, 1);
  CHECK(s.bias_norm <= 0.004 + 3.0 * s.bias_standard_error);
}

TEST_CASE("estimator stats without noise are exactly zero") {
  const AffineProblem id = identity_problem(3);
  const EstimatorStats s = estimator_stats(id, NoiseModel::none(), Vector::Ones(3), 1, 10.0, 1000, 0);
  CHECK(s.bias_norm == 0.0);
  CHECK(s.second_moment == 0.0);
  CHECK(s.max_dev == 0.0);
  const EstimatorStats t =
      estimator_stats(id, NoiseModel::none(), Vector::Constant(3, 0.1), 4, 10.0, 100000, 0);
  CHECK(t.bias_norm == 0.0);
  CHECK(t.second_moment == 0.0);
}

TEST_CASE("estimator stats: Gaussian second moment far below the ceiling") {
  const AffineProblem id = identity_problem(3);
  const EstimatorStats s =
      estimator_stats(id, NoiseModel::gaussian(1.0), Vector::Zero(3), 1, 10.0, 100000, 2);
  CHECK(s.second_moment <= 18.0);
  CHECK(std::abs(s.second_moment - 1.0) <= 0.03);
}

TEST_CASE("estimator stats: Student-t within the clipped-estimator ceilings") {
  const AffineProblem id = identity_problem(1);
  const EstimatorStats s =
      estimator_stats(id, NoiseModel::student_t(1.0, 3.0), Vector::Zero(1), 1, 4.0, 100000, 3);
  CHECK(s.max_dev <= 8.0 * (1.0 + 1e-9));
  CHECK(s.bias_norm <= 1.0 + 3.0 * s.bias_standard_error);
}

TEST_CASE("property: clipped-estimator ceilings for all noise kinds and batch sizes") {
  const AffineProblem id = identity_problem(3);
  Vector x = Vector::Zero(3);
  x(0) = 1.5;  // |F(x)| = 1.5 <= lambda / 2
  for (const NoiseModel& model : all_models(1.0)) {
    for (std::int64_t m : {1, 16}) {
      const double lambda = 3.0;
      const EstimatorStats s = estimator_stats(id, model, x, m, lambda, 20000, 11);
      INFO("kind " << to_string(model.kind()) << ", m " << m);
      CHECK(s.max_dev <= 2.0 * lambda * (1.0 + 1e-9));
      CHECK(s.bias_norm <= 4.0 * s.sigma_eff_sq / lambda + 3.0 * s.bias_standard_error);
      CHECK(s.second_moment <= 18.0 * s.sigma_eff_sq);
      CHECK(s.centered_second_moment <= 18.0 * s.sigma_eff_sq);
    }
  }
}

TEST_CASE("estimator stats rejects inputs outside the bounded-bias regime") {
  const AffineProblem id = identity_problem(2);
  Vector x(2);
  x << 3, 0;
  CHECK_THROWS_AS(estimator_stats(id, NoiseModel::gaussian(1.0), x, 1, 4.0, 1000, 0),
                  PreconditionViolation);
  CHECK_THROWS_AS(estimator_stats(id, NoiseModel::gaussian(1.0), Vector::Zero(2), 1, 4.0, 999, 0),
                  InvalidArgument);
}

TEST_CASE("property: draws are a pure function of the stream indices") {
  const AffineProblem id = identity_problem(4);
  for (const NoiseModel& model : all_models(1.5)) {
    const Vector a = batch_mean(id, model, Vector::Zero(4), 8, {10, 3, 77});
    const Vector b = batch_mean(id, model, Vector::Zero(4), 8, {10, 3, 77});
    CHECK(a == b);
    bool any_differs = false;
    for (std::uint64_t k = 78; k < 98; ++k) {
      any_differs = any_differs || !(a == batch_mean(id, model, Vector::Zero(4), 8, {10, 3, k}));
    }
    CHECK(any_differs);
  }
}
