#include "vipclip/metrics.hpp"

#include "vipclip/random.hpp"

#include <algorithm>
#include <cmath>

namespace vipclip {

namespace {

double gap_objective(const AffineProblem& p, const Vector& x, const Vector& u) {
  return evaluate(p, u).dot(x - u);
}

Vector project_ball(const Vector& u, const Vector& center, double radius) {
  const Vector diff = u - center;
  const double norm = diff.norm();
  if (norm <= radius) return u;
  return center + (radius / norm) * diff;
}

}  // namespace

double default_gap_tol(const AffineProblem& problem, const Vector& x, double R) {
  return 1e-8 * (1.0 + (x - problem.solution()).norm() * problem.lipschitz() * R);
}

GapResult gap_restricted(const AffineProblem& problem, const Vector& x, double R,
                         std::optional<double> tol) {
  require_dim(x.size(), problem.dimension(), "gap_restricted");
  require(all_finite(x), "gap_restricted: x must be finite");
  require(R > 0.0 && std::isfinite(R), "gap_restricted: R must be finite and positive");
  const Matrix& a = problem.matrix();
  const Matrix sym = a + a.transpose();
  if (2.0 * min_sym_eigenvalue(a) < -1e-10) {
    throw InvalidArgument(
        "gap_restricted: the operator is not monotone (A + A^T has a negative "
        "eigenvalue); use the squared-norm or distance metric instead");
  }
  const double eps = tol.value_or(default_gap_tol(problem, x, R));
  require(eps > 0.0, "gap_restricted: tol must be positive");

  const Vector& xs = problem.solution();
  const Vector& b = problem.offset();
  // g(u) = <Au + b, x - u>, grad g = A^T x - (A + A^T) u - b.
  const Vector lin = a.transpose() * x - b;
  const double step = 1.0 / (2.0 * max_sym_eigenvalue(a) + spectral_norm(a) + 1.0);

  GapResult r;
  r.tol = eps;
  Vector u = xs;
  Vector best = xs;
  double best_value = 0.0;
  for (std::int64_t it = 0; it < kGapMaxIterations; ++it) {
    const Vector grad = lin - sym * u;
    const Vector next = project_ball(u + step * grad, xs, R);
    const double certificate = (next - u).norm() / step;
    r.iterations_used = it + 1;
    r.certificate_gap = certificate;
    u = next;
    const double v = gap_objective(problem, x, u);
    if (v > best_value) {
      best_value = v;
      best = u;
    }
    if (certificate <= eps) {
      r.converged = true;
      break;
    }
  }
  r.maximizer = best;
  r.value = best_value;
  return r;
}

double gap_bruteforce(const AffineProblem& problem, const Vector& x, double R,
                      std::int64_t n_samples, std::uint64_t seed) {
  require_dim(x.size(), problem.dimension(), "gap_bruteforce");
  require(n_samples >= 1, "gap_bruteforce: n_samples must be positive");
  require(R > 0.0, "gap_bruteforce: R must be positive");
  const Vector& xs = problem.solution();
  const Eigen::Index d = problem.dimension();
  double best = gap_objective(problem, x, xs);
  best = std::max(best, gap_objective(problem, x, project_ball(x, xs, R)));
  best = std::max(best, gap_objective(problem, x, project_ball(0.5 * (x + xs), xs, R)));
  for (std::int64_t i = 0; i < n_samples; ++i) {
    CounterEngine engine{seed, channel::kBruteForce, static_cast<std::uint64_t>(i)};
    best = std::max(best, gap_objective(problem, x, xs + sample_in_ball(d, R, engine)));
    best = std::max(best, gap_objective(problem, x, xs + sample_on_sphere(d, R, engine)));
  }
  return best;
}

double avg_sq_operator_norm(const Trajectory& trajectory, const AffineProblem& problem) {
  require(trajectory.iterates.size() >= 2,
          "avg_sq_operator_norm: trajectory has no recorded iterates");
  // iterates holds x^0..x^{K+1}; the average runs over x^0..x^K.
  const std::size_t n = trajectory.iterates.size() - 1;
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += evaluate(problem, trajectory.iterates[k]).squaredNorm();
  return sum / static_cast<double>(n);
}

double dist_sq(const Vector& x, const AffineProblem& problem) {
  require_dim(x.size(), problem.dimension(), "dist_sq");
  return (x - problem.solution()).squaredNorm();
}

}  // namespace vipclip
