#pragma once

#include "vipclip/common.hpp"
#include "vipclip/problems.hpp"
#include "vipclip/solvers.hpp"

#include <cstdint>
#include <optional>

namespace vipclip {

struct GapResult {
  double value = 0.0;
  Vector maximizer;
  std::int64_t iterations_used = 0;
  double certificate_gap = 0.0;  // gradient-mapping norm at termination
  double tol = 0.0;
  bool converged = false;
};

inline constexpr std::int64_t kGapMaxIterations = 100000;

double default_gap_tol(const AffineProblem& problem, const Vector& x, double R);

// Gap_R(x) = max_{u in B_R(x*)} <A u + b, x - u>, by projected gradient ascent.
// Requires A + A^T to be PSD; the objective is then concave.
GapResult gap_restricted(const AffineProblem& problem, const Vector& x, double R,
                         std::optional<double> tol = std::nullopt);

// Lower bound on Gap_R from n uniform samples in the ball, n samples on its
// boundary, and the candidates x*, P(x), P((x + x*) / 2).
double gap_bruteforce(const AffineProblem& problem, const Vector& x, double R,
                      std::int64_t n_samples, std::uint64_t seed);

// (1/(K+1)) sum_{k=0}^{K} |F(x^k)|^2 from the recorded iterates.
double avg_sq_operator_norm(const Trajectory& trajectory, const AffineProblem& problem);

double dist_sq(const Vector& x, const AffineProblem& problem);

}  // namespace vipclip
