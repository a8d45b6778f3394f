#pragma once

#include "vipclip/common.hpp"
#include "vipclip/oracle.hpp"
#include "vipclip/problems.hpp"

#include <cstdint>
#include <vector>

namespace vipclip {

// Exceedance fractions of a normal distribution at Q3 + 1.5 IQR and Q3 + 3 IQR.
inline constexpr double kNormalMildReference = 0.0035;
inline constexpr double kNormalExtremeReference = 1.2e-6;

struct Quartiles {
  double q1 = 0.0;
  double q2 = 0.0;
  double q3 = 0.0;
};

struct TailReport {
  double q1 = 0.0;
  double q2 = 0.0;
  double q3 = 0.0;
  double p_mr = 0.0;
  double p_er = 0.0;
  double rho_mr = 0.0;
  double rho_er = 0.0;
  std::int64_t n = 0;
};

struct Histogram {
  std::vector<double> edges;         // n_bins + 1
  std::vector<std::int64_t> counts;  // n_bins
};

// Linear interpolation at h = (n - 1) p of the sorted samples.
Quartiles quartiles(std::vector<double> samples);

// Fraction of samples strictly above Q3 + lam (Q3 - Q1).
double f_lambda(const std::vector<double>& samples, double lam);

TailReport tail_report(const std::vector<double>& samples);

// n values of |batch_mean(x, m) - F(x)|, draw i keyed by (seed, i).
std::vector<double> noise_norm_samples(const AffineProblem& problem,
                                       const NoiseModel& model, const Vector& x,
                                       std::int64_t n, std::int64_t m,
                                       std::uint64_t seed);

// Equal-width bins over [min, max]; the last bin is closed on the right.
Histogram histogram(const std::vector<double>& samples, std::int64_t n_bins);

}  // namespace vipclip
