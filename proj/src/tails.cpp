#include "vipclip/tails.hpp"

#include "vipclip/random.hpp"

#include <algorithm>
#include <cmath>

namespace vipclip {

namespace {

double sorted_quantile(const std::vector<double>& sorted, double p) {
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Quartiles sorted_quartiles(const std::vector<double>& sorted) {
  return {sorted_quantile(sorted, 0.25), sorted_quantile(sorted, 0.5),
          sorted_quantile(sorted, 0.75)};
}

double exceedance(const std::vector<double>& samples, const Quartiles& q, double lam) {
  const double threshold = q.q3 + lam * (q.q3 - q.q1);
  const auto above = std::count_if(samples.begin(), samples.end(),
                                   [threshold](double v) { return v > threshold; });
  return static_cast<double>(above) / static_cast<double>(samples.size());
}

void check_samples(const std::vector<double>& samples) {
  for (double v : samples) require(std::isfinite(v), "tail statistics need finite samples");
}

}  // namespace

Quartiles quartiles(std::vector<double> samples) {
  require(!samples.empty(), "quartiles: empty sample");
  check_samples(samples);
  std::sort(samples.begin(), samples.end());
  return sorted_quartiles(samples);
}

double f_lambda(const std::vector<double>& samples, double lam) {
  require(samples.size() >= 4, "f_lambda needs at least 4 samples");
  require(lam > 0.0, "f_lambda: lambda must be positive");
  return exceedance(samples, quartiles(samples), lam);
}

TailReport tail_report(const std::vector<double>& samples) {
  require(samples.size() >= 100, "tail_report needs at least 100 samples");
  const Quartiles q = quartiles(samples);
  TailReport r;
  r.q1 = q.q1;
  r.q2 = q.q2;
  r.q3 = q.q3;
  r.n = static_cast<std::int64_t>(samples.size());
  r.p_mr = exceedance(samples, q, 1.5);
  r.p_er = exceedance(samples, q, 3.0);
  r.rho_mr = r.p_mr / kNormalMildReference;
  r.rho_er = r.p_er / kNormalExtremeReference;
  return r;
}

std::vector<double> noise_norm_samples(const AffineProblem& problem,
                                       const NoiseModel& model, const Vector& x,
                                       std::int64_t n, std::int64_t m,
                                       std::uint64_t seed) {
  require(n >= 1, "noise_norm_samples: n must be positive");
  require(m >= 1, "noise_norm_samples: batch size must be positive");
  require_dim(x.size(), problem.dimension(), "noise_norm_samples");
  const Vector fx = evaluate(problem, x);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const NoiseStream stream{seed, channel::kNoiseNorms, static_cast<std::uint64_t>(i)};
    out.push_back((batch_mean(problem, model, x, m, stream) - fx).norm());
  }
  return out;
}

Histogram histogram(const std::vector<double>& samples, std::int64_t n_bins) {
  require(!samples.empty(), "histogram: empty sample");
  require(n_bins >= 1, "histogram: n_bins must be positive");
  check_samples(samples);
  const auto [min_it, max_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *min_it;
  const double hi = *max_it;
  Histogram h;
  h.counts.assign(static_cast<std::size_t>(n_bins), 0);
  h.edges.resize(static_cast<std::size_t>(n_bins + 1));
  const double width = (hi - lo) / static_cast<double>(n_bins);
  for (std::int64_t i = 0; i <= n_bins; ++i) {
    h.edges[static_cast<std::size_t>(i)] = lo + width * static_cast<double>(i);
  }
  h.edges.back() = hi;
  for (double v : samples) {
    std::int64_t bin = 0;
    if (width > 0.0) {
      bin = static_cast<std::int64_t>(std::floor((v - lo) / width));
      bin = std::clamp<std::int64_t>(bin, 0, n_bins - 1);
      // Keep the bin consistent with the stored edges under rounding.
      while (bin > 0 && v < h.edges[static_cast<std::size_t>(bin)]) --bin;
      while (bin < n_bins - 1 && v >= h.edges[static_cast<std::size_t>(bin + 1)]) ++bin;
    }
    ++h.counts[static_cast<std::size_t>(bin)];
  }
  return h;
}

}  // namespace vipclip
