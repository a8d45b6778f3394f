#pragma once

#include "vipclip/common.hpp"

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace vipclip {

// xoshiro256** whose state is derived from an index tuple. Every draw in the
// library comes from an engine keyed by (seed, channel, iteration, sample), so
// the stream for a given tuple is a pure function of those indices and does
// not depend on thread scheduling or on how many draws other tuples consumed.
class CounterEngine {
 public:
  using result_type = std::uint64_t;

  CounterEngine(std::initializer_list<std::uint64_t> key);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  // Uniform on [0, 1) with 53 random bits.
  double uniform01();
  // Uniform on (0, 1].
  double uniform01_open_left() { return 1.0 - uniform01(); }
  double standard_normal();

 private:
  std::array<std::uint64_t, 4> state_{};
};

// Channels separate independent draw families that share a seed.
namespace channel {
inline constexpr std::uint64_t kSgda = 1;
inline constexpr std::uint64_t kSegExtrapolation = 2;
inline constexpr std::uint64_t kSegUpdate = 3;
inline constexpr std::uint64_t kEstimator = 4;
inline constexpr std::uint64_t kNoiseNorms = 5;
inline constexpr std::uint64_t kConstruction = 6;
inline constexpr std::uint64_t kProbe = 7;
inline constexpr std::uint64_t kBruteForce = 8;
inline constexpr std::uint64_t kStartPoint = 9;
}  // namespace channel

// Addresses the mini-batch drawn at one (seed, channel, iteration); sample i
// of the batch gets its own engine.
struct NoiseStream {
  std::uint64_t seed = 0;
  std::uint64_t channel = 0;
  std::uint64_t iteration = 0;

  CounterEngine sample_engine(std::uint64_t sample) const {
    return CounterEngine{seed, channel, iteration, sample};
  }
};

// Normalized Gaussian direction scaled by radius * u^(1/d).
Vector sample_in_ball(Eigen::Index dim, double radius, CounterEngine& engine);
Vector sample_on_sphere(Eigen::Index dim, double radius, CounterEngine& engine);

}  // namespace vipclip
