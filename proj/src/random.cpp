#include "vipclip/random.hpp"

#include <boost/random/normal_distribution.hpp>

#include <cmath>

namespace vipclip {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

CounterEngine::CounterEngine(std::initializer_list<std::uint64_t> key) {
  std::uint64_t h = 0x6A09E667F3BCC908ULL;
  for (std::uint64_t component : key) {
    std::uint64_t s = h ^ component;
    h = splitmix64(s);
    h ^= rotl(component, 29) * 0xD6E8FEB86659FD93ULL;
  }
  std::uint64_t s = h;
  for (auto& word : state_) word = splitmix64(s);
}

CounterEngine::result_type CounterEngine::operator()() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double CounterEngine::uniform01() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double CounterEngine::standard_normal() {
  boost::random::normal_distribution<double> normal;
  return normal(*this);
}

Vector sample_on_sphere(Eigen::Index dim, double radius,
                        CounterEngine& engine) {
  Vector direction(dim);
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < dim; ++i) direction[i] = engine.standard_normal();
    norm = direction.norm();
  } while (norm == 0.0);
  return (radius / norm) * direction;
}

Vector sample_in_ball(Eigen::Index dim, double radius, CounterEngine& engine) {
  Vector direction = sample_on_sphere(dim, 1.0, engine);
  const double u = engine.uniform01();
  return radius * std::pow(u, 1.0 / static_cast<double>(dim)) * direction;
}

}  // namespace vipclip
