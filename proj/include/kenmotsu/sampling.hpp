#pragma once

// Seeded sampling.  Uniform draws are built from the raw 64-bit output of
// std::mt19937_64 (top 53 bits), so sequences are identical on every
// standard library, unlike std::uniform_real_distribution.

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace kenmotsu {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  Eigen::VectorXd uniform_vector(Eigen::Index n, double lo, double hi) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform(lo, hi);
    return v;
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

using Box = std::vector<std::pair<double, double>>;

std::vector<Eigen::VectorXd> random_points(const Box& box, std::size_t count,
                                           std::uint64_t seed);

// Tensor grid with `per_axis` points on every axis, endpoints included;
// per_axis == 1 gives the box center.  Last axis varies fastest.
std::vector<Eigen::VectorXd> grid_points(const Box& box, std::size_t per_axis);

}  // namespace kenmotsu
