#include "kenmotsu/sampling.hpp"

#include "kenmotsu/errors.hpp"

namespace kenmotsu {

std::vector<Eigen::VectorXd> random_points(const Box& box, std::size_t count,
                                           std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    Eigen::VectorXd p(static_cast<Eigen::Index>(box.size()));
    for (std::size_t i = 0; i < box.size(); ++i) {
      p(static_cast<Eigen::Index>(i)) = rng.uniform(box[i].first, box[i].second);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Eigen::VectorXd> grid_points(const Box& box, std::size_t per_axis) {
  if (per_axis == 0) throw DimensionError("grid needs at least one point per axis");
  std::size_t total = 1;
  for (std::size_t i = 0; i < box.size(); ++i) total *= per_axis;
  std::vector<Eigen::VectorXd> out;
  out.reserve(total);
  std::vector<std::size_t> index(box.size(), 0);
  for (std::size_t s = 0; s < total; ++s) {
    Eigen::VectorXd p(static_cast<Eigen::Index>(box.size()));
    for (std::size_t i = 0; i < box.size(); ++i) {
      const auto [lo, hi] = box[i];
      p(static_cast<Eigen::Index>(i)) =
          per_axis == 1 ? 0.5 * (lo + hi)
                        : lo + (hi - lo) * static_cast<double>(index[i]) /
                                   static_cast<double>(per_axis - 1);
    }
    out.push_back(std::move(p));
    for (std::size_t i = box.size(); i-- > 0;) {
      if (++index[i] < per_axis) break;
      index[i] = 0;
    }
  }
  return out;
}

}  // namespace kenmotsu
