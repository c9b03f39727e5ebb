#include "adia/time_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace adia {

TimeGrid::TimeGrid(std::vector<double> points, double max_step_bound) : pts_(std::move(points)) {
  if (pts_.size() < 3) throw std::invalid_argument("time grid needs at least 3 points");
  if (pts_.front() != 0.0) throw std::invalid_argument("time grid must start at 0");
  for (size_t i = 1; i < pts_.size(); ++i) {
    if (!(pts_[i] > pts_[i - 1]))
      throw std::invalid_argument("time grid must be strictly increasing");
    if (!std::isfinite(pts_[i])) throw std::invalid_argument("time grid points must be finite");
    if (max_step_bound > 0.0 && pts_[i] - pts_[i - 1] > max_step_bound)
      throw std::invalid_argument("time grid step exceeds the configured bound");
  }
}

TimeGrid TimeGrid::uniform(double t_max, int steps) {
  if (!(t_max > 0.0)) throw std::invalid_argument("time grid needs t_max > 0");
  if (steps < 2) throw std::invalid_argument("uniform grid needs at least 2 steps");
  std::vector<double> pts(static_cast<size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) pts[static_cast<size_t>(k)] = t_max * k / steps;
  pts.front() = 0.0;
  pts.back() = t_max;
  return TimeGrid(std::move(pts));
}

}  // namespace adia
