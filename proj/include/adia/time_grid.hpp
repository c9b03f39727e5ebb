#ifndef ADIA_TIME_GRID_HPP
#define ADIA_TIME_GRID_HPP

#include <vector>

namespace adia {

// Strictly increasing sample times starting at 0; steps may be nonuniform.
class TimeGrid {
 public:
  TimeGrid() = default;
  explicit TimeGrid(std::vector<double> points, double max_step_bound = 0.0);
  static TimeGrid uniform(double t_max, int steps);  // steps intervals, steps+1 points

  int size() const { return static_cast<int>(pts_.size()); }
  double operator[](int k) const { return pts_[static_cast<size_t>(k)]; }
  double front() const { return pts_.front(); }
  double back() const { return pts_.back(); }
  double step(int k) const { return pts_[static_cast<size_t>(k) + 1] - pts_[static_cast<size_t>(k)]; }
  const std::vector<double>& points() const { return pts_; }

  bool operator==(const TimeGrid& o) const { return pts_ == o.pts_; }

 private:
  std::vector<double> pts_;
};

}  // namespace adia

#endif
