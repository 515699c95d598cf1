#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rrtplus {

using Config = std::vector<double>;

// Axis-aligned box configuration space: per-DoF closed intervals
// [lo_i, hi_i]. Boundary configurations count as in-bounds.
class ConfigSpace {
 public:
  struct Interval {
    double lo;
    double hi;
  };

  explicit ConfigSpace(std::vector<Interval> bounds) : bounds_(std::move(bounds)) {
    if (bounds_.empty()) {
      throw std::invalid_argument("ConfigSpace: at least one DoF required");
    }
    for (const auto& b : bounds_) {
      if (!(b.lo < b.hi)) {
        throw std::invalid_argument("ConfigSpace: requires lo < hi per DoF");
      }
    }
  }

  // n joints, all bounded by the same interval.
  static ConfigSpace uniform_box(std::size_t n, double lo, double hi) {
    return ConfigSpace(std::vector<Interval>(n, Interval{lo, hi}));
  }

  std::size_t dim() const { return bounds_.size(); }
  const Interval& bound(std::size_t i) const { return bounds_[i]; }
  const std::vector<Interval>& bounds() const { return bounds_; }

  double range(std::size_t i) const { return bounds_[i].hi - bounds_[i].lo; }

  double diagonal() const {
    double s = 0.0;
    for (const auto& b : bounds_) s += (b.hi - b.lo) * (b.hi - b.lo);
    return std::sqrt(s);
  }

 private:
  std::vector<Interval> bounds_;
};

inline void require_dim(const Config& q, std::size_t n, const char* where) {
  if (q.size() != n) {
    throw std::invalid_argument(std::string(where) + ": dimension mismatch, got " +
                                std::to_string(q.size()) + ", expected " +
                                std::to_string(n));
  }
}

inline bool contains(const ConfigSpace& space, const Config& q) {
  require_dim(q, space.dim(), "contains");
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto& b = space.bound(i);
    if (q[i] < b.lo || q[i] > b.hi) return false;
  }
  return true;
}

inline double distance(const Config& a, const Config& b) {
  require_dim(b, a.size(), "distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline Config interpolate(const Config& a, const Config& b, double s) {
  require_dim(b, a.size(), "interpolate");
  if (s < 0.0 || s > 1.0) {
    throw std::invalid_argument("interpolate: s outside [0,1]");
  }
  Config out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + s * (b[i] - a[i]);
  return out;
}

using ValidityFn = std::function<bool(const Config&)>;
using EdgeValidityFn = std::function<bool(const Config&, const Config&)>;

// A planning query: space, endpoints and the two collision oracles.
// Obstacle space is only reachable through the predicates.
struct PlanProblem {
  ConfigSpace space;
  Config q_init;
  Config q_goal;
  ValidityFn is_valid;
  EdgeValidityFn is_edge_valid;

  PlanProblem(ConfigSpace s, Config init, Config goal, ValidityFn valid,
              EdgeValidityFn edge_valid)
      : space(std::move(s)),
        q_init(std::move(init)),
        q_goal(std::move(goal)),
        is_valid(std::move(valid)),
        is_edge_valid(std::move(edge_valid)) {
    require_dim(q_init, space.dim(), "PlanProblem(q_init)");
    require_dim(q_goal, space.dim(), "PlanProblem(q_goal)");
    if (!contains(space, q_init) || !is_valid(q_init)) {
      throw std::invalid_argument("PlanProblem: q_init out of bounds or in collision");
    }
    if (!contains(space, q_goal) || !is_valid(q_goal)) {
      throw std::invalid_argument("PlanProblem: q_goal out of bounds or in collision");
    }
  }
};

}  // namespace rrtplus
