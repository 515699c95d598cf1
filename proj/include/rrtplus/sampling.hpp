#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rrtplus/cspace.hpp"
#include "rrtplus/rng.hpp"

namespace rrtplus {

// Thrown when the start-goal line degenerates to a point. Callers that can
// produce a trivial path handle this before sampling ever starts.
struct DegenerateLineError : std::invalid_argument {
  DegenerateLineError() : std::invalid_argument("q_init equals q_goal: line is degenerate") {}
};

// Parametric start-goal line L(r) = q_init + r * (q_goal - q_init).
// L(0) = q_init, L(1) = q_goal.
struct LineParams {
  Config origin;
  Config direction;

  LineParams(const Config& q_init, const Config& q_goal) : origin(q_init) {
    require_dim(q_goal, q_init.size(), "LineParams");
    direction.resize(q_init.size());
    for (std::size_t i = 0; i < q_init.size(); ++i) {
      direction[i] = q_goal[i] - q_init[i];
    }
  }

  Config at(double r) const {
    Config q(origin.size());
    for (std::size_t i = 0; i < origin.size(); ++i) {
      q[i] = direction[i] * r + origin[i];
    }
    return q;
  }
};

inline Config line_sample(const Config& q_init, const Config& q_goal, double r) {
  require_dim(q_goal, q_init.size(), "line_sample");
  Config q(q_init.size());
  for (std::size_t i = 0; i < q_init.size(); ++i) {
    q[i] = (q_goal[i] - q_init[i]) * r + q_init[i];
  }
  return q;
}

// Extent of the start-goal line inside the box: the chord [r_min, r_max]
// with r_min <= 0 <= 1 <= r_max. Found by intersecting the line with every
// per-DoF boundary flat and keeping the intersections that land inside the
// box (within an absolute tolerance that absorbs floating-point boundary
// noise). Flats parallel to the line (direction component zero) are skipped.
// When a tolerance-admitted intersection and the true chord endpoint
// disagree, the tightest candidate on each side wins, so the result matches
// exact interval clipping. Call once per problem, before the planning loop.
inline std::pair<double, double> compute_boundary_values(const ConfigSpace& space,
                                                         const Config& q_init,
                                                         const Config& q_goal,
                                                         double tol = 1e-9) {
  require_dim(q_init, space.dim(), "compute_boundary_values(q_init)");
  require_dim(q_goal, space.dim(), "compute_boundary_values(q_goal)");
  LineParams line(q_init, q_goal);

  bool moved = false;
  for (double d : line.direction) {
    if (d != 0.0) moved = true;
  }
  if (!moved) throw DegenerateLineError();

  auto in_box = [&](const Config& p) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      const auto& b = space.bound(i);
      if (p[i] < b.lo - tol || p[i] > b.hi + tol) return false;
    }
    return true;
  };

  // Both endpoints lie in the box, so the chord always covers [0, 1] and
  // candidate intersections split cleanly around the interior: the r_min
  // endpoint sits at t <= 0, the r_max endpoint at t >= 1. On each side the
  // candidate nearest the chord wins, which discards tolerance-admitted
  // points just past a corner.
  double best_lo = -std::numeric_limits<double>::infinity();
  double best_hi = std::numeric_limits<double>::infinity();
  bool lo_found = false;
  bool hi_found = false;
  for (std::size_t i = 0; i < space.dim(); ++i) {
    if (line.direction[i] == 0.0) continue;
    for (double c : {space.bound(i).lo, space.bound(i).hi}) {
      const double t = (c - q_init[i]) / line.direction[i];
      if (!in_box(line.at(t))) continue;
      if (t < 0.5) {
        best_lo = std::max(best_lo, t);
        lo_found = true;
      } else {
        best_hi = std::min(best_hi, t);
        hi_found = true;
      }
    }
  }
  const double r_min = lo_found ? std::min(best_lo, 0.0) : 0.0;
  const double r_max = hi_found ? std::max(best_hi, 1.0) : 1.0;
  return {r_min, r_max};
}

// One stage's search flat. The priority permutation fixes the DoF release
// order: at stage k the first k-1 entries vary freely, the rest stay
// constrained to the start-goal line. Stage 1 constrains everything (the
// pure line); stage n+1 releases everything, which is plain uniform
// sampling over the box.
struct SubspaceSpec {
  std::vector<std::size_t> priority;
  std::size_t stage = 1;
  double r_min = 0.0;
  double r_max = 1.0;
  std::vector<bool> constrained;  // P_con as a mask

  SubspaceSpec(std::vector<std::size_t> prio, std::size_t stage_, double rmin, double rmax)
      : priority(std::move(prio)), stage(stage_), r_min(rmin), r_max(rmax) {
    const std::size_t n = priority.size();
    if (stage < 1 || stage > n + 1) {
      throw std::invalid_argument("SubspaceSpec: stage must be in [1, n+1]");
    }
    std::vector<bool> seen(n, false);
    for (std::size_t i : priority) {
      if (i >= n || seen[i]) throw std::invalid_argument("SubspaceSpec: bad permutation");
      seen[i] = true;
    }
    constrained.assign(n, true);
    for (std::size_t k = 0; k + 1 < stage; ++k) constrained[priority[k]] = false;
  }

  std::size_t num_constrained() const {
    return priority.size() - (stage - 1);
  }
  bool is_full_space() const { return stage == priority.size() + 1; }
};

inline Config uniform_sample(const ConfigSpace& space, Rng& rng) {
  Config q(space.dim());
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto& b = space.bound(i);
    q[i] = rng.uniform(b.lo, b.hi);
  }
  return q;
}

// Prioritized subspace sampler: place a point on the start-goal line with a
// single shared scalar r drawn from [r_min, r_max], then overwrite every
// released DoF with an independent uniform draw over its range.
inline Config prioritized_sample(const ConfigSpace& space, const Config& q_init,
                                 const Config& q_goal, const SubspaceSpec& spec,
                                 Rng& rng) {
  require_dim(q_init, space.dim(), "prioritized_sample(q_init)");
  require_dim(q_goal, space.dim(), "prioritized_sample(q_goal)");
  if (spec.priority.size() != space.dim()) {
    throw std::invalid_argument("prioritized_sample: spec dimension mismatch");
  }
  if (spec.is_full_space()) return uniform_sample(space, rng);

  const double r = rng.uniform(spec.r_min, spec.r_max);
  Config q = line_sample(q_init, q_goal, r);
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!spec.constrained[i]) {
      const auto& b = space.bound(i);
      q[i] = rng.u01() * (b.hi - b.lo) + b.lo;
    }
  }
  return q;
}

// Release order policies for building the priority permutation.
enum class Prioritization {
  kRandomPermutation,  // shuffled fresh per run
  kBaseFirst,          // joints nearest the chain base released first
  kExplicit,           // caller-provided permutation
};

inline std::vector<std::size_t> make_priority(Prioritization policy, std::size_t n,
                                              Rng& rng,
                                              const std::vector<std::size_t>& explicit_order = {}) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  switch (policy) {
    case Prioritization::kRandomPermutation:
      rng.shuffle(p);
      break;
    case Prioritization::kBaseFirst:
      break;  // identity: DoF 0 is the base joint
    case Prioritization::kExplicit:
      if (explicit_order.size() != n) {
        throw std::invalid_argument("make_priority: explicit permutation has wrong length");
      }
      p = explicit_order;
      break;
  }
  return p;
}

}  // namespace rrtplus
