#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rrtplus/cspace.hpp"
#include "rrtplus/nn.hpp"
#include "rrtplus/rng.hpp"
#include "rrtplus/sampling.hpp"
#include "rrtplus/schedule.hpp"

namespace rrtplus {

enum class PlannerKind { kRrt, kRrtConnect, kBiTrrt };

using CostFn = std::function<double(const Config&)>;
using SamplerFn = std::function<Config(Rng&)>;

struct PlannerConfig {
  double step_size = 0.0;        // 0 -> 10% of the space diagonal / sqrt(n)
  double goal_bias = 0.05;
  double edge_resolution = 0.0;  // 0 -> step_size / 10
  double global_timeout = 10.0;  // seconds
  std::uint64_t seed = 1;

  // Subspace progression ("+" planners).
  double alpha = 1.6;
  double subspace_budget = -1.0;  // total T for the stage schedule; <0 -> global_timeout
  Prioritization prioritization = Prioritization::kRandomPermutation;
  std::vector<std::size_t> explicit_priority;

  // T-RRT transition test (inert under uniform cost).
  double temp_init = 1e-4;
  double temp_rate = 2.0;

  // Deterministic termination: stop on sample counts instead of wall clock.
  bool count_mode = false;
  std::uint64_t sample_budget = 100000;
  std::int64_t subspace_sample_budget = -1;  // <0 -> sample_budget

  NnBackend nn_backend = NnBackend::kLinear;
  std::uint32_t simplify_iterations = 200;

  double resolved_step(const ConfigSpace& space) const {
    if (step_size > 0.0) return step_size;
    return 0.1 * space.diagonal() / std::sqrt(static_cast<double>(space.dim()));
  }
  double resolved_resolution(const ConfigSpace& space) const {
    if (edge_resolution > 0.0) return edge_resolution;
    return resolved_step(space) / 10.0;
  }
};

struct StageStats {
  std::size_t stage = 0;
  std::uint64_t samples = 0;
  double elapsed = 0.0;
};

struct PlanResult {
  std::vector<Config> path;  // empty iff not solved
  bool solved = false;
  std::optional<std::size_t> solved_stage;
  double wall_time = 0.0;
  std::uint64_t samples_total = 0;
  std::vector<StageStats> per_stage;
  double path_length_raw = 0.0;
  double path_length_simplified = 0.0;
  std::uint64_t vertex_count = 0;
  std::uint64_t transition_proposals = 0;
  std::uint64_t transition_accepts = 0;
};

// Steering rule: step at most eps from q_near toward q_rand; if already
// within eps, land on q_rand exactly (exact arrival makes tree joins and
// goal attachment testable with plain equality).
inline Config new_conf(const Config& q_near, const Config& q_rand, double eps) {
  const double d = distance(q_near, q_rand);
  if (d <= eps) return q_rand;
  const double s = eps / d;
  Config out(q_near.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = q_near[i] + s * (q_rand[i] - q_near[i]);
  }
  return out;
}

// Discretized edge check: waypoints spaced at most `resolution` apart,
// endpoints included. A wall thinner than the resolution can slip through;
// callers pick the resolution accordingly.
inline bool check_edge(const Config& a, const Config& b, const ValidityFn& valid,
                       double resolution) {
  if (!(resolution > 0.0)) throw std::invalid_argument("check_edge: resolution must be > 0");
  if (!valid(a) || !valid(b)) return false;
  const double d = distance(a, b);
  if (d == 0.0) return true;
  const auto segments = static_cast<std::size_t>(std::ceil(d / resolution));
  for (std::size_t j = 1; j < segments; ++j) {
    const double s = static_cast<double>(j) / static_cast<double>(segments);
    if (!valid(interpolate(a, b, s))) return false;
  }
  return true;
}

inline bool check_edge(const Config& a, const Config& b, const PlanProblem& problem,
                       double resolution) {
  return check_edge(a, b, problem.is_valid, resolution);
}

inline double path_length(const std::vector<Config>& path) {
  double len = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) len += distance(path[i - 1], path[i]);
  return len;
}

// Randomized shortcutting: pick two waypoints, splice the straight edge in
// when it validates. Never lengthens the path; endpoints stay fixed.
inline std::vector<Config> simplify_path(std::vector<Config> path, const PlanProblem& problem,
                                         Rng& rng, std::size_t iterations) {
  for (std::size_t it = 0; it < iterations; ++it) {
    if (path.size() < 3) break;
    std::size_t i = rng.index(path.size());
    std::size_t j = rng.index(path.size());
    if (i > j) std::swap(i, j);
    if (j - i < 2) continue;
    if (problem.is_edge_valid(path[i], path[j])) {
      path.erase(path.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                 path.begin() + static_cast<std::ptrdiff_t>(j));
    }
  }
  return path;
}

// Vertex store with parent links forming a forest rooted at vertex 0.
class Tree {
 public:
  Tree(const Config& root, NnBackend backend) : nn_(make_nn_index(backend)) {
    vertices_.push_back(root);
    parent_.push_back(-1);
    nn_->insert(root, 0);
  }

  VertexId add(const Config& q, VertexId parent) {
    const auto id = static_cast<VertexId>(vertices_.size());
    vertices_.push_back(q);
    parent_.push_back(static_cast<std::int32_t>(parent));
    nn_->insert(q, id);
    return id;
  }

  VertexId nearest(const Config& q) const { return nn_->nearest(q); }
  const Config& config(VertexId id) const { return vertices_[id]; }
  std::size_t size() const { return vertices_.size(); }

  std::vector<Config> path_from_root(VertexId id) const {
    std::vector<Config> out;
    std::int32_t cur = static_cast<std::int32_t>(id);
    while (cur >= 0) {
      out.push_back(vertices_[static_cast<std::size_t>(cur)]);
      cur = parent_[static_cast<std::size_t>(cur)];
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  std::vector<Config> vertices_;
  std::vector<std::int32_t> parent_;
  std::unique_ptr<NnIndex> nn_;
};

namespace detail {

// Temperature-controlled uphill filter from T-RRT. Uniform costmaps make
// every proposal a non-uphill move, so the filter accepts everything and
// consumes no randomness.
class TransitionTest {
 public:
  TransitionTest(double temp_init, double temp_rate, std::uint64_t seed)
      : temperature_(temp_init), rate_(temp_rate), rng_(seed) {}

  bool accept(double c_from, double c_to) {
    ++proposals_;
    if (c_to <= c_from) {
      ++accepts_;
      return true;
    }
    const double p = std::exp(-(c_to - c_from) / temperature_);
    if (rng_.u01() < p) {
      temperature_ /= rate_;
      ++accepts_;
      return true;
    }
    temperature_ *= rate_;
    return false;
  }

  std::uint64_t proposals() const { return proposals_; }
  std::uint64_t accepts() const { return accepts_; }

 private:
  double temperature_;
  double rate_;
  Rng rng_;
  std::uint64_t proposals_ = 0;
  std::uint64_t accepts_ = 0;
};

enum class ExtendStatus { kTrapped, kAdvanced, kReached };

struct CoreBase {
  virtual ~CoreBase() = default;
  virtual bool step(const Config& q_rand) = 0;  // true once a solution exists
  virtual std::vector<Config> extract_path() const = 0;
  virtual std::uint64_t vertex_count() const = 0;
  virtual std::uint64_t transition_proposals() const { return 0; }
  virtual std::uint64_t transition_accepts() const { return 0; }
};

class RrtCore final : public CoreBase {
 public:
  RrtCore(const PlanProblem& prob, double eps, NnBackend backend)
      : prob_(prob), eps_(eps), tree_(prob.q_init, backend) {}

  bool step(const Config& q_rand) override {
    const VertexId near_id = tree_.nearest(q_rand);
    const Config& q_near = tree_.config(near_id);
    const Config q_new = new_conf(q_near, q_rand, eps_);
    if (q_new == q_near) return false;  // zero-length extension
    if (!prob_.is_edge_valid(q_near, q_new)) return false;
    const VertexId id = tree_.add(q_new, near_id);
    if (distance(q_new, prob_.q_goal) <= eps_ && prob_.is_edge_valid(q_new, prob_.q_goal)) {
      goal_parent_ = static_cast<std::int64_t>(id);
      return true;
    }
    return false;
  }

  std::vector<Config> extract_path() const override {
    auto path = tree_.path_from_root(static_cast<VertexId>(goal_parent_));
    if (path.back() != prob_.q_goal) path.push_back(prob_.q_goal);
    return path;
  }

  std::uint64_t vertex_count() const override { return tree_.size(); }

 private:
  const PlanProblem& prob_;
  double eps_;
  Tree tree_;
  std::int64_t goal_parent_ = -1;
};

// Shared implementation of the two bidirectional planners. RRT-Connect is
// the transition-test-free special case; BiT-RRT routes every eps step
// through the test first.
class BiCore final : public CoreBase {
 public:
  BiCore(const PlanProblem& prob, double eps, NnBackend backend, CostFn cost,
         double temp_init, double temp_rate, std::uint64_t transition_seed)
      : prob_(prob),
        eps_(eps),
        cost_(std::move(cost)),
        transition_(temp_init, temp_rate, transition_seed),
        start_tree_(prob.q_init, backend),
        goal_tree_(prob.q_goal, backend) {}

  bool step(const Config& q_rand) override {
    Tree& tree_a = swapped_ ? goal_tree_ : start_tree_;
    Tree& tree_b = swapped_ ? start_tree_ : goal_tree_;

    VertexId new_id = 0;
    if (extend(tree_a, q_rand, &new_id) != ExtendStatus::kTrapped) {
      const Config target = tree_a.config(new_id);
      VertexId join_b = 0;
      if (connect(tree_b, target, &join_b)) {
        if (swapped_) {
          join_start_ = static_cast<std::int64_t>(join_b);
          join_goal_ = static_cast<std::int64_t>(new_id);
        } else {
          join_start_ = static_cast<std::int64_t>(new_id);
          join_goal_ = static_cast<std::int64_t>(join_b);
        }
        return true;
      }
    }
    swapped_ = !swapped_;
    return false;
  }

  std::vector<Config> extract_path() const override {
    auto path = start_tree_.path_from_root(static_cast<VertexId>(join_start_));
    const auto goal_side = goal_tree_.path_from_root(static_cast<VertexId>(join_goal_));
    // goal_side runs q_goal -> join; walk it backwards, skipping the join
    // vertex both trees share.
    for (auto it = std::next(goal_side.rbegin()); it != goal_side.rend(); ++it) {
      path.push_back(*it);
    }
    return path;
  }

  std::uint64_t vertex_count() const override { return start_tree_.size() + goal_tree_.size(); }
  std::uint64_t transition_proposals() const override { return transition_.proposals(); }
  std::uint64_t transition_accepts() const override { return transition_.accepts(); }

 private:
  ExtendStatus extend(Tree& tree, const Config& target, VertexId* out_id) {
    const VertexId near_id = tree.nearest(target);
    return extend_from(tree, near_id, target, out_id);
  }

  ExtendStatus extend_from(Tree& tree, VertexId near_id, const Config& target,
                           VertexId* out_id) {
    const Config& q_near = tree.config(near_id);
    const Config q_new = new_conf(q_near, target, eps_);
    if (q_new == q_near) return ExtendStatus::kTrapped;
    if (cost_ && !transition_.accept(cost_(q_near), cost_(q_new))) {
      return ExtendStatus::kTrapped;
    }
    if (!prob_.is_edge_valid(q_near, q_new)) return ExtendStatus::kTrapped;
    *out_id = tree.add(q_new, near_id);
    return q_new == target ? ExtendStatus::kReached : ExtendStatus::kAdvanced;
  }

  // Greedy connect: keep stepping from the newest vertex until the target
  // is reached or an extension fails.
  bool connect(Tree& tree, const Config& target, VertexId* join_id) {
    VertexId cur = tree.nearest(target);
    for (;;) {
      VertexId added = 0;
      const ExtendStatus st = extend_from(tree, cur, target, &added);
      if (st == ExtendStatus::kTrapped) return false;
      if (st == ExtendStatus::kReached) {
        *join_id = added;
        return true;
      }
      cur = added;
    }
  }

  const PlanProblem& prob_;
  double eps_;
  CostFn cost_;
  TransitionTest transition_;
  Tree start_tree_;
  Tree goal_tree_;
  bool swapped_ = false;
  std::int64_t join_start_ = -1;
  std::int64_t join_goal_ = -1;
};

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

namespace detail {

struct DriveOptions {
  PlannerKind kind = PlannerKind::kRrt;
  bool enhanced = false;
  CostFn cost;
  SamplerFn sampler;  // optional replacement for uniform sampling
};

inline PlanResult drive(const PlanProblem& prob, const PlannerConfig& cfg,
                        const DriveOptions& opt) {
  const ConfigSpace& space = prob.space;
  const double eps = cfg.resolved_step(space);
  PlanResult out;

  Rng sampler_rng(cfg.seed);
  Rng perm_rng(Rng::substream(cfg.seed, 1));
  Rng simplify_rng(Rng::substream(cfg.seed, 2));
  const std::uint64_t transition_seed = Rng::substream(cfg.seed, 3);

  if (prob.q_init == prob.q_goal) {
    out.solved = true;
    out.path = {prob.q_init};
    if (opt.enhanced) out.solved_stage = 1;
    out.vertex_count = 1;
    return out;
  }

  std::unique_ptr<CoreBase> core;
  switch (opt.kind) {
    case PlannerKind::kRrt:
      core = std::make_unique<RrtCore>(prob, eps, cfg.nn_backend);
      break;
    case PlannerKind::kRrtConnect:
      core = std::make_unique<BiCore>(prob, eps, cfg.nn_backend, CostFn{}, cfg.temp_init,
                                      cfg.temp_rate, transition_seed);
      break;
    case PlannerKind::kBiTrrt:
      core = std::make_unique<BiCore>(prob, eps, cfg.nn_backend, opt.cost, cfg.temp_init,
                                      cfg.temp_rate, transition_seed);
      break;
  }
  const bool use_goal_bias = (opt.kind == PlannerKind::kRrt);

  // Stage machinery. Baselines run a single uniform stage; enhanced runs
  // flats of growing dimension (stages 1..n) and finishes with the uniform
  // stage n+1 that only the global budget terminates.
  const std::size_t n = space.dim();
  const std::size_t n_stages = opt.enhanced ? n + 1 : 1;
  std::size_t stage = 1;
  std::vector<std::size_t> priority;
  double r_min = 0.0, r_max = 1.0;
  StageSchedule time_sched;
  SampleCountSchedule count_sched;
  bool have_schedule = false;

  if (opt.enhanced) {
    priority = make_priority(cfg.prioritization, n, perm_rng, cfg.explicit_priority);
    std::tie(r_min, r_max) = compute_boundary_values(space, prob.q_init, prob.q_goal);
    if (cfg.count_mode) {
      const std::uint64_t sub_total = cfg.subspace_sample_budget < 0
                                          ? cfg.sample_budget
                                          : static_cast<std::uint64_t>(cfg.subspace_sample_budget);
      if (sub_total > 0) {
        count_sched = make_count_schedule(sub_total, cfg.alpha, n_stages);
        have_schedule = true;
      }
    } else {
      const double sub_total = cfg.subspace_budget < 0.0 ? cfg.global_timeout : cfg.subspace_budget;
      if (sub_total > 0.0) {
        time_sched = make_schedule(sub_total, cfg.alpha, n_stages);
        have_schedule = true;
      }
    }
    if (!have_schedule) stage = n_stages;  // zero budget: straight to uniform search
  } else {
    stage = n_stages;
  }

  auto make_spec = [&](std::size_t st) {
    return SubspaceSpec(priority, st, r_min, r_max);
  };
  std::optional<SubspaceSpec> spec;
  if (opt.enhanced && stage < n_stages) spec = make_spec(stage);

  detail::Timer timer;
  double stage_start = 0.0;
  std::uint64_t stage_samples = 0;

  auto close_stage = [&](std::size_t st) {
    if (!opt.enhanced) return;
    out.per_stage.push_back(StageStats{st, stage_samples, timer.seconds() - stage_start});
  };

  bool solved = false;
  for (;;) {
    if (cfg.count_mode ? out.samples_total >= cfg.sample_budget
                       : timer.seconds() >= cfg.global_timeout) {
      break;
    }
    if (opt.enhanced && stage < n_stages) {
      const bool done = cfg.count_mode
                            ? stage_done(stage_samples, stage, count_sched)
                            : stage_done(timer.seconds() - stage_start, stage, time_sched);
      if (done) {
        close_stage(stage);
        ++stage;
        stage_samples = 0;
        stage_start = timer.seconds();
        if (stage < n_stages) spec = make_spec(stage);
        continue;
      }
    }

    Config q_rand;
    if (use_goal_bias && sampler_rng.chance(cfg.goal_bias)) {
      q_rand = prob.q_goal;
    } else if (opt.enhanced && stage < n_stages) {
      q_rand = prioritized_sample(space, prob.q_init, prob.q_goal, *spec, sampler_rng);
    } else if (opt.sampler) {
      q_rand = opt.sampler(sampler_rng);
    } else {
      q_rand = uniform_sample(space, sampler_rng);
    }
    ++out.samples_total;
    ++stage_samples;

    if (core->step(q_rand)) {
      solved = true;
      break;
    }
  }
  close_stage(stage);

  out.solved = solved;
  out.vertex_count = core->vertex_count();
  out.transition_proposals = core->transition_proposals();
  out.transition_accepts = core->transition_accepts();
  if (solved) {
    if (opt.enhanced) out.solved_stage = stage;
    out.path = core->extract_path();
    out.path_length_raw = path_length(out.path);
    out.path = simplify_path(std::move(out.path), prob, simplify_rng, cfg.simplify_iterations);
    out.path_length_simplified = path_length(out.path);
  }
  out.wall_time = timer.seconds();
  return out;
}

}  // namespace detail

inline PlanResult rrt_plan(const PlanProblem& problem, const PlannerConfig& cfg,
                           SamplerFn sampler = {}) {
  detail::DriveOptions opt;
  opt.kind = PlannerKind::kRrt;
  opt.sampler = std::move(sampler);
  return detail::drive(problem, cfg, opt);
}

inline PlanResult rrt_connect_plan(const PlanProblem& problem, const PlannerConfig& cfg,
                                   SamplerFn sampler = {}) {
  detail::DriveOptions opt;
  opt.kind = PlannerKind::kRrtConnect;
  opt.sampler = std::move(sampler);
  return detail::drive(problem, cfg, opt);
}

inline PlanResult bitrrt_plan(const PlanProblem& problem, const PlannerConfig& cfg,
                              CostFn cost = {}, SamplerFn sampler = {}) {
  detail::DriveOptions opt;
  opt.kind = PlannerKind::kBiTrrt;
  opt.cost = std::move(cost);
  opt.sampler = std::move(sampler);
  return detail::drive(problem, cfg, opt);
}

// Subspace-progression wrapper: same planning loop as the base planner but
// sampling from flats of growing dimension on the stage schedule. Trees, NN
// index and counters persist across stage boundaries.
inline PlanResult subspace_enhance(PlannerKind base, const PlanProblem& problem,
                                   const PlannerConfig& cfg, CostFn cost = {}) {
  detail::DriveOptions opt;
  opt.kind = base;
  opt.enhanced = true;
  opt.cost = std::move(cost);
  return detail::drive(problem, cfg, opt);
}

}  // namespace rrtplus
