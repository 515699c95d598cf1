#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rrtplus {

// Geometric per-stage budget sequence: base time
//   t0 = (alpha - 1) / (alpha * (alpha^n - 1)) * T
// and t_i = alpha * t_{i-1} for i = 1..n, so the t_i sum to T and each
// stage gets alpha times its predecessor's slice.
struct StageSchedule {
  double total = 0.0;
  double alpha = 0.0;
  std::size_t n = 0;
  double t0 = 0.0;
  std::vector<double> t;  // t[i-1] is stage i's budget

  double stage_budget(std::size_t stage) const {
    if (stage < 1 || stage > n) throw std::out_of_range("StageSchedule: stage out of range");
    return t[stage - 1];
  }
};

inline StageSchedule make_schedule(double total, double alpha, std::size_t n) {
  if (!(total > 0.0)) throw std::invalid_argument("make_schedule: T must be > 0");
  if (!(alpha > 1.0)) throw std::invalid_argument("make_schedule: alpha must be > 1");
  if (n < 1) throw std::invalid_argument("make_schedule: n must be >= 1");

  StageSchedule s;
  s.total = total;
  s.alpha = alpha;
  s.n = n;
  // alpha^n - 1 via expm1(n*log1p(alpha-1)) keeps t0 accurate when alpha is
  // barely above 1, where the direct form cancels badly.
  const double growth = std::expm1(static_cast<double>(n) * std::log1p(alpha - 1.0));
  s.t0 = (alpha - 1.0) / (alpha * growth) * total;
  s.t.resize(n);
  double prev = s.t0;
  for (std::size_t i = 0; i < n; ++i) {
    prev *= alpha;
    s.t[i] = prev;
  }
  return s;
}

// Wall-clock stage termination. The final stage ignores its own slice and
// runs until the planner's global timeout, so the last subsearch keeps the
// completeness behavior of the underlying planner.
inline bool stage_done(double elapsed_in_stage, std::size_t stage, const StageSchedule& s) {
  if (stage < 1 || stage > s.n) throw std::out_of_range("stage_done: stage out of range");
  if (stage == s.n) return false;
  return elapsed_in_stage >= s.stage_budget(stage);
}

// Sample-count twin of StageSchedule for deterministic runs: counts follow
// the same geometric shape, count_i = round(c0 * alpha^i).
struct SampleCountSchedule {
  std::uint64_t total = 0;
  double alpha = 0.0;
  std::size_t n = 0;
  std::vector<std::uint64_t> counts;

  std::uint64_t stage_budget(std::size_t stage) const {
    if (stage < 1 || stage > n) throw std::out_of_range("SampleCountSchedule: stage out of range");
    return counts[stage - 1];
  }
};

inline SampleCountSchedule make_count_schedule(std::uint64_t total_samples, double alpha,
                                               std::size_t n) {
  if (total_samples == 0) throw std::invalid_argument("make_count_schedule: total must be > 0");
  if (!(alpha > 1.0)) throw std::invalid_argument("make_count_schedule: alpha must be > 1");
  if (n < 1) throw std::invalid_argument("make_count_schedule: n must be >= 1");

  SampleCountSchedule s;
  s.total = total_samples;
  s.alpha = alpha;
  s.n = n;
  const double growth = std::expm1(static_cast<double>(n) * std::log1p(alpha - 1.0));
  const double c0 = (alpha - 1.0) / (alpha * growth) * static_cast<double>(total_samples);
  s.counts.resize(n);
  double scale = c0;
  for (std::size_t i = 0; i < n; ++i) {
    scale *= alpha;
    s.counts[i] = static_cast<std::uint64_t>(std::llround(scale));
  }
  return s;
}

inline bool stage_done(std::uint64_t samples_in_stage, std::size_t stage,
                       const SampleCountSchedule& s) {
  if (stage < 1 || stage > s.n) throw std::out_of_range("stage_done: stage out of range");
  if (stage == s.n) return false;
  return samples_in_stage >= s.stage_budget(stage);
}

}  // namespace rrtplus
