#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "rrtplus/cspace.hpp"

namespace rrtplus {

using VertexId = std::uint32_t;

namespace detail {
inline double dist2(const Config& a, const Config& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}
}  // namespace detail

// Nearest-vertex index. Every implementation must return the exact argmin
// of Euclidean distance over the stored points, ties broken by lowest id;
// benchmark fairness depends on all planners seeing identical NN answers.
class NnIndex {
 public:
  virtual ~NnIndex() = default;
  virtual void insert(const Config& q, VertexId id) = 0;
  virtual VertexId nearest(const Config& q) const = 0;
  virtual std::size_t size() const = 0;
};

class LinearNnIndex final : public NnIndex {
 public:
  void insert(const Config& q, VertexId id) override {
    if (!ids_seen_.insert(id).second) {
      throw std::invalid_argument("LinearNnIndex: duplicate vertex id");
    }
    points_.push_back(q);
    ids_.push_back(id);
  }

  VertexId nearest(const Config& q) const override {
    if (points_.empty()) throw std::logic_error("LinearNnIndex: index is empty");
    double best = detail::dist2(points_[0], q);
    VertexId best_id = ids_[0];
    for (std::size_t i = 1; i < points_.size(); ++i) {
      const double d = detail::dist2(points_[i], q);
      if (d < best || (d == best && ids_[i] < best_id)) {
        best = d;
        best_id = ids_[i];
      }
    }
    return best_id;
  }

  std::size_t size() const override { return points_.size(); }

 private:
  std::vector<Config> points_;
  std::vector<VertexId> ids_;
  std::unordered_set<VertexId> ids_seen_;
};

// Incremental kd-tree. Split axis cycles with depth; no rebalancing (tree
// vertices arrive roughly randomly, which keeps depth acceptable). Queries
// descend with a "<=" bound test so an equal-distance point with a lower id
// is never pruned away, keeping answers bit-identical to the linear scan.
class KdTreeNnIndex final : public NnIndex {
 public:
  void insert(const Config& q, VertexId id) override {
    if (!ids_seen_.insert(id).second) {
      throw std::invalid_argument("KdTreeNnIndex: duplicate vertex id");
    }
    nodes_.push_back(Node{q, id, -1, -1});
    const int added = static_cast<int>(nodes_.size()) - 1;
    if (added == 0) return;
    int cur = 0;
    std::size_t depth = 0;
    const std::size_t dims = q.size();
    for (;;) {
      const std::size_t axis = depth % dims;
      int& child = (q[axis] < nodes_[cur].point[axis]) ? nodes_[cur].left : nodes_[cur].right;
      if (child < 0) {
        child = added;
        return;
      }
      cur = child;
      ++depth;
    }
  }

  VertexId nearest(const Config& q) const override {
    if (nodes_.empty()) throw std::logic_error("KdTreeNnIndex: index is empty");
    double best = detail::dist2(nodes_[0].point, q);
    VertexId best_id = nodes_[0].id;
    search(0, 0, q, best, best_id);
    return best_id;
  }

  std::size_t size() const override { return nodes_.size(); }

 private:
  struct Node {
    Config point;
    VertexId id;
    int left;
    int right;
  };

  void search(int idx, std::size_t depth, const Config& q, double& best,
              VertexId& best_id) const {
    const Node& node = nodes_[idx];
    const double d = detail::dist2(node.point, q);
    if (d < best || (d == best && node.id < best_id)) {
      best = d;
      best_id = node.id;
    }
    const std::size_t axis = depth % q.size();
    const double gap = q[axis] - node.point[axis];
    const int near_child = gap < 0.0 ? node.left : node.right;
    const int far_child = gap < 0.0 ? node.right : node.left;
    if (near_child >= 0) search(near_child, depth + 1, q, best, best_id);
    if (far_child >= 0 && gap * gap <= best) search(far_child, depth + 1, q, best, best_id);
  }

  std::vector<Node> nodes_;
  std::unordered_set<VertexId> ids_seen_;
};

enum class NnBackend { kLinear, kKdTree };

inline std::unique_ptr<NnIndex> make_nn_index(NnBackend backend) {
  if (backend == NnBackend::kKdTree) return std::make_unique<KdTreeNnIndex>();
  return std::make_unique<LinearNnIndex>();
}

}  // namespace rrtplus
