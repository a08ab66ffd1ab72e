#pragma once

#include <span>
#include <vector>

#include "bethe/tree.hpp"

namespace bethe {

struct EnumLimits {
  std::size_t max_sets = 2'000'000;
};

namespace detail {

// Binary-partition enumeration over a candidate queue: each connected
// superset of the current members corresponds to a unique include/exclude
// path, so every set is visited exactly once, in a fixed order.
template <typename Visit>
class ConnectedSetEnum {
 public:
  ConnectedSetEnum(const Tree& tree, std::span<const std::uint8_t> allowed, int max_size,
                   const EnumLimits& limits, Visit& visit)
      : tree_(tree), allowed_(allowed), max_size_(max_size), limits_(limits), visit_(visit) {
    state_.assign(tree.vertex_count(), kFresh);
  }

  void run_anchored(VertexId anchor) {
    members_.clear();
    queue_.clear();
    take(anchor);
    recurse(0);
    state_[anchor] = kFresh;
    members_.pop_back();
    for (VertexId w : queue_) state_[w] = kFresh;
    queue_.clear();
  }

  std::size_t visited() const { return visited_; }

 private:
  static constexpr std::uint8_t kFresh = 0, kQueued = 1, kMember = 2, kExcluded = 3;

  void take(VertexId v) {
    members_.push_back(v);
    state_[v] = kMember;
    emit();
    if (static_cast<int>(members_.size()) < max_size_) {
      if (v != Tree::root()) enqueue(tree_.parent(v));
      for (VertexId c : tree_.children(v)) enqueue(c);
    }
  }

  void enqueue(VertexId w) {
    if (state_[w] == kFresh && allowed_[w]) {
      state_[w] = kQueued;
      queue_.push_back(w);
    }
  }

  void emit() {
    if (++visited_ > limits_.max_sets)
      throw ResourceLimitError("connected-set enumeration exceeded " +
                               std::to_string(limits_.max_sets) + " sets");
    visit_(std::span<const VertexId>(members_));
  }

  void recurse(std::size_t qpos) {
    if (qpos == queue_.size()) return;
    const VertexId u = queue_[qpos];
    // exclude u on this branch
    state_[u] = kExcluded;
    recurse(qpos + 1);
    state_[u] = kQueued;
    // include u
    if (static_cast<int>(members_.size()) < max_size_) {
      const std::size_t qlen = queue_.size();
      take(u);
      recurse(qpos + 1);
      for (std::size_t i = qlen; i < queue_.size(); ++i) state_[queue_[i]] = kFresh;
      queue_.resize(qlen);
      members_.pop_back();
      state_[u] = kQueued;
    }
  }

  const Tree& tree_;
  std::span<const std::uint8_t> allowed_;
  int max_size_;
  EnumLimits limits_;
  Visit& visit_;
  std::vector<std::uint8_t> state_;
  std::vector<VertexId> members_;
  std::vector<VertexId> queue_;
  std::size_t visited_ = 0;
};

}  // namespace detail

// Visits every connected vertex set S with anchor ∈ S, |S| <= max_size and
// S ⊆ {v : allowed[v] != 0}, exactly once.  Throws ResourceLimitError past
// limits.max_sets visited sets.
template <typename Visit>
std::size_t for_each_connected_set_at(const Tree& tree, VertexId anchor,
                                      std::span<const std::uint8_t> allowed, int max_size,
                                      const EnumLimits& limits, Visit&& visit) {
  if (max_size < 1 || !allowed[anchor]) return 0;
  detail::ConnectedSetEnum<Visit> e(tree, allowed, max_size, limits, visit);
  e.run_anchored(anchor);
  return e.visited();
}

// Visits every connected vertex set S ⊆ {allowed} with |S| <= max_size
// exactly once (canonical anchor: the minimal id in S).
template <typename Visit>
std::size_t for_each_connected_set(const Tree& tree, std::span<const std::uint8_t> allowed,
                                   int max_size, const EnumLimits& limits, Visit&& visit) {
  if (max_size < 1) return 0;
  std::vector<std::uint8_t> mask(allowed.begin(), allowed.end());
  std::size_t total = 0;
  detail::ConnectedSetEnum<Visit> e(tree, mask, max_size, limits, visit);
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    if (!mask[v]) continue;
    e.run_anchored(v);
    mask[v] = 0;  // later anchors may not reuse v: forces min-id canonicity
  }
  total = e.visited();
  return total;
}

}  // namespace bethe
