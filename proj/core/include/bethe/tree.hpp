#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace bethe {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr VertexId kNoVertex = 0xffffffffu;
inline constexpr std::size_t kDefaultVertexCap = 10'000'000;

// Thrown when a computation would exceed a configured resource guard
// (vertex caps, enumeration caps).  Distinct from domain errors.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TreeSpec {
  int k = 2;      // branching number; every vertex of the infinite tree has k+1 neighbors
  int depth = 0;  // ball radius around the root
};

// Vertices of the ball of radius `depth`; throws ResourceLimitError on overflow.
std::size_t ball_vertex_count(int k, int depth);

// Finite ball of radius `depth` around the root of the (k+1)-regular tree.
//
// Vertices are dense breadth-first ids; 0 is the root and the children of a
// vertex occupy a contiguous id range, so generation g is the id interval
// [count_up_to(g-1), count_up_to(g)).  Edge e joins edge_parent(e) and
// edge_child(e) == e+1.  Immutable after construction.
class Tree {
 public:
  Tree(const TreeSpec& spec, std::size_t vertex_cap = kDefaultVertexCap);

  int k() const { return spec_.k; }
  int depth() const { return spec_.depth; }
  const TreeSpec& spec() const { return spec_; }

  std::size_t vertex_count() const { return parent_.size(); }
  std::size_t edge_count() const { return parent_.size() - 1; }
  static constexpr VertexId root() { return 0; }

  int generation(VertexId v) const { check(v); return generation_[v]; }
  VertexId parent(VertexId v) const { check(v); return parent_[v]; }
  VertexId first_child(VertexId v) const { check(v); return first_child_[v]; }
  int child_count(VertexId v) const { check(v); return child_count_[v]; }

  struct ChildRange {
    VertexId lo, hi;
    struct iterator {
      VertexId v;
      VertexId operator*() const { return v; }
      iterator& operator++() { ++v; return *this; }
      bool operator!=(const iterator& o) const { return v != o.v; }
    };
    iterator begin() const { return {lo}; }
    iterator end() const { return {hi}; }
    std::size_t size() const { return hi - lo; }
    bool empty() const { return lo == hi; }
  };
  ChildRange children(VertexId v) const {
    check(v);
    return {first_child_[v], first_child_[v] + static_cast<VertexId>(child_count_[v])};
  }

  int degree(VertexId v) const { check(v); return child_count_[v] + (v == root() ? 0 : 1); }
  bool is_boundary(VertexId v) const { return generation(v) == spec_.depth; }
  bool is_interior(VertexId v) const { return generation(v) < spec_.depth; }
  int boundary_distance(VertexId v) const { return spec_.depth - generation(v); }

  // Parent first (if any), then children in address order.
  std::vector<VertexId> neighbors(VertexId v) const;

  // Length of the unique path between u and v.
  int graph_distance(VertexId u, VertexId v) const;

  VertexId edge_child(EdgeId e) const { check_edge(e); return e + 1; }
  VertexId edge_parent(EdgeId e) const { check_edge(e); return parent_[e + 1]; }
  EdgeId parent_edge(VertexId v) const {
    check(v);
    if (v == root()) throw std::invalid_argument("root has no parent edge");
    return v - 1;
  }

  // Child-index path from the root (root's children 0..k, others 0..k-1).
  std::vector<int> address(VertexId v) const;
  std::optional<VertexId> vertex_at(std::span<const int> addr) const;

  // Number of vertices with generation <= g; they are exactly ids [0, count).
  std::size_t count_up_to(int g) const;

 private:
  void check(VertexId v) const {
    if (v >= parent_.size()) throw std::invalid_argument("unknown vertex id");
  }
  void check_edge(EdgeId e) const {
    if (static_cast<std::size_t>(e) >= edge_count()) throw std::invalid_argument("unknown edge id");
  }

  TreeSpec spec_;
  std::vector<VertexId> parent_;
  std::vector<VertexId> first_child_;
  std::vector<std::int32_t> child_count_;
  std::vector<std::int32_t> generation_;
  std::vector<std::size_t> layer_first_;  // layer_first_[g] = first id of generation g; size depth+2
};

std::shared_ptr<const Tree> build_ball(const TreeSpec& spec,
                                       std::size_t vertex_cap = kDefaultVertexCap);

}  // namespace bethe
