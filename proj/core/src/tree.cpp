#include "bethe/tree.hpp"

#include <algorithm>
#include <limits>

namespace bethe {

std::size_t ball_vertex_count(int k, int depth) {
  if (k < 1) throw std::invalid_argument("branching number k must be >= 1");
  if (depth < 0) throw std::invalid_argument("depth must be >= 0");
  unsigned long long total = 1, layer = static_cast<unsigned long long>(k) + 1;
  for (int g = 1; g <= depth; ++g) {
    if (total > std::numeric_limits<std::size_t>::max() - layer)
      throw ResourceLimitError("ball vertex count overflows size_t");
    total += layer;
    if (layer > std::numeric_limits<unsigned long long>::max() / static_cast<unsigned long long>(k))
      throw ResourceLimitError("ball vertex count overflows size_t");
    layer *= static_cast<unsigned long long>(k);
  }
  return static_cast<std::size_t>(total);
}

Tree::Tree(const TreeSpec& spec, std::size_t vertex_cap) : spec_(spec) {
  const std::size_t n = ball_vertex_count(spec.k, spec.depth);
  if (n > vertex_cap) {
    throw ResourceLimitError("ball of k=" + std::to_string(spec.k) + ", depth=" +
                             std::to_string(spec.depth) + " has " + std::to_string(n) +
                             " vertices, above the cap of " + std::to_string(vertex_cap));
  }

  layer_first_.resize(static_cast<std::size_t>(spec.depth) + 2);
  layer_first_[0] = 0;
  std::size_t layer = 1;
  for (int g = 0; g <= spec.depth; ++g) {
    layer_first_[static_cast<std::size_t>(g) + 1] = layer_first_[g] + layer;
    layer = (g == 0) ? static_cast<std::size_t>(spec.k) + 1
                     : layer * static_cast<std::size_t>(spec.k);
  }

  parent_.assign(n, kNoVertex);
  first_child_.assign(n, 0);
  child_count_.assign(n, 0);
  generation_.assign(n, 0);

  VertexId next = 1;
  for (VertexId v = 0; v < n; ++v) {
    const int g = generation_[v];
    first_child_[v] = next;
    if (g == spec.depth) continue;
    const int nc = (v == root()) ? spec.k + 1 : spec.k;
    child_count_[v] = nc;
    for (int i = 0; i < nc; ++i, ++next) {
      parent_[next] = v;
      generation_[next] = g + 1;
    }
  }
}

std::vector<VertexId> Tree::neighbors(VertexId v) const {
  check(v);
  std::vector<VertexId> out;
  out.reserve(static_cast<std::size_t>(degree(v)));
  if (v != root()) out.push_back(parent_[v]);
  for (VertexId c : children(v)) out.push_back(c);
  return out;
}

int Tree::graph_distance(VertexId u, VertexId v) const {
  check(u);
  check(v);
  int d = 0;
  while (generation_[u] > generation_[v]) { u = parent_[u]; ++d; }
  while (generation_[v] > generation_[u]) { v = parent_[v]; ++d; }
  while (u != v) { u = parent_[u]; v = parent_[v]; d += 2; }
  return d;
}

std::vector<int> Tree::address(VertexId v) const {
  check(v);
  std::vector<int> addr;
  addr.reserve(static_cast<std::size_t>(generation_[v]));
  while (v != root()) {
    const VertexId p = parent_[v];
    addr.push_back(static_cast<int>(v - first_child_[p]));
    v = p;
  }
  std::reverse(addr.begin(), addr.end());
  return addr;
}

std::optional<VertexId> Tree::vertex_at(std::span<const int> addr) const {
  VertexId v = root();
  for (int idx : addr) {
    if (idx < 0 || idx >= child_count_[v]) return std::nullopt;
    v = first_child_[v] + static_cast<VertexId>(idx);
  }
  return v;
}

std::size_t Tree::count_up_to(int g) const {
  if (g < 0) return 0;
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(g) + 1, layer_first_.size() - 1);
  return layer_first_[i];
}

std::shared_ptr<const Tree> build_ball(const TreeSpec& spec, std::size_t vertex_cap) {
  return std::make_shared<const Tree>(spec, vertex_cap);
}

}  // namespace bethe
