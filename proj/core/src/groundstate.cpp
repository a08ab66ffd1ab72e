#include "bethe/groundstate.hpp"

#include <algorithm>
#include <limits>

namespace bethe {

namespace {

void require_positive(Coupling c) {
  if (!(c.j > 0.0)) throw std::invalid_argument("coupling j must be > 0");
}

void require_same_tree(const SpinConfig& a, const SpinConfig& b) {
  if (a.tree_ptr() != b.tree_ptr())
    throw std::invalid_argument("spin configurations live on different trees");
}

}  // namespace

SpinConfig::SpinConfig(std::shared_ptr<const Tree> tree, std::vector<std::int8_t> spins)
    : tree_(std::move(tree)), spins_(std::move(spins)) {
  if (!tree_) throw std::invalid_argument("SpinConfig requires a tree");
  if (spins_.size() != tree_->vertex_count())
    throw std::invalid_argument("spin assignment must be total");
  for (std::int8_t s : spins_)
    if (s != 1 && s != -1) throw std::invalid_argument("spins must be +1 or -1");
}

SpinConfig SpinConfig::negated() const {
  std::vector<std::int8_t> flipped(spins_.size());
  for (std::size_t i = 0; i < spins_.size(); ++i) flipped[i] = static_cast<std::int8_t>(-spins_[i]);
  return SpinConfig(tree_, std::move(flipped));
}

SpinConfig build_sigma(const EdgeSet& d, int root_sign) {
  if (root_sign != 1 && root_sign != -1) throw std::invalid_argument("root sign must be +1 or -1");
  const Tree& t = d.tree();
  std::vector<std::int8_t> spins(t.vertex_count());
  spins[Tree::root()] = static_cast<std::int8_t>(root_sign);
  for (VertexId v = 1; v < t.vertex_count(); ++v) {
    const std::int8_t up = spins[t.parent(v)];
    spins[v] = d.contains(t.parent_edge(v)) ? static_cast<std::int8_t>(-up) : up;
  }
  return SpinConfig(d.tree_ptr(), std::move(spins));
}

EdgeSet recover_d(const SpinConfig& sigma) {
  const Tree& t = sigma.tree();
  std::vector<EdgeId> frustrated;
  for (EdgeId e = 0; e < t.edge_count(); ++e)
    if (sigma.spin(t.edge_parent(e)) * sigma.spin(t.edge_child(e)) == -1)
      frustrated.push_back(e);
  return EdgeSet::from_edges(sigma.tree_ptr(), frustrated);
}

long long bond_sum(const SpinConfig& sigma) {
  const Tree& t = sigma.tree();
  long long sum = 0;
  for (EdgeId e = 0; e < t.edge_count(); ++e)
    sum += sigma.spin(t.edge_parent(e)) * sigma.spin(t.edge_child(e));
  return sum;
}

double hamiltonian(const SpinConfig& sigma, Coupling coupling) {
  require_positive(coupling);
  return -coupling.j * static_cast<double>(bond_sum(sigma));
}

SpinConfig flip_connected(const SpinConfig& sigma, std::span<const VertexId> c) {
  if (c.empty()) throw std::invalid_argument("flip set must be nonempty");
  const Tree& t = sigma.tree();
  std::vector<std::uint8_t> in_set(t.vertex_count(), 0);
  for (VertexId v : c) {
    if (v >= t.vertex_count()) throw std::invalid_argument("unknown vertex in flip set");
    in_set[v] = 1;
  }
  // connectivity: BFS inside the set from its first element
  std::vector<VertexId> stack{c.front()};
  std::vector<std::uint8_t> seen(t.vertex_count(), 0);
  seen[c.front()] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    for (VertexId w : t.neighbors(v)) {
      if (in_set[w] && !seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  std::size_t distinct = 0;
  for (std::size_t v = 0; v < in_set.size(); ++v) distinct += in_set[v];
  if (reached != distinct) throw std::invalid_argument("flip set is not connected");

  std::vector<std::int8_t> spins = sigma.spins();
  for (std::size_t v = 0; v < in_set.size(); ++v)
    if (in_set[v]) spins[v] = static_cast<std::int8_t>(-spins[v]);
  return SpinConfig(sigma.tree_ptr(), std::move(spins));
}

long long excess_units(const SpinConfig& sigma, const SpinConfig& reference) {
  require_same_tree(sigma, reference);
  const Tree& t = sigma.tree();
  const std::size_t inner = t.count_up_to(t.depth() - 1);
  for (VertexId v = static_cast<VertexId>(inner); v < t.vertex_count(); ++v)
    if (sigma.spin(v) != reference.spin(v))
      throw std::invalid_argument("configurations differ on the boundary generation");
  long long units = 0;
  for (EdgeId e = 0; e < t.edge_count(); ++e) {
    const VertexId u = t.edge_parent(e), w = t.edge_child(e);
    units += reference.spin(u) * reference.spin(w) - sigma.spin(u) * sigma.spin(w);
  }
  return units;
}

double excess_energy(const SpinConfig& sigma, const SpinConfig& reference, Coupling coupling) {
  require_positive(coupling);
  return coupling.j * static_cast<double>(excess_units(sigma, reference));
}

long long set_flip_units(const EdgeSet& d, std::span<const VertexId> flip_set) {
  const Tree& t = d.tree();
  // scratch marks, kept all-zero between calls; only touched entries are reset
  static thread_local std::vector<std::uint8_t> in_set;
  if (in_set.size() < t.vertex_count()) in_set.assign(t.vertex_count(), 0);
  for (VertexId v : flip_set) in_set[v] = 1;
  long long units = 0;
  for (VertexId v : flip_set) {
    if (v != Tree::root() && !in_set[t.parent(v)])
      units += d.contains(t.parent_edge(v)) ? -2 : 2;
    for (VertexId c : t.children(v))
      if (!in_set[c]) units += d.contains(t.parent_edge(c)) ? -2 : 2;
  }
  for (VertexId v : flip_set) in_set[v] = 0;
  return units;
}

GroundStateReport verify_ground_state(const EdgeSet& d, Coupling coupling, int m_max,
                                      const EnumLimits& limits) {
  require_positive(coupling);
  if (m_max < 1) throw std::invalid_argument("m_max must be >= 1");
  const Tree& t = d.tree();
  GroundStateReport report;
  report.m_max = m_max;
  report.admissible_d = admissible(d.d_max(), t.k());
  report.min_units = std::numeric_limits<long long>::max();

  std::vector<std::uint8_t> interior(t.vertex_count(), 0);
  const std::size_t inner = t.count_up_to(t.depth() - 1);
  for (std::size_t v = 0; v < inner; ++v) interior[v] = 1;

  report.sets_enumerated = for_each_connected_set(
      t, interior, m_max, limits, [&](std::span<const VertexId> c) {
        const long long units = set_flip_units(d, c);
        if (units < report.min_units) {
          report.min_units = units;
          report.argmin.assign(c.begin(), c.end());
        }
      });
  if (report.sets_enumerated == 0) {  // no interior: vacuous
    report.min_units = 0;
    report.all_positive = true;
    report.min_excess = 0.0;
    return report;
  }
  report.all_positive = report.min_units > 0;
  report.min_excess = coupling.j * static_cast<double>(report.min_units);
  return report;
}

StabilityCount stability_count(const EdgeSet& d, Coupling coupling, VertexId v, double e_cap,
                               int m_max, const EnumLimits& limits) {
  require_positive(coupling);
  if (!(e_cap > 0.0)) throw std::invalid_argument("e_cap must be > 0");
  if (m_max < 1) throw std::invalid_argument("m_max must be >= 1");
  const Tree& t = d.tree();
  if (t.generation(v) > t.depth() - m_max)
    throw std::invalid_argument(
        "vertex too close to the boundary: need generation(v) <= depth - m_max");

  std::vector<std::uint8_t> interior(t.vertex_count(), 0);
  const std::size_t inner = t.count_up_to(t.depth() - 1);
  for (std::size_t u = 0; u < inner; ++u) interior[u] = 1;

  StabilityCount out;
  for_each_connected_set_at(t, v, interior, m_max, limits, [&](std::span<const VertexId> c) {
    const double excess = coupling.j * static_cast<double>(set_flip_units(d, c));
    if (excess < e_cap) {
      ++out.count;
      if (static_cast<int>(c.size()) == m_max) out.truncated = true;
    }
  });
  return out;
}

}  // namespace bethe
