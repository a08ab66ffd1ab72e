#include "bethe/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "bethe/rng.hpp"

namespace bethe {

std::vector<VertexId> incorrect_sites(const SpinConfig& sigma, const SpinConfig& reference) {
  if (sigma.tree_ptr() != reference.tree_ptr())
    throw std::invalid_argument("configurations live on different trees");
  std::vector<VertexId> out;
  for (VertexId v = 0; v < sigma.tree().vertex_count(); ++v)
    if (sigma.spin(v) != reference.spin(v)) out.push_back(v);
  return out;
}

Contour contour_from_interior(const Tree& t, std::span<const VertexId> interior) {
  if (interior.empty()) throw std::invalid_argument("contour interior must be nonempty");
  Contour g;
  g.interior.assign(interior.begin(), interior.end());
  std::sort(g.interior.begin(), g.interior.end());
  std::vector<std::uint8_t> in(t.vertex_count(), 0);
  for (VertexId v : g.interior) {
    if (v >= t.vertex_count()) throw std::invalid_argument("unknown vertex in contour interior");
    in[v] = 1;
  }

  std::vector<VertexId> stack{g.interior.front()};
  std::vector<std::uint8_t> seen(t.vertex_count(), 0);
  seen[stack.front()] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    for (VertexId w : t.neighbors(v))
      if (in[w] && !seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
  }
  if (reached != g.interior.size())
    throw std::invalid_argument("contour interior is not connected");

  std::set<VertexId> boundary;
  std::set<EdgeId> edges;
  for (VertexId v : g.interior) {
    for (VertexId w : t.neighbors(v)) {
      const EdgeId e = (w == t.parent(v)) ? t.parent_edge(v) : t.parent_edge(w);
      edges.insert(e);
      if (!in[w]) boundary.insert(w);
    }
  }
  g.external_boundary.assign(boundary.begin(), boundary.end());
  g.edges.assign(edges.begin(), edges.end());
  return g;
}

std::vector<Contour> extract_contours(const SpinConfig& sigma, const SpinConfig& reference) {
  const Tree& t = sigma.tree();
  const std::vector<VertexId> bad = incorrect_sites(sigma, reference);
  for (VertexId v : bad)
    if (t.is_boundary(v))
      throw std::invalid_argument("disagreement set touches the boundary generation");

  std::vector<std::uint8_t> in(t.vertex_count(), 0), seen(t.vertex_count(), 0);
  for (VertexId v : bad) in[v] = 1;

  std::vector<Contour> out;
  for (VertexId v : bad) {
    if (seen[v]) continue;
    std::vector<VertexId> comp, stack{v};
    seen[v] = 1;
    while (!stack.empty()) {
      const VertexId u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (VertexId w : t.neighbors(u))
        if (in[w] && !seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
    out.push_back(contour_from_interior(t, comp));
  }
  return out;
}

double contour_weight(const Contour& contour, const EdgeSet& d, Coupling coupling, double beta) {
  if (!(coupling.j > 0.0)) throw std::invalid_argument("coupling j must be > 0");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  const long long units = set_flip_units(d, contour.interior);
  return std::exp(-beta * coupling.j * static_cast<double>(units));
}

PeierlsReport verify_peierls(const EdgeSet& d, Coupling coupling, int m_max,
                             const EnumLimits& limits) {
  if (!(coupling.j > 0.0)) throw std::invalid_argument("coupling j must be > 0");
  if (m_max < 1) throw std::invalid_argument("m_max must be >= 1");
  const Tree& t = d.tree();

  PeierlsReport report;
  report.m_max = m_max;
  report.admissible_d = admissible(d.d_max(), t.k());
  report.bound_units_per_site = 2LL * ((t.k() + 1) - 2 * (d.d_max() + 1));
  report.degenerate = report.bound_units_per_site <= 0;
  report.min_slack_units = std::numeric_limits<long long>::max();

  std::vector<std::uint8_t> interior(t.vertex_count(), 0);
  const std::size_t inner = t.count_up_to(t.depth() - 1);
  for (std::size_t v = 0; v < inner; ++v) interior[v] = 1;

  report.contours_enumerated = for_each_connected_set(
      t, interior, m_max, limits, [&](std::span<const VertexId> c) {
        const long long slack = set_flip_units(d, c) -
                                report.bound_units_per_site * static_cast<long long>(c.size());
        if (slack < report.min_slack_units) {
          report.min_slack_units = slack;
          report.tightest.assign(c.begin(), c.end());
        }
      });
  if (report.contours_enumerated == 0) {
    report.min_slack_units = 0;
    report.holds = true;
    return report;
  }
  report.holds = report.min_slack_units >= 0;
  return report;
}

InductionStepReport induction_step_check(const EdgeSet& d, Coupling coupling, int samples,
                                         std::uint64_t seed, int max_interior) {
  if (!(coupling.j > 0.0)) throw std::invalid_argument("coupling j must be > 0");
  if (samples < 1 || max_interior < 1) throw std::invalid_argument("samples, max_interior >= 1");
  const Tree& t = d.tree();
  const std::size_t inner = t.count_up_to(t.depth() - 1);
  if (inner == 0) throw std::invalid_argument("tree has no interior");

  InductionStepReport report;
  report.samples = samples;
  report.required_drop_units = 2LL * ((t.k() + 1) - 2 * (d.d_max() + 1));
  report.min_drop_units = std::numeric_limits<long long>::max();

  const SpinConfig reference = build_sigma(d, +1);
  std::vector<std::uint8_t> in(t.vertex_count(), 0);

  for (int s = 0; s < samples; ++s) {
    SplitMix64 rng(splitmix64_at(seed, static_cast<std::uint64_t>(s)));
    // grow a random connected interior set
    std::vector<VertexId> members{static_cast<VertexId>(rng.next_below(inner))};
    const auto target = 1 + rng.next_below(static_cast<std::uint64_t>(max_interior));
    for (VertexId v : members) in[v] = 1;
    while (members.size() < target) {
      std::vector<VertexId> frontier;
      for (VertexId v : members)
        for (VertexId w : t.neighbors(v))
          if (!in[w] && w < inner) frontier.push_back(w);
      if (frontier.empty()) break;
      const VertexId w = frontier[rng.next_below(frontier.size())];
      in[w] = 1;
      members.push_back(w);
    }
    for (VertexId v : members) in[v] = 0;

    const SpinConfig sigma_contour = flip_connected(reference, members);
    const long long base_units = excess_units(sigma_contour, reference);

    std::vector<std::uint8_t> member_mask(t.vertex_count(), 0);
    for (VertexId v : members) member_mask[v] = 1;

    for (VertexId x : members) {
      bool offspring_outside = true;
      for (VertexId c : t.children(x)) offspring_outside = offspring_outside && !member_mask[c];
      if (!offspring_outside) continue;
      ++report.checks;

      const SpinConfig flipped = flip_connected(sigma_contour, std::vector<VertexId>{x});
      const auto contours = extract_contours(flipped, reference);
      if (members.size() == 1) {
        if (!contours.empty()) {
          report.failures.push_back("flip of singleton interior did not recover the reference");
          continue;
        }
      } else {
        std::vector<VertexId> expect;
        for (VertexId v : members)
          if (v != x) expect.push_back(v);
        std::sort(expect.begin(), expect.end());
        if (contours.size() != 1 || contours[0].interior != expect) {
          report.failures.push_back("flip at site " + std::to_string(x) +
                                    " did not shrink the contour by that site");
          continue;
        }
      }
      const long long rest_units = contours.empty() ? 0 : excess_units(flipped, reference);
      const long long drop = base_units - rest_units;
      report.min_drop_units = std::min(report.min_drop_units, drop);
      if (drop < report.required_drop_units)
        report.failures.push_back("drop " + std::to_string(drop) + " below bound " +
                                  std::to_string(report.required_drop_units) + " at site " +
                                  std::to_string(x));
    }
  }
  if (report.checks == 0) report.min_drop_units = 0;
  report.all_pass = report.failures.empty();
  return report;
}

namespace {

// [x^n] prod over children (1 + x * P_child), rooted at v; truncated convolution
std::vector<std::uint64_t> subtree_poly(const Tree& t, VertexId u, VertexId prev, int n) {
  std::vector<std::uint64_t> poly(static_cast<std::size_t>(std::max(n, 0)) + 1, 0);
  poly[0] = 1;
  if (n <= 0) return poly;
  for (VertexId w : t.neighbors(u)) {
    if (w == prev) continue;
    const std::vector<std::uint64_t> child = subtree_poly(t, w, u, n - 1);
    std::vector<std::uint64_t> next(poly);
    for (int a = 0; a + 1 <= n; ++a) {
      if (poly[a] == 0) continue;
      for (int b = 0; a + 1 + b <= n && b < static_cast<int>(child.size()); ++b)
        next[a + 1 + b] += poly[a] * child[b];
    }
    poly.swap(next);
  }
  return poly;
}

}  // namespace

std::uint64_t count_connected_edge_subgraphs(const Tree& t, VertexId v, int n_edges) {
  if (n_edges < 0) throw std::invalid_argument("edge count must be >= 0");
  if (n_edges == 0) return 1;
  if (t.boundary_distance(v) < n_edges)
    throw std::invalid_argument("need boundary_distance(v) >= n so every subgraph fits the ball");
  subgraph_count_bound(t.k(), n_edges);  // reject grids whose certificate would overflow
  return subtree_poly(t, v, kNoVertex, n_edges)[static_cast<std::size_t>(n_edges)];
}

std::uint64_t subgraph_count_bound(int k, int n_edges) {
  std::uint64_t out = 1;
  const auto base = static_cast<std::uint64_t>(k) + 1;
  for (int i = 0; i < 2 * n_edges; ++i) {
    if (out > std::numeric_limits<std::uint64_t>::max() / base)
      throw ResourceLimitError("subgraph count bound overflows 64 bits");
    out *= base;
  }
  return out;
}

}  // namespace bethe
