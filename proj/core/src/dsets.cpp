#include "bethe/dsets.hpp"

#include <algorithm>
#include <array>

#include "bethe/rng.hpp"

namespace bethe {

namespace {

constexpr EdgeId kNoEdge = 0xffffffffu;

std::uint64_t pick_below(std::uint64_t seed, std::uint64_t stream, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(splitmix64_at(seed, stream)) * n) >> 64);
}

}  // namespace

const char* cover_kind_name(CoverKind kind) {
  switch (kind) {
    case CoverKind::kEmpty: return "empty";
    case CoverKind::kSingleBond: return "single-bond";
    case CoverKind::kFiniteSet: return "finite-set";
    case CoverKind::kDimer: return "dimer";
    case CoverKind::kSecondaryDimer: return "secondary-dimer";
    case CoverKind::kMonomerDimer: return "monomer-dimer";
    case CoverKind::kPathCover: return "path-cover";
    case CoverKind::kRandomSparse: return "random-sparse";
  }
  return "?";
}

std::optional<CoverKind> cover_kind_from_name(std::string_view name) {
  static constexpr std::array<CoverKind, 8> kinds = {
      CoverKind::kEmpty,        CoverKind::kSingleBond,   CoverKind::kFiniteSet,
      CoverKind::kDimer,        CoverKind::kSecondaryDimer, CoverKind::kMonomerDimer,
      CoverKind::kPathCover,    CoverKind::kRandomSparse};
  for (CoverKind k : kinds)
    if (name == cover_kind_name(k)) return k;
  return std::nullopt;
}

EdgeSet::EdgeSet(std::shared_ptr<const Tree> tree, CoverKind kind, std::uint64_t seed)
    : tree_(std::move(tree)), kind_(kind), seed_(seed) {
  if (!tree_) throw std::invalid_argument("EdgeSet requires a tree");
  member_.assign(tree_->edge_count(), 0);
  degree_.assign(tree_->vertex_count(), 0);
}

void EdgeSet::insert(EdgeId e) {
  if (static_cast<std::size_t>(e) >= member_.size()) throw std::invalid_argument("unknown edge id");
  if (member_[e]) return;
  member_[e] = 1;
  ++size_;
  for (VertexId v : {tree_->edge_parent(e), tree_->edge_child(e)}) {
    ++degree_[v];
    if (degree_[v] > d_max_) d_max_ = degree_[v];
  }
}

EdgeSet EdgeSet::empty(std::shared_ptr<const Tree> tree) {
  return EdgeSet(std::move(tree), CoverKind::kEmpty, 0);
}

EdgeSet EdgeSet::single_bond(std::shared_ptr<const Tree> tree, EdgeId e) {
  EdgeSet d(std::move(tree), CoverKind::kSingleBond, 0);
  d.insert(e);
  return d;
}

EdgeSet EdgeSet::from_edges(std::shared_ptr<const Tree> tree, std::span<const EdgeId> edges,
                            CoverKind kind, std::uint64_t seed) {
  EdgeSet d(std::move(tree), kind, seed);
  for (EdgeId e : edges) d.insert(e);
  return d;
}

std::vector<EdgeId> EdgeSet::edges() const {
  std::vector<EdgeId> out;
  out.reserve(size_);
  for (EdgeId e = 0; e < member_.size(); ++e)
    if (member_[e]) out.push_back(e);
  return out;
}

std::vector<std::uint16_t> EdgeSet::recompute_degree_profile() const {
  std::vector<std::uint16_t> deg(tree_->vertex_count(), 0);
  for (EdgeId e = 0; e < member_.size(); ++e) {
    if (!member_[e]) continue;
    ++deg[tree_->edge_parent(e)];
    ++deg[tree_->edge_child(e)];
  }
  return deg;
}

bool admissible(int d_max, int k) {
  if (d_max < 0 || k < 1) throw std::invalid_argument("admissible: d_max >= 0, k >= 1");
  return 2 * d_max < k - 1;
}

EdgeSet gen_dimer_cover(std::shared_ptr<const Tree> tree, std::uint64_t seed) {
  if (tree->depth() < 1) throw std::invalid_argument("dimer cover needs depth >= 1");
  EdgeSet d(tree, CoverKind::kDimer, seed);
  std::vector<std::uint8_t> matched(tree->vertex_count(), 0);
  // Root-to-leaf greedy: an unmatched vertex claims a seeded child.  Its
  // children are untouched when it is processed, so every interior vertex
  // ends up covered exactly once.
  const std::size_t interior = tree->count_up_to(tree->depth() - 1);
  for (VertexId v = 0; v < interior; ++v) {
    if (matched[v]) continue;
    const auto nc = static_cast<std::uint64_t>(tree->child_count(v));
    const VertexId c = tree->first_child(v) + static_cast<VertexId>(pick_below(seed, v, nc));
    d.insert(tree->parent_edge(c));
    matched[v] = matched[c] = 1;
  }
  return d;
}

EdgeSet gen_secondary_dimer(std::shared_ptr<const Tree> tree, const EdgeSet& primary,
                            std::uint64_t seed) {
  if (primary.tree_ptr() != tree)
    throw std::invalid_argument("secondary dimer: primary must live on the same tree");
  EdgeSet out(tree, CoverKind::kSecondaryDimer, seed);

  std::vector<EdgeId> dimer_of(tree->vertex_count(), kNoEdge);
  const std::vector<EdgeId> dimers = primary.edges();
  for (EdgeId e : dimers) {
    dimer_of[tree->edge_parent(e)] = e;
    dimer_of[tree->edge_child(e)] = e;
  }

  std::vector<std::uint8_t> served(tree->edge_count(), 0);
  // Dimers in edge-id order are ordered by their upper endpoint, so a dimer's
  // sub-dimers are always still unserved when it is reached.
  for (EdgeId x : dimers) {
    if (served[x]) continue;
    const VertexId ends[2] = {tree->edge_parent(x), tree->edge_child(x)};
    std::vector<std::pair<EdgeId, EdgeId>> cands;  // (connecting tree edge, other dimer)
    for (VertexId w : ends) {
      for (VertexId c : tree->children(w)) {
        if (c == ends[1]) continue;
        const EdgeId link = tree->parent_edge(c);
        if (primary.contains(link)) continue;
        const EdgeId y = dimer_of[c];
        if (y == kNoEdge || served[y]) continue;
        cands.emplace_back(link, y);
      }
    }
    if (cands.empty()) {
      const bool interior = tree->is_interior(ends[0]) && tree->is_interior(ends[1]);
      if (interior)
        throw SecondaryDimerError(
            "no unserved neighbor dimer available for interior dimer edge " + std::to_string(x),
            x);
      continue;
    }
    const auto& [link, y] = cands[pick_below(seed, x, cands.size())];
    out.insert(link);
    served[x] = served[y] = 1;
  }
  return out;
}

EdgeSet gen_monomer_dimer(std::shared_ptr<const Tree> tree, std::uint64_t seed) {
  if (tree->depth() < 3) throw std::invalid_argument("monomer-dimer cover needs depth >= 3");
  EdgeSet d(tree, CoverKind::kMonomerDimer, seed);
  std::vector<std::uint8_t> endpoint(tree->vertex_count(), 0);

  const auto place = [&](VertexId v) {
    const auto nc = static_cast<std::uint64_t>(tree->child_count(v));
    const VertexId c = tree->first_child(v) + static_cast<VertexId>(pick_below(seed, v, nc));
    d.insert(tree->parent_edge(c));
    endpoint[v] = endpoint[c] = 1;
  };

  // Bonds hang below every third generation; spacing >= 2 and coverage of
  // all interior vertices except possibly the deepest interior layer follow
  // from the generation arithmetic.
  for (VertexId v = 0; v < tree->vertex_count(); ++v)
    if (tree->generation(v) % 3 == 0 && tree->child_count(v) > 0) place(v);

  // Deepest interior layer: cover stragglers with a bond into the boundary.
  const std::size_t lo = tree->count_up_to(tree->depth() - 2);
  const std::size_t hi = tree->count_up_to(tree->depth() - 1);
  for (VertexId v = static_cast<VertexId>(lo); v < hi; ++v) {
    bool covered = endpoint[v] || endpoint[tree->parent(v)];
    if (!covered)
      for (VertexId c : tree->children(v)) covered = covered || endpoint[c];
    if (!covered) place(v);
  }
  return d;
}

EdgeSet gen_path_cover(std::shared_ptr<const Tree> tree, std::uint64_t seed) {
  if (tree->k() < 2) throw std::invalid_argument("path cover needs k >= 2");
  if (tree->depth() < 1) throw std::invalid_argument("path cover needs depth >= 1");
  EdgeSet d(tree, CoverKind::kPathCover, seed);
  const std::size_t interior = tree->count_up_to(tree->depth() - 1);
  for (VertexId v = 0; v < interior; ++v) {
    const bool parent_in = v != Tree::root() && d.contains(tree->parent_edge(v));
    const int need = parent_in ? 1 : 2;  // continue the path, or open a new one at v
    const auto nc = static_cast<std::uint64_t>(tree->child_count(v));
    SplitMix64 rng(splitmix64_at(seed, v));
    std::uint64_t a = rng.next_below(nc);
    d.insert(tree->parent_edge(tree->first_child(v) + static_cast<VertexId>(a)));
    if (need == 2) {
      std::uint64_t b = rng.next_below(nc - 1);
      if (b >= a) ++b;
      d.insert(tree->parent_edge(tree->first_child(v) + static_cast<VertexId>(b)));
    }
  }
  return d;
}

EdgeSet gen_random_sparse(std::shared_ptr<const Tree> tree, int d_cap, double density,
                          std::uint64_t seed) {
  if (d_cap < 0) throw std::invalid_argument("d_cap must be >= 0");
  if (!(density >= 0.0 && density <= 1.0)) throw std::invalid_argument("density must be in [0,1]");
  EdgeSet d(tree, CoverKind::kRandomSparse, seed);
  if (d_cap == 0) return d;
  for (EdgeId e = 0; e < tree->edge_count(); ++e) {
    const double u = static_cast<double>(splitmix64_at(seed, e) >> 11) * 0x1.0p-53;
    if (u >= density) continue;
    if (d.degree(tree->edge_parent(e)) >= d_cap || d.degree(tree->edge_child(e)) >= d_cap)
      continue;
    d.insert(e);
  }
  return d;
}

namespace {

bool interior_edge(const Tree& t, EdgeId e) {
  return t.is_interior(t.edge_parent(e)) && t.is_interior(t.edge_child(e));
}

void finish(ValidationCheck& c) {
  c.pass = c.bad_vertices.empty() && c.bad_edges.empty();
}

ValidationCheck check_size(const EdgeSet& d, const char* name, std::size_t want) {
  ValidationCheck c{name, d.size() == want, {}, {}};
  if (!c.pass)
    for (EdgeId e : d.edges()) c.bad_edges.push_back(e);
  return c;
}

ValidationCheck check_matching(const EdgeSet& d) {
  ValidationCheck c{"pairwise-disjoint-bonds", true, {}, {}};
  for (VertexId v = 0; v < d.tree().vertex_count(); ++v)
    if (d.degree(v) > 1) c.bad_vertices.push_back(v);
  finish(c);
  return c;
}

ValidationCheck check_interior_degree(const EdgeSet& d, const char* name, int want) {
  ValidationCheck c{name, true, {}, {}};
  const Tree& t = d.tree();
  const std::size_t interior = t.count_up_to(t.depth() - 1);
  for (VertexId v = 0; v < interior; ++v)
    if (d.degree(v) != want) c.bad_vertices.push_back(v);
  finish(c);
  return c;
}

ValidationCheck check_degree_cap(const EdgeSet& d, const char* name, int cap) {
  ValidationCheck c{name, true, {}, {}};
  for (VertexId v = 0; v < d.tree().vertex_count(); ++v)
    if (d.degree(v) > cap) c.bad_vertices.push_back(v);
  finish(c);
  return c;
}

// bond-to-bond distance >= 2: no vertex in two bonds, no tree edge joining
// endpoints of two different bonds
ValidationCheck check_bond_spacing(const EdgeSet& d) {
  ValidationCheck c{"bond-distance-at-least-2", true, {}, {}};
  const Tree& t = d.tree();
  for (VertexId v = 0; v < t.vertex_count(); ++v)
    if (d.degree(v) > 1) c.bad_vertices.push_back(v);
  std::vector<EdgeId> bond_at(t.vertex_count(), kNoEdge);
  for (EdgeId e : d.edges()) {
    bond_at[t.edge_parent(e)] = e;
    bond_at[t.edge_child(e)] = e;
  }
  for (EdgeId e = 0; e < t.edge_count(); ++e) {
    const EdgeId a = bond_at[t.edge_parent(e)];
    const EdgeId b = bond_at[t.edge_child(e)];
    if (a != kNoEdge && b != kNoEdge && a != b) c.bad_edges.push_back(e);
  }
  finish(c);
  return c;
}

ValidationCheck check_domination(const EdgeSet& d) {
  ValidationCheck c{"interior-within-distance-1", true, {}, {}};
  const Tree& t = d.tree();
  std::vector<std::uint8_t> endpoint(t.vertex_count(), 0);
  for (EdgeId e : d.edges()) {
    endpoint[t.edge_parent(e)] = 1;
    endpoint[t.edge_child(e)] = 1;
  }
  const std::size_t interior = t.count_up_to(t.depth() - 1);
  for (VertexId v = 0; v < interior; ++v) {
    bool ok = endpoint[v] || (v != Tree::root() && endpoint[t.parent(v)]);
    if (!ok)
      for (VertexId ch : t.children(v)) ok = ok || endpoint[ch];
    if (!ok) c.bad_vertices.push_back(v);
  }
  finish(c);
  return c;
}

}  // namespace

ValidationReport validate_cover(const EdgeSet& d, CoverKind kind, const EdgeSet* primary) {
  ValidationReport report{kind, true, {}};
  const Tree& t = d.tree();
  switch (kind) {
    case CoverKind::kEmpty:
      report.checks.push_back(check_size(d, "no-members", 0));
      break;
    case CoverKind::kSingleBond:
      report.checks.push_back(check_size(d, "exactly-one-member", 1));
      break;
    case CoverKind::kFiniteSet:
      report.checks.push_back({"finite-member-set", true, {}, {}});
      break;
    case CoverKind::kDimer:
      report.checks.push_back(check_interior_degree(d, "interior-covered-once", 1));
      report.checks.push_back(check_matching(d));
      break;
    case CoverKind::kSecondaryDimer: {
      if (primary == nullptr) {
        report.checks.push_back({"primary-dimer-cover-available", false, {}, {}});
        break;
      }
      ValidationCheck dj{"disjoint-from-primary", true, {}, {}};
      for (EdgeId e : d.edges())
        if (primary->contains(e)) dj.bad_edges.push_back(e);
      finish(dj);
      report.checks.push_back(std::move(dj));

      ValidationCheck two{"member-joins-two-dimers", true, {}, {}};
      for (EdgeId e : d.edges()) {
        if (!interior_edge(t, e)) continue;
        const VertexId u = t.edge_parent(e), v = t.edge_child(e);
        if (primary->degree(u) != 1 || primary->degree(v) != 1) two.bad_edges.push_back(e);
      }
      finish(two);
      report.checks.push_back(std::move(two));

      ValidationCheck once{"dimer-served-once", true, {}, {}};
      for (EdgeId x : primary->edges()) {
        if (!interior_edge(t, x)) continue;
        int touches = 0;
        for (VertexId w : {t.edge_parent(x), t.edge_child(x)}) {
          if (w != Tree::root() && t.parent_edge(w) != x && d.contains(t.parent_edge(w)))
            ++touches;
          for (VertexId c : t.children(w))
            if (t.parent_edge(c) != x && d.contains(t.parent_edge(c))) ++touches;
        }
        if (touches != 1) once.bad_edges.push_back(x);
      }
      finish(once);
      report.checks.push_back(std::move(once));

      ValidationCheck disj{"members-vertex-disjoint", true, {}, {}};
      const std::size_t interior = t.count_up_to(t.depth() - 1);
      for (VertexId v = 0; v < interior; ++v)
        if (d.degree(v) > 1) disj.bad_vertices.push_back(v);
      finish(disj);
      report.checks.push_back(std::move(disj));
      break;
    }
    case CoverKind::kMonomerDimer:
      report.checks.push_back(check_bond_spacing(d));
      report.checks.push_back(check_domination(d));
      report.checks.push_back(check_degree_cap(d, "max-incidence-1", 1));
      break;
    case CoverKind::kPathCover:
      report.checks.push_back(check_interior_degree(d, "interior-degree-exactly-2", 2));
      report.checks.push_back(check_degree_cap(d, "max-incidence-2", 2));
      break;
    case CoverKind::kRandomSparse:
      report.checks.push_back({"no-intrinsic-predicate", true, {}, {}});
      break;
  }
  for (const ValidationCheck& c : report.checks) report.pass = report.pass && c.pass;
  return report;
}

namespace {

std::string pattern_rec(const EdgeSet& d, const Tree& t, VertexId u, VertexId prev, int radius) {
  if (radius == 0) return ".";
  std::vector<std::string> parts;
  for (VertexId w : t.neighbors(u)) {
    if (w == prev) continue;
    EdgeId e = (w == t.parent(u) && u != Tree::root()) ? t.parent_edge(u) : t.parent_edge(w);
    parts.push_back((d.contains(e) ? "1" : "0") + pattern_rec(d, t, w, u, radius - 1));
  }
  std::sort(parts.begin(), parts.end());
  std::string out = "(";
  for (const auto& p : parts) out += p;
  out += ")";
  return out;
}

}  // namespace

std::string local_pattern_key(const EdgeSet& d, VertexId v, int radius) {
  return pattern_rec(d, d.tree(), v, kNoVertex, radius);
}

}  // namespace bethe
