#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bethe/tree.hpp"

namespace bethe {

enum class CoverKind {
  kEmpty,
  kSingleBond,
  kFiniteSet,
  kDimer,
  kSecondaryDimer,
  kMonomerDimer,
  kPathCover,
  kRandomSparse,
};

const char* cover_kind_name(CoverKind kind);
std::optional<CoverKind> cover_kind_from_name(std::string_view name);

// A set of tree edges with its per-vertex incidence counts.  The maximum
// count d_max decides admissibility: 2*d_max < k-1 (exact integers).
// Immutable once a generator has produced it.
class EdgeSet {
 public:
  static EdgeSet empty(std::shared_ptr<const Tree> tree);
  static EdgeSet single_bond(std::shared_ptr<const Tree> tree, EdgeId e);
  static EdgeSet from_edges(std::shared_ptr<const Tree> tree, std::span<const EdgeId> edges,
                            CoverKind kind = CoverKind::kFiniteSet, std::uint64_t seed = 0);

  const Tree& tree() const { return *tree_; }
  const std::shared_ptr<const Tree>& tree_ptr() const { return tree_; }
  CoverKind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }

  bool contains(EdgeId e) const { return member_[e] != 0; }
  std::size_t size() const { return size_; }
  std::vector<EdgeId> edges() const;  // ascending edge ids

  int degree(VertexId v) const { return degree_[v]; }  // d_D(v)
  const std::vector<std::uint16_t>& degree_profile() const { return degree_; }
  int d_max() const { return d_max_; }

  // Recount incidences by scanning the member set; used to cross-check the
  // incrementally maintained profile.
  std::vector<std::uint16_t> recompute_degree_profile() const;

 private:
  EdgeSet(std::shared_ptr<const Tree> tree, CoverKind kind, std::uint64_t seed);
  void insert(EdgeId e);

  friend EdgeSet gen_dimer_cover(std::shared_ptr<const Tree>, std::uint64_t);
  friend EdgeSet gen_secondary_dimer(std::shared_ptr<const Tree>, const EdgeSet&, std::uint64_t);
  friend EdgeSet gen_monomer_dimer(std::shared_ptr<const Tree>, std::uint64_t);
  friend EdgeSet gen_path_cover(std::shared_ptr<const Tree>, std::uint64_t);
  friend EdgeSet gen_random_sparse(std::shared_ptr<const Tree>, int, double, std::uint64_t);

  std::shared_ptr<const Tree> tree_;
  CoverKind kind_;
  std::uint64_t seed_;
  std::vector<std::uint8_t> member_;
  std::vector<std::uint16_t> degree_;
  int d_max_ = 0;
  std::size_t size_ = 0;
};

bool admissible(int d_max, int k);

// Matching that covers every interior vertex (generation <= depth-1) exactly
// once; boundary vertices may stay uncovered.  Deterministic in (tree, seed).
EdgeSet gen_dimer_cover(std::shared_ptr<const Tree> tree, std::uint64_t seed);

// Raised when the greedy pairing cannot serve an interior dimer.
class SecondaryDimerError : public std::runtime_error {
 public:
  SecondaryDimerError(const std::string& what, EdgeId dimer)
      : std::runtime_error(what), dimer_edge(dimer) {}
  EdgeId dimer_edge;
};

// Pairs up adjacent dimers of `primary`: each member edge joins two distinct
// dimers, each interior dimer is joined exactly once.
EdgeSet gen_secondary_dimer(std::shared_ptr<const Tree> tree, const EdgeSet& primary,
                            std::uint64_t seed);

// Bonds pairwise at distance >= 2 with every interior vertex within distance
// 1 of a bond.  Requires depth >= 3.
EdgeSet gen_monomer_dimer(std::shared_ptr<const Tree> tree, std::uint64_t seed);

// Every interior vertex incident to exactly two member edges; the members
// split into vertex-disjoint paths.  Requires k >= 2.
EdgeSet gen_path_cover(std::shared_ptr<const Tree> tree, std::uint64_t seed);

// Independent per-edge inclusion with probability `density`, rejecting edges
// that would push any incidence count above d_cap.
EdgeSet gen_random_sparse(std::shared_ptr<const Tree> tree, int d_cap, double density,
                          std::uint64_t seed);

struct ValidationCheck {
  std::string name;
  bool pass = true;
  std::vector<VertexId> bad_vertices;
  std::vector<EdgeId> bad_edges;
};

struct ValidationReport {
  CoverKind kind;
  bool pass = true;
  std::vector<ValidationCheck> checks;
};

// Checks the defining predicates of `kind` on the interior of the ball.
// Never throws: failures are data.  SecondaryDimer needs `primary`.
ValidationReport validate_cover(const EdgeSet& d, CoverKind kind,
                                const EdgeSet* primary = nullptr);

// Canonical label of the membership pattern within `radius` of v, invariant
// under neighborhood isomorphisms fixing v.  Vertices with equal keys see
// identical local patterns.
std::string local_pattern_key(const EdgeSet& d, VertexId v, int radius);

}  // namespace bethe
