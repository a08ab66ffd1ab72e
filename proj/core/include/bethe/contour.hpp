#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bethe/groundstate.hpp"

namespace bethe {

// Maximal connected component I of incorrect sites, its external vertex
// boundary, and every tree edge inside I ∪ ∂I.
struct Contour {
  std::vector<VertexId> interior;           // sorted
  std::vector<VertexId> external_boundary;  // sorted, disjoint from interior
  std::vector<EdgeId> edges;                // sorted
};

// Vertices where sigma disagrees with the reference.
std::vector<VertexId> incorrect_sites(const SpinConfig& sigma, const SpinConfig& reference);

// One contour per maximal connected component of the disagreement set.
// Rejects disagreements touching the boundary generation.
std::vector<Contour> extract_contours(const SpinConfig& sigma, const SpinConfig& reference);

// Builds the contour with the given (connected) interior.
Contour contour_from_interior(const Tree& tree, std::span<const VertexId> interior);

// exp(-beta * excess energy) of the single-contour configuration.
double contour_weight(const Contour& contour, const EdgeSet& d, Coupling coupling, double beta);

struct PeierlsReport {
  bool admissible_d = false;
  bool degenerate = false;         // per-site bound factor is <= 0
  long long bound_units_per_site = 0;  // 2((k+1) - 2(d_max+1)); excess >= j*bound*|Int|
  bool holds = false;              // min slack >= 0
  long long min_slack_units = 0;
  std::vector<VertexId> tightest;
  std::size_t contours_enumerated = 0;
  int m_max = 0;
};

// Exhaustively checks excess >= j * bound_units_per_site * |Int| over all
// connected interiors with |Int| <= m_max.
PeierlsReport verify_peierls(const EdgeSet& d, Coupling coupling, int m_max,
                             const EnumLimits& limits = {});

struct InductionStepReport {
  int samples = 0;
  std::size_t checks = 0;
  bool all_pass = false;
  long long min_drop_units = 0;       // smallest observed single-site energy drop
  long long required_drop_units = 0;  // 2((k+1) - 2(d_max+1))
  std::vector<std::string> failures;
};

// For seeded random contours, removes sites whose offspring lie outside the
// interior and checks that (a) the flipped configuration again has a single
// contour with the site removed, (b) the energy drop meets the per-site
// bound.
InductionStepReport induction_step_check(const EdgeSet& d, Coupling coupling, int samples,
                                         std::uint64_t seed, int max_interior = 5);

// Exact number of connected edge-subgraphs with n edges whose vertex set
// contains v (n = 0 counts as 1).  Requires boundary_distance(v) >= n so the
// ball contains every candidate subgraph.
std::uint64_t count_connected_edge_subgraphs(const Tree& tree, VertexId v, int n_edges);

// (k+1)^(2n); throws ResourceLimitError if it overflows 64 bits.
std::uint64_t subgraph_count_bound(int k, int n_edges);

}  // namespace bethe
