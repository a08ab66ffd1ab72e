#pragma once

#include <array>
#include <span>
#include <vector>

#include "bethe/groundstate.hpp"

namespace bethe {

struct GibbsParams {
  double beta = 1.0;            // inverse temperature, > 0
  double j = 1.0;               // coupling, > 0
  int depth = 1;                // analysis radius r; spins at generation r are fixed
  bool relative_energy = false; // measure energies against the reference configuration
};

// Conditional log partition functions of the subtree below each interior
// vertex, given the spin there, with generation depth-1 initialized from the
// fixed frontier spins.  All entries finite.
struct CavityTable {
  int depth = 0;
  std::vector<std::array<double, 2>> log_z;  // [vertex][spin index: 0 -> +1, 1 -> -1]
};

// Leaf-to-root pass with generation-`depth` spins fixed by `boundary`.
CavityTable cavity_table(const SpinConfig& boundary, const GibbsParams& params);

// log sum over interior spin assignments of exp(-beta H), with H over the
// edges of the radius-`depth` ball and generation-`depth` spins fixed to
// sigma^{D,sign}.  Relative mode subtracts H(sigma^{D,sign}), so the value
// is >= 0.
double log_partition(const EdgeSet& d, int sign, const GibbsParams& params);

// Exact magnetizations <sigma_x> for every vertex of the analysis ball
// (clamped frontier vertices report ±1).  Indexed by vertex id, size
// count_up_to(depth).
std::vector<double> exact_marginals(const EdgeSet& d, int sign, const GibbsParams& params);

// P(sigma_x = sigma_x^{D,sign}) per vertex of the analysis ball.
std::vector<double> agreement_profile(const EdgeSet& d, int sign, const GibbsParams& params);

// f = -(1/beta) log Z / |V_r| with absolute energies; comparable across D
// only at matched (k, depth, beta, j).
double free_energy_density(const EdgeSet& d, int sign, const GibbsParams& params);

// Marginals with the frontier spins summed over rather than clamped; root
// magnetization vanishes by symmetry.
std::vector<double> free_state_marginals(const Tree& tree, const GibbsParams& params);

// <sigma_root sigma_x> under the free state; equals tanh(beta j)^dist on a
// field-free tree.
double free_root_pair_correlation(const Tree& tree, const GibbsParams& params, VertexId x);

// <sigma_root sigma_x> under the sigma^{D,sign} boundary condition.
double root_pair_correlation(const EdgeSet& d, int sign, const GibbsParams& params, VertexId x);

struct DepthScanRow {
  int depth = 0;
  double root_magnetization = 0.0;
  double root_agreement = 0.0;
  double diff_from_previous = 0.0;  // agreement difference; 0 for the first row
};

// Evaluates the root marginal at each radius in `depths` (ascending), with D
// restricted to the corresponding ball of the one working tree, and records
// successive agreement differences as a convergence diagnostic.
std::vector<DepthScanRow> depth_scan(const EdgeSet& d, int sign, double beta, double j,
                                     std::span<const int> depths);

}  // namespace bethe
