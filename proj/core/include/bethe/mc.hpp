#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bethe/gibbs.hpp"

namespace bethe {

enum class Dynamics { kGlauber, kMetropolis };

const char* dynamics_name(Dynamics d);

struct McConfig {
  std::int64_t sweeps = 1000;    // recorded phase, after burn-in
  std::int64_t burn_in = 100;
  std::uint64_t seed = 1;
  std::int64_t thinning = 1;     // record every thinning-th sweep
  Dynamics dynamics = Dynamics::kGlauber;
  int batches = 30;              // batch-means error bars
};

struct McEstimates {
  int depth = 0;
  std::int64_t samples = 0;
  std::vector<double> magnetization;  // per vertex of the analysis ball
  std::vector<double> std_error;      // batch-means standard errors
  std::string rng_id;
};

// Single-site dynamics on the interior of the radius-`depth` ball with the
// frontier clamped to sigma^{D,sign}; chain starts at the ground state.
// Deterministic in (seed, config).
McEstimates sample(const EdgeSet& d, int sign, const GibbsParams& params, const McConfig& mc);

// Relative excess energy (against sigma^{D,sign}, over ball edges) at each
// recorded sweep.
std::vector<double> energy_trace(const EdgeSet& d, int sign, const GibbsParams& params,
                                 const McConfig& mc);

// Update probabilities, exposed so tests can pin them against Hamiltonian
// differences.  neighbor_sum is the sum of the neighboring spins.
double heat_bath_plus_probability(double beta, double j, int neighbor_sum);
double metropolis_flip_probability(double beta, double j, int spin, int neighbor_sum);

}  // namespace bethe
