#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "bethe/dsets.hpp"
#include "bethe/enumerate.hpp"
#include "bethe/tree.hpp"

namespace bethe {

struct Coupling {
  double j = 1.0;  // ferromagnetic, j > 0
};

// Total ±1 assignment on a ball.
class SpinConfig {
 public:
  SpinConfig(std::shared_ptr<const Tree> tree, std::vector<std::int8_t> spins);

  const Tree& tree() const { return *tree_; }
  const std::shared_ptr<const Tree>& tree_ptr() const { return tree_; }
  int spin(VertexId v) const { return spins_[v]; }
  const std::vector<std::int8_t>& spins() const { return spins_; }
  SpinConfig negated() const;

 private:
  std::shared_ptr<const Tree> tree_;
  std::vector<std::int8_t> spins_;
};

// The configuration whose bond products are -1 exactly on D, with the given
// root sign.  Unique; inverse of recover_d.
SpinConfig build_sigma(const EdgeSet& d, int root_sign);

// Edges whose endpoint spins disagree.
EdgeSet recover_d(const SpinConfig& sigma);

// Sum of endpoint-spin products over all ball edges (exact integer).
long long bond_sum(const SpinConfig& sigma);

// H = -J * bond_sum.
double hamiltonian(const SpinConfig& sigma, Coupling coupling);

// Negates spins exactly on C; rejects empty or disconnected C.
SpinConfig flip_connected(const SpinConfig& sigma, std::span<const VertexId> c);

// Sum over edges of (reference product - sigma product); each term is in
// {-2, 0, 2}, so the excess energy is exactly j * units.  Rejects configs
// that differ on the boundary generation (the difference would then depend
// on the truncation).
long long excess_units(const SpinConfig& sigma, const SpinConfig& reference);

double excess_energy(const SpinConfig& sigma, const SpinConfig& reference, Coupling coupling);

// Excess units of flipping `flip_set` in sigma^{D,±}: 2 * sum over edges
// leaving the set of the reference bond product.  Sign-independent.
long long set_flip_units(const EdgeSet& d, std::span<const VertexId> flip_set);

struct GroundStateReport {
  bool admissible_d = false;
  bool all_positive = false;
  long long min_units = 0;  // excess energy = j * units
  double min_excess = 0.0;
  std::vector<VertexId> argmin;
  std::size_t sets_enumerated = 0;
  int m_max = 0;
};

// Enumerates every connected set C of interior vertices with |C| <= m_max
// and checks that flipping it in sigma^{D,±} costs energy.  Interior sets
// have all incident edges materialized, so the excess equals the
// infinite-tree value.
GroundStateReport verify_ground_state(const EdgeSet& d, Coupling coupling, int m_max,
                                      const EnumLimits& limits = {});

struct StabilityCount {
  long long count = 0;
  bool truncated = false;  // a set of size m_max was below the cap; count is a lower bound
};

// Number of connected interior sets C containing v, |C| <= m_max, with
// excess energy strictly below e_cap.  Requires generation(v) <= depth -
// m_max so every candidate set stays interior.
StabilityCount stability_count(const EdgeSet& d, Coupling coupling, VertexId v, double e_cap,
                               int m_max, const EnumLimits& limits = {});

}  // namespace bethe
