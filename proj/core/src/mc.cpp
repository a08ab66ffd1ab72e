#include "bethe/mc.hpp"

#include <algorithm>
#include <cmath>

#include "bethe/rng.hpp"

namespace bethe {

const char* dynamics_name(Dynamics d) {
  return d == Dynamics::kGlauber ? "glauber" : "metropolis";
}

double heat_bath_plus_probability(double beta, double j, int neighbor_sum) {
  // p(+) / p(-) = exp(2 beta j m)
  return 1.0 / (1.0 + std::exp(-2.0 * beta * j * static_cast<double>(neighbor_sum)));
}

double metropolis_flip_probability(double beta, double j, int spin, int neighbor_sum) {
  const double delta_h = 2.0 * j * static_cast<double>(spin * neighbor_sum);
  return delta_h <= 0.0 ? 1.0 : std::exp(-beta * delta_h);
}

namespace {

struct Chain {
  const Tree& t;
  GibbsParams p;
  McConfig mc;
  std::size_t n_ball, n_inner;
  std::vector<std::int8_t> spin;
  std::vector<VertexId> order;
  SplitMix64 rng;

  Chain(const EdgeSet& d, int sign, const GibbsParams& params, const McConfig& config)
      : t(d.tree()), p(params), mc(config), rng(config.seed) {
    if (!(p.beta > 0.0) || !(p.j > 0.0)) throw std::invalid_argument("beta, j must be > 0");
    if (p.depth < 1 || p.depth > t.depth())
      throw std::invalid_argument("analysis depth must be in [1, tree depth]");
    if (mc.sweeps < 1 || mc.burn_in < 0 || mc.thinning < 1 || mc.batches < 1)
      throw std::invalid_argument("bad MC configuration");
    n_ball = t.count_up_to(p.depth);
    n_inner = t.count_up_to(p.depth - 1);
    const SpinConfig ref = build_sigma(d, sign);
    spin.assign(ref.spins().begin(), ref.spins().begin() + static_cast<std::ptrdiff_t>(n_ball));
    order.resize(n_inner);
    for (std::size_t i = 0; i < n_inner; ++i) order[i] = static_cast<VertexId>(i);
  }

  int neighbor_sum(VertexId v) const {
    int m = 0;
    if (v != Tree::root()) m += spin[t.parent(v)];
    for (VertexId c : t.children(v))
      if (c < n_ball) m += spin[c];
    return m;
  }

  void sweep() {
    // fresh seeded site order each sweep
    for (std::size_t i = n_inner; i-- > 1;)
      std::swap(order[i], order[rng.next_below(i + 1)]);
    for (VertexId v : order) {
      const int m = neighbor_sum(v);
      if (mc.dynamics == Dynamics::kGlauber) {
        spin[v] = rng.next_unit() < heat_bath_plus_probability(p.beta, p.j, m)
                      ? std::int8_t{1}
                      : std::int8_t{-1};
      } else {
        if (rng.next_unit() < metropolis_flip_probability(p.beta, p.j, spin[v], m))
          spin[v] = static_cast<std::int8_t>(-spin[v]);
      }
    }
  }
};

}  // namespace

McEstimates sample(const EdgeSet& d, int sign, const GibbsParams& params, const McConfig& mc) {
  Chain chain(d, sign, params, mc);
  const std::int64_t samples = mc.sweeps / mc.thinning;
  if (samples < 1) throw std::invalid_argument("no recorded samples after thinning");

  const int batches = static_cast<int>(std::min<std::int64_t>(mc.batches, samples));
  std::vector<std::vector<double>> batch_mean(
      static_cast<std::size_t>(batches), std::vector<double>(chain.n_ball, 0.0));
  std::vector<std::int64_t> batch_count(static_cast<std::size_t>(batches), 0);

  for (std::int64_t s = 0; s < mc.burn_in; ++s) chain.sweep();
  std::int64_t recorded = 0;
  for (std::int64_t s = 0; s < mc.sweeps; ++s) {
    chain.sweep();
    if ((s + 1) % mc.thinning != 0) continue;
    const auto b = static_cast<std::size_t>((recorded * batches) / samples);
    for (std::size_t v = 0; v < chain.n_ball; ++v)
      batch_mean[b][v] += static_cast<double>(chain.spin[v]);
    ++batch_count[b];
    ++recorded;
  }

  McEstimates out;
  out.depth = params.depth;
  out.samples = recorded;
  out.rng_id = kRngId;
  out.magnetization.assign(chain.n_ball, 0.0);
  out.std_error.assign(chain.n_ball, 0.0);
  for (int b = 0; b < batches; ++b)
    for (std::size_t v = 0; v < chain.n_ball; ++v)
      batch_mean[static_cast<std::size_t>(b)][v] /=
          static_cast<double>(batch_count[static_cast<std::size_t>(b)]);
  for (std::size_t v = 0; v < chain.n_ball; ++v) {
    double mean = 0.0;
    for (int b = 0; b < batches; ++b) mean += batch_mean[static_cast<std::size_t>(b)][v];
    mean /= batches;
    double var = 0.0;
    for (int b = 0; b < batches; ++b) {
      const double dlt = batch_mean[static_cast<std::size_t>(b)][v] - mean;
      var += dlt * dlt;
    }
    out.magnetization[v] = mean;
    out.std_error[v] = batches > 1 ? std::sqrt(var / (batches * (batches - 1.0))) : 0.0;
  }
  return out;
}

std::vector<double> energy_trace(const EdgeSet& d, int sign, const GibbsParams& params,
                                 const McConfig& mc) {
  Chain chain(d, sign, params, mc);
  const SpinConfig ref = build_sigma(d, sign);
  const Tree& t = chain.t;

  const auto excess = [&]() {
    long long units = 0;
    for (VertexId v = 1; v < chain.n_ball; ++v) {
      const VertexId u = t.parent(v);
      units += ref.spin(u) * ref.spin(v) - chain.spin[u] * chain.spin[v];
    }
    return params.j * static_cast<double>(units);
  };

  std::vector<double> trace;
  for (std::int64_t s = 0; s < mc.burn_in; ++s) chain.sweep();
  for (std::int64_t s = 0; s < mc.sweeps; ++s) {
    chain.sweep();
    if ((s + 1) % mc.thinning == 0) trace.push_back(excess());
  }
  if (trace.empty()) throw std::invalid_argument("no recorded samples after thinning");
  return trace;
}

}  // namespace bethe
