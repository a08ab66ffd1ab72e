#include "bethe/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bethe {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// symmetric in (a, b) so mirrored passes stay bit-identical
double logaddexp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

void validate(const Tree& t, const GibbsParams& p) {
  if (!(p.beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  if (!(p.j > 0.0)) throw std::invalid_argument("j must be > 0");
  if (p.depth < 1 || p.depth > t.depth())
    throw std::invalid_argument("analysis depth must be in [1, tree depth]");
}

// Exact sums over the radius-r ball: upward conditional partition functions,
// downward environment weights, all in log domain.  Spin index 0 is +1.
class Engine {
 public:
  // boundary == nullptr sums the frontier spins freely
  Engine(const Tree& t, const GibbsParams& p, const SpinConfig* boundary)
      : t_(t), bj_(p.beta * p.j), r_(p.depth) {
    n_ball_ = t.count_up_to(r_);
    n_inner_ = t.count_up_to(r_ - 1);
    log_z_.assign(n_ball_, {0.0, 0.0});
    up_.assign(n_ball_, {0.0, 0.0});

    for (std::size_t i = n_ball_; i-- > 0;) {
      const auto v = static_cast<VertexId>(i);
      if (i >= n_inner_) {
        if (boundary != nullptr) {
          const bool plus = boundary->spin(v) == 1;
          log_z_[i] = {plus ? 0.0 : kNegInf, plus ? kNegInf : 0.0};
        }
      } else {
        double lp = 0.0, lm = 0.0;
        for (VertexId c : t.children(v)) {
          lp += up_[c][0];
          lm += up_[c][1];
        }
        log_z_[i] = {lp, lm};
      }
      // message to the parent as a function of the parent spin
      up_[i][0] = logaddexp(bj_ + log_z_[i][0], -bj_ + log_z_[i][1]);
      up_[i][1] = logaddexp(-bj_ + log_z_[i][0], bj_ + log_z_[i][1]);
    }
  }

  double log_partition_abs() const { return logaddexp(log_z_[0][0], log_z_[0][1]); }

  CavityTable cavity(int depth) const {
    return CavityTable{depth,
                       {log_z_.begin(), log_z_.begin() + static_cast<std::ptrdiff_t>(n_inner_)}};
  }

  // root_clamp in {-1, 0, +1}
  std::vector<double> marginals(int root_clamp) const {
    std::vector<std::array<double, 2>> down(n_ball_, {0.0, 0.0});
    down[0] = {root_clamp == -1 ? kNegInf : 0.0, root_clamp == +1 ? kNegInf : 0.0};
    for (std::size_t i = 0; i < n_inner_; ++i) {
      const auto v = static_cast<VertexId>(i);
      const double env_p = down[i][0] + log_z_[i][0];
      const double env_m = down[i][1] + log_z_[i][1];
      for (VertexId c : t_.children(v)) {
        // parent weight with c's own message divided out (exact in log domain)
        const double rest_p = env_p - up_[c][0];
        const double rest_m = env_m - up_[c][1];
        down[c][0] = logaddexp(bj_ + rest_p, -bj_ + rest_m);
        down[c][1] = logaddexp(-bj_ + rest_p, bj_ + rest_m);
      }
    }
    std::vector<double> mag(n_ball_);
    for (std::size_t i = 0; i < n_ball_; ++i) {
      const double ap = down[i][0] + log_z_[i][0];
      const double am = down[i][1] + log_z_[i][1];
      if (am == kNegInf) mag[i] = 1.0;
      else if (ap == kNegInf) mag[i] = -1.0;
      else mag[i] = std::tanh(0.5 * (ap - am));
    }
    return mag;
  }

 private:
  const Tree& t_;
  double bj_;
  int r_;
  std::size_t n_ball_ = 0, n_inner_ = 0;
  std::vector<std::array<double, 2>> log_z_, up_;
};

// Sum of reference bond products over edges of the radius-r ball.
long long reference_bond_sum(const SpinConfig& ref, int r) {
  const Tree& t = ref.tree();
  const std::size_t n_ball = t.count_up_to(r);
  long long sum = 0;
  for (VertexId v = 1; v < n_ball; ++v) sum += ref.spin(v) * ref.spin(t.parent(v));
  return sum;
}

}  // namespace

CavityTable cavity_table(const SpinConfig& boundary, const GibbsParams& params) {
  validate(boundary.tree(), params);
  Engine e(boundary.tree(), params, &boundary);
  return e.cavity(params.depth);
}

double log_partition(const EdgeSet& d, int sign, const GibbsParams& params) {
  validate(d.tree(), params);
  const SpinConfig ref = build_sigma(d, sign);
  Engine e(d.tree(), params, &ref);
  double out = e.log_partition_abs();
  if (params.relative_energy) {
    // Z_rel = Z_abs * exp(beta * H_ref), H_ref = -j * sum of reference products
    out -= params.beta * params.j * static_cast<double>(reference_bond_sum(ref, params.depth));
  }
  return out;
}

std::vector<double> exact_marginals(const EdgeSet& d, int sign, const GibbsParams& params) {
  validate(d.tree(), params);
  const SpinConfig ref = build_sigma(d, sign);
  Engine e(d.tree(), params, &ref);
  return e.marginals(0);
}

std::vector<double> agreement_profile(const EdgeSet& d, int sign, const GibbsParams& params) {
  const SpinConfig ref = build_sigma(d, sign);
  std::vector<double> mag = exact_marginals(d, sign, params);
  for (std::size_t v = 0; v < mag.size(); ++v)
    mag[v] = 0.5 * (1.0 + static_cast<double>(ref.spin(static_cast<VertexId>(v))) * mag[v]);
  return mag;
}

double free_energy_density(const EdgeSet& d, int sign, const GibbsParams& params) {
  GibbsParams absolute = params;
  absolute.relative_energy = false;
  const double log_z = log_partition(d, sign, absolute);
  const auto volume = static_cast<double>(d.tree().count_up_to(params.depth));
  return -log_z / (params.beta * volume);
}

std::vector<double> free_state_marginals(const Tree& tree, const GibbsParams& params) {
  validate(tree, params);
  Engine e(tree, params, nullptr);
  return e.marginals(0);
}

double free_root_pair_correlation(const Tree& tree, const GibbsParams& params, VertexId x) {
  validate(tree, params);
  if (static_cast<std::size_t>(x) >= tree.count_up_to(params.depth))
    throw std::invalid_argument("vertex outside the analysis ball");
  Engine e(tree, params, nullptr);
  // root marginal is symmetric, so <s0 sx> = E[sx | s0 = +1]
  return e.marginals(+1)[x];
}

double root_pair_correlation(const EdgeSet& d, int sign, const GibbsParams& params, VertexId x) {
  validate(d.tree(), params);
  if (static_cast<std::size_t>(x) >= d.tree().count_up_to(params.depth))
    throw std::invalid_argument("vertex outside the analysis ball");
  const SpinConfig ref = build_sigma(d, sign);
  Engine e(d.tree(), params, &ref);
  const double m0 = e.marginals(0)[Tree::root()];
  const double p_plus = 0.5 * (1.0 + m0), p_minus = 0.5 * (1.0 - m0);
  const double mx_plus = p_plus > 0.0 ? e.marginals(+1)[x] : 0.0;
  const double mx_minus = p_minus > 0.0 ? e.marginals(-1)[x] : 0.0;
  return p_plus * mx_plus - p_minus * mx_minus;
}

std::vector<DepthScanRow> depth_scan(const EdgeSet& d, int sign, double beta, double j,
                                     std::span<const int> depths) {
  std::vector<DepthScanRow> rows;
  double prev = 0.0;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (i > 0 && depths[i] <= depths[i - 1])
      throw std::invalid_argument("scan depths must be strictly increasing");
    GibbsParams p{beta, j, depths[i], false};
    validate(d.tree(), p);
    const SpinConfig ref = build_sigma(d, sign);
    Engine e(d.tree(), p, &ref);
    const double mag = e.marginals(0)[Tree::root()];
    const double agree = 0.5 * (1.0 + static_cast<double>(sign) * mag);
    rows.push_back({depths[i], mag, agree, i == 0 ? 0.0 : agree - prev});
    prev = agree;
  }
  return rows;
}

}  // namespace bethe
