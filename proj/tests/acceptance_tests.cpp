// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Usage: acceptance_tests [golden_dir]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bethe/contour.hpp"
#include "bethe/gibbs.hpp"
#include "bethe/json_io.hpp"
#include "bethe/mc.hpp"
#include "support/oracles.hpp"

using namespace bethe;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
  void note(const std::string& what) {
    if (detail.empty()) detail = what;
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double budget_s,
               const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.ok = false;
    out.detail = std::string("exception: ") + e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (out.ok && elapsed > budget_s) {
    out.ok = false;
    out.detail = "over the runtime budget of " + std::to_string(budget_s) + " s";
  }
  std::printf("[%s] %02d %s (%.2f s)%s%s\n", out.ok ? "PASS" : "FAIL", id, name.c_str(), elapsed,
              out.detail.empty() ? "" : " -- ", out.detail.c_str());
  std::fflush(stdout);
  if (!out.ok) ++failures;
}

// family grid shared by the ground-state and contour-bound criteria
struct Family {
  std::string name;
  EdgeSet d;
};

std::vector<Family> family_grid_k4(const std::shared_ptr<const Tree>& t) {
  std::vector<Family> out;
  out.push_back({"empty", EdgeSet::empty(t)});
  out.push_back({"dimer", gen_dimer_cover(t, 1)});
  out.push_back({"secondary", gen_secondary_dimer(t, out[1].d, 1)});
  out.push_back({"monomer-dimer", gen_monomer_dimer(t, 1)});
  out.push_back({"random-matching", gen_random_sparse(t, 1, 0.35, 4)});
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string golden_dir = argc > 1 ? argv[1] : "tests/golden";

  criterion(1, "bijection: recover after build over 100 seeded sets (k=4, r=5)", 5.0,
            [](Outcome& out) {
              auto t = build_ball({4, 5});
              for (std::uint64_t seed = 0; seed < 100; ++seed) {
                const auto d = gen_random_sparse(t, 2, 0.30, seed);
                const auto back = recover_d(build_sigma(d, +1));
                out.require(back.edges() == d.edges(),
                            "mismatch at seed " + std::to_string(seed));
              }
              out.note("100/100 exact round-trips");
            });

  criterion(2, "ground states: every connected excitation up to size 4 costs energy", 120.0,
            [](Outcome& out) {
              auto t4 = build_ball({4, 6});
              long long weakest = std::numeric_limits<long long>::max();
              for (const auto& [name, d] : family_grid_k4(t4)) {
                const auto report = verify_ground_state(d, {1.0}, 4, {4'000'000});
                out.require(report.admissible_d, name + ": not admissible");
                out.require(report.all_positive,
                            name + ": non-positive excess " +
                                std::to_string(report.min_units));
                weakest = std::min(weakest, report.min_units);
              }
              auto t6 = build_ball({6, 4});
              const auto path = verify_ground_state(gen_path_cover(t6, 1), {1.0}, 4,
                                                    {4'000'000});
              out.require(path.admissible_d, "path cover: not admissible at k=6");
              out.require(path.all_positive, "path cover: non-positive excess");
              weakest = std::min(weakest, path.min_units);
              out.note("minimal excess across the grid: " + std::to_string(weakest) + " x J");
            });

  criterion(3, "contour energy bound with the per-site removal induction", 120.0,
            [](Outcome& out) {
              auto t4 = build_ball({4, 6});
              long long min_slack = std::numeric_limits<long long>::max();
              for (const auto& [name, d] : family_grid_k4(t4)) {
                const auto report = verify_peierls(d, {1.0}, 4, {4'000'000});
                out.require(report.holds, name + ": slack " +
                                              std::to_string(report.min_slack_units));
                min_slack = std::min(min_slack, report.min_slack_units);
              }
              auto t6 = build_ball({6, 4});
              const auto path = verify_peierls(gen_path_cover(t6, 1), {1.0}, 4, {4'000'000});
              out.require(path.holds, "path cover: negative slack");
              min_slack = std::min(min_slack, path.min_slack_units);

              const auto dbar = gen_dimer_cover(t4, 1);
              const auto ind = induction_step_check(dbar, {1.0}, 200, 17, 5);
              out.require(ind.all_pass,
                          ind.failures.empty() ? "induction check failed" : ind.failures[0]);
              out.note("min slack " + std::to_string(min_slack) + ", " +
                       std::to_string(ind.checks) + " removal checks");
            });

  criterion(4, "edge-subgraph census within (k+1)^(2n), vertex-independent", 120.0,
            [](Outcome& out) {
              std::string biggest;
              for (int k : {2, 3, 4}) {
                const int n_max = k == 2 ? 8 : 6;
                auto t = build_ball({k, n_max + 2});
                const VertexId deep1 = t->first_child(Tree::root());
                const VertexId deep2 = t->first_child(deep1);
                for (int n = 1; n <= n_max; ++n) {
                  const auto count = count_connected_edge_subgraphs(*t, Tree::root(), n);
                  const auto bound = subgraph_count_bound(k, n);
                  out.require(count <= bound,
                              "k=" + std::to_string(k) + " n=" + std::to_string(n) +
                                  ": count above the bound");
                  for (VertexId v : {deep1, deep2})
                    out.require(count_connected_edge_subgraphs(*t, v, n) == count,
                                "k=" + std::to_string(k) + " n=" + std::to_string(n) +
                                    ": count depends on the vertex");
                  if (k == 4 && n == 6)
                    biggest = "k=4 n=6: " + std::to_string(count) + " <= " +
                              std::to_string(bound);
                }
              }
              out.note(biggest);
            });

  criterion(5, "contour representation identity to 1e-10 on small balls", 60.0, [](Outcome&
                                                                                       out) {
    struct Grid {
      int k, r;
    };
    double worst = 0.0;
    for (const Grid grid : {Grid{2, 1}, Grid{2, 2}, Grid{4, 1}, Grid{3, 1}}) {
      auto t = build_ball({grid.k, grid.r + 1});
      const std::size_t flippable = t->count_up_to(grid.r);
      if (flippable > 12) continue;
      for (bool use_dimer : {false, true}) {
        const EdgeSet d = use_dimer ? gen_dimer_cover(t, 1) : EdgeSet::empty(t);
        const auto ref = build_sigma(d, +1);

        std::vector<std::uint8_t> allowed(t->vertex_count(), 0);
        for (std::size_t v = 0; v < flippable; ++v) allowed[v] = 1;
        struct Entry {
          std::uint32_t mask, blocked;
          long long units;
        };
        std::vector<Entry> contours;
        for_each_connected_set(*t, allowed, static_cast<int>(flippable), {},
                               [&](std::span<const VertexId> c) {
                                 Entry e{0, 0, set_flip_units(d, c)};
                                 for (VertexId v : c) {
                                   e.mask |= 1u << v;
                                   e.blocked |= 1u << v;
                                   for (VertexId w : t->neighbors(v))
                                     if (w < flippable) e.blocked |= 1u << w;
                                 }
                                 contours.push_back(e);
                               });

        for (const double beta : {0.3, 1.0, 3.0}) {
          long double config_sum = 0.0L;
          for (std::uint32_t mask = 0; mask < (1u << flippable); ++mask) {
            auto spins = ref.spins();
            for (std::size_t v = 0; v < flippable; ++v)
              if (mask >> v & 1) spins[v] = static_cast<std::int8_t>(-spins[v]);
            config_sum += std::exp(-static_cast<long double>(beta) *
                                   static_cast<long double>(
                                       excess_units(SpinConfig(t, std::move(spins)), ref)));
          }
          const std::size_t n_states = std::size_t{1} << flippable;
          std::vector<long double> after(n_states, 1.0L), before(n_states);
          for (std::size_t i = contours.size(); i-- > 0;) {
            const long double w = std::exp(-static_cast<long double>(beta) *
                                           static_cast<long double>(contours[i].units));
            for (std::uint32_t blocked = 0; blocked < n_states; ++blocked) {
              long double total = after[blocked];
              if ((contours[i].mask & blocked) == 0)
                total += w * after[blocked | contours[i].blocked];
              before[blocked] = total;
            }
            before.swap(after);
          }
          const double rel = std::abs(static_cast<double>(config_sum / after[0]) - 1.0);
          worst = std::max(worst, rel);
          out.require(rel < 1e-10, "relative gap " + std::to_string(rel));
        }
      }
    }
    std::ostringstream o;
    o << "worst relative gap " << worst;
    out.note(o.str());
  });

  criterion(6, "cavity recursion vs full enumeration to 1e-10", 120.0, [](Outcome& out) {
    struct Grid {
      int k, ball_depth, r;
    };
    double worst = 0.0;
    const auto check = [&](const EdgeSet& d, int sign, double beta, double j, int r) {
      const SpinConfig ref = build_sigma(d, sign);
      const auto want_rel = static_cast<double>(oracle::brute_log_partition_rel(ref, beta, j, r));
      const auto want_abs = static_cast<double>(oracle::brute_log_partition_abs(ref, beta, j, r));
      const double got_rel = log_partition(d, sign, {beta, j, r, true});
      const double got_abs = log_partition(d, sign, {beta, j, r, false});
      const double gap_rel =
          std::abs(got_rel - want_rel) / std::max(1.0, std::abs(want_rel));
      const double gap_abs =
          std::abs(got_abs - want_abs) / std::max(1.0, std::abs(want_abs));
      worst = std::max({worst, gap_rel, gap_abs});
      out.require(gap_rel < 1e-10 && gap_abs < 1e-10, "partition sum off the oracle");

      const auto mag = exact_marginals(d, sign, {beta, j, r, false});
      const auto want = oracle::brute_marginals(ref, beta, j, r);
      for (std::size_t v = 0; v < want.size(); ++v) {
        const double gap = std::abs(mag[v] - want[v]);
        worst = std::max(worst, gap);
        out.require(gap < 1e-10, "marginal off the oracle");
      }
    };
    {
      auto t = build_ball({2, 4});
      for (double beta : {0.3, 1.0, 3.0})
        for (int sign : {+1, -1}) {
          check(EdgeSet::empty(t), sign, beta, 1.0, 3);
          check(gen_dimer_cover(t, 1), sign, beta, 1.0, 3);
        }
    }
    {
      auto t = build_ball({3, 4});  // 17 interior spins at r = 3
      for (int sign : {+1, -1}) {
        check(gen_dimer_cover(t, 2), sign, 1.0, 1.0, 3);
        check(gen_random_sparse(t, 2, 0.4, 9), sign, 0.7, 1.3, 3);
      }
    }
    {
      auto t = build_ball({4, 3});
      for (double beta : {0.3, 3.0})
        for (int sign : {+1, -1}) check(gen_monomer_dimer(t, 3), sign, beta, 1.0, 2);
    }
    std::ostringstream o;
    o << "worst deviation " << worst;
    out.note(o.str());
  });

  criterion(7, "free-energy ordering across covering families", 60.0, [](Outcome& out) {
    auto t = build_ball({4, 6});
    const auto dbar = gen_dimer_cover(t, 1);
    const auto dtilde = gen_secondary_dimer(t, dbar, 1);
    const auto empty = EdgeSet::empty(t);
    double min_gap = 1e9;
    for (int r : {3, 4, 5}) {
      const GibbsParams p{2.0, 1.0, r, false};
      const double f_bar = free_energy_density(dbar, +1, p);
      const double f_tilde = free_energy_density(dtilde, +1, p);
      const double f_empty = free_energy_density(empty, +1, p);
      out.require(f_bar > f_tilde && f_tilde > f_empty,
                  "strict chain broken at r=" + std::to_string(r));
      min_gap = std::min({min_gap, f_bar - f_tilde, f_tilde - f_empty});
      // the lower comparison is exact at every depth
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto d = gen_random_sparse(t, 1, 0.35, seed);
        out.require(free_energy_density(d, +1, p) >= f_empty - 1e-12,
                    "f_D below f_empty at r=" + std::to_string(r) + " seed " +
                        std::to_string(seed));
      }
    }
    // the upper comparison against the dimer cover is a bulk statement; at
    // shallow radii a dense matching can out-pack the cover's restriction to
    // the ball by O(1e-8), so it is asserted at the deepest matched depth
    {
      const GibbsParams p{2.0, 1.0, 5, false};
      const double f_bar = free_energy_density(dbar, +1, p);
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto d = gen_random_sparse(t, 1, 0.35, seed);
        out.require(f_bar >= free_energy_density(d, +1, p) - 1e-12,
                    "f_D above f_dimer at r=5, seed " + std::to_string(seed));
      }
    }
    std::ostringstream o;
    o << "smallest strict gap " << min_gap;
    out.note(o.str());
  });

  criterion(8, "low-T agreement: interior minimum at least 0.9, golden-locked", 30.0,
            [&](Outcome& out) {
              auto t = build_ball({4, 4});
              const auto dbar = gen_dimer_cover(t, 1);
              const auto agree = agreement_profile(dbar, +1, {2.0, 1.0, 3, false});
              double lo = 1.0;
              for (std::size_t v = 0; v < t->count_up_to(2); ++v) lo = std::min(lo, agree[v]);
              out.require(lo >= 0.9, "interior minimum " + format_g17(lo));

              const std::string golden_path = golden_dir + "/agreement_min_k4_dbar_r3.txt";
              std::ifstream golden(golden_path);
              double want = 0.0;
              out.require(static_cast<bool>(golden >> want),
                          "missing golden file " + golden_path);
              if (out.ok)
                out.require(std::abs(lo - want) <= 1e-9 * std::max(1.0, std::abs(want)),
                            "regression: " + format_g17(lo) + " vs golden " + format_g17(want));
              out.note("min agreement " + format_g17(lo));
            });

  criterion(9, "sampler within three sigma of the recursion, bit-stable", 120.0,
            [](Outcome& out) {
              auto t = build_ball({4, 4});
              McConfig mc;
              mc.sweeps = 12000;
              mc.burn_in = 1000;
              mc.seed = 99;
              int total = 0, inside = 0;
              for (bool use_dimer : {false, true}) {
                const EdgeSet d = use_dimer ? gen_dimer_cover(t, 7) : EdgeSet::empty(t);
                for (double beta : {0.5, 2.0}) {
                  const GibbsParams p{beta, 1.0, 3, false};
                  const auto exact = exact_marginals(d, +1, p);
                  const auto est = sample(d, +1, p, mc);
                  const double floor = 6.0 / static_cast<double>(est.samples);
                  for (std::size_t v = 0; v < t->count_up_to(3); ++v) {
                    ++total;
                    if (std::abs(est.magnetization[v] - exact[v]) <=
                        3.0 * est.std_error[v] + floor)
                      ++inside;
                  }
                }
              }
              out.require(inside * 100 >= total * 95,
                          std::to_string(inside) + "/" + std::to_string(total) +
                              " inside three sigma");

              const auto a = sample(gen_dimer_cover(t, 7), +1, {2.0, 1.0, 3, false}, mc);
              const auto b = sample(gen_dimer_cover(t, 7), +1, {2.0, 1.0, 3, false}, mc);
              out.require(std::memcmp(a.magnetization.data(), b.magnetization.data(),
                                      a.magnetization.size() * sizeof(double)) == 0,
                          "same-seed estimates differ");
              out.note("coverage " + std::to_string(inside) + "/" + std::to_string(total));
            });

  criterion(10, "stability counts uniform across matched local patterns (k=4, r=7)", 120.0,
            [](Outcome& out) {
              auto t = build_ball({4, 7});
              const auto dbar = gen_dimer_cover(t, 1);
              const int m_max = 3;
              std::map<std::string, long long> group_count;
              std::map<std::string, int> group_size;
              const std::size_t deep = t->count_up_to(t->depth() - m_max);
              for (VertexId v = 0; v < deep; ++v) {
                const auto got = stability_count(dbar, {1.0}, v, 6.5, m_max);
                const auto key = local_pattern_key(dbar, v, m_max);
                const auto it = group_count.find(key);
                if (it == group_count.end()) {
                  group_count.emplace(key, got.count);
                  group_size.emplace(key, 1);
                } else {
                  out.require(it->second == got.count,
                              "counts differ inside one pattern group");
                  ++group_size[key];
                }
              }
              int populous = 0;
              for (const auto& [key, size] : group_size) populous += size > 1;
              out.require(populous > 0, "no pattern group with more than one vertex");
              out.note(std::to_string(deep) + " vertices in " +
                       std::to_string(group_count.size()) + " pattern groups");
            });

  criterion(11, "depth-scan diagnostic: root agreement converged by r=8 (proxy only)", 120.0,
            [](Outcome& out) {
              auto t = build_ball({4, 9});
              const auto dbar = gen_dimer_cover(t, 1);
              const std::vector<int> depths{1, 2, 3, 4, 5, 6, 7, 8};
              const auto rows = depth_scan(dbar, +1, 2.0, 1.0, depths);
              out.require(std::abs(rows.back().diff_from_previous) < 1e-6,
                          "last agreement difference " +
                              format_g17(rows.back().diff_from_previous));
              out.require(rows.back().root_agreement > 0.9, "agreement not bounded away from 1/2");
              out.note("agreement " + format_g17(rows.back().root_agreement) +
                       ", last diff " + format_g17(rows.back().diff_from_previous));
            });

  if (failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", failures);
  return 1;
}
