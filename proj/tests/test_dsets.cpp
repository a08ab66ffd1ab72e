#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <set>

#include "bethe/dsets.hpp"
#include "bethe/json_io.hpp"
#include "support/oracles.hpp"

using namespace bethe;

namespace {

bool same_members(const EdgeSet& a, const EdgeSet& b) { return a.edges() == b.edges(); }

void check_profile_consistency(const EdgeSet& d) {
  const auto fresh = d.recompute_degree_profile();
  REQUIRE(fresh == d.degree_profile());
  int dm = 0;
  for (auto x : fresh) dm = std::max<int>(dm, x);
  CHECK(dm == d.d_max());
}

}  // namespace

TEST_CASE("admissibility is an exact integer comparison") {
  CHECK(admissible(1, 4));
  CHECK(admissible(2, 6));
  CHECK(!admissible(1, 3));
  // matchings admissible iff k >= 4, degree-2 families iff k >= 6
  for (int k = 1; k <= 8; ++k) {
    CHECK(admissible(1, k) == (k >= 4));
    CHECK(admissible(2, k) == (k >= 6));
  }
  CHECK(admissible(0, 2));
  CHECK(!admissible(0, 1));
  CHECK_THROWS_AS(admissible(-1, 3), std::invalid_argument);
}

TEST_CASE("dimer cover: interior covered exactly once") {
  auto t = build_ball({4, 1});
  const auto d = gen_dimer_cover(t, 7);
  CHECK(d.size() == 1);
  CHECK(d.degree(Tree::root()) == 1);

  auto t3 = build_ball({4, 3});
  const auto d3 = gen_dimer_cover(t3, 42);
  const std::size_t interior = t3->count_up_to(2);
  std::size_t covered = 0;
  for (VertexId v = 0; v < interior; ++v) covered += d3.degree(v) == 1;
  CHECK(covered == interior);  // coverage fraction 1.0
  CHECK(d3.d_max() == 1);
  CHECK(validate_cover(d3, CoverKind::kDimer).pass);
}

TEST_CASE("dimer cover: deterministic and profile-consistent across seeds") {
  auto t = build_ball({3, 4});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto a = gen_dimer_cover(t, seed);
    const auto b = gen_dimer_cover(t, seed);
    CHECK(same_members(a, b));
    check_profile_consistency(a);
    CHECK(a.d_max() <= 1);
  }
  CHECK(!same_members(gen_dimer_cover(t, 1), gen_dimer_cover(t, 2)));
}

TEST_CASE("every generator: 50-seed determinism and profile sweep") {
  auto t = build_ball({4, 4});
  using Gen = std::function<EdgeSet(std::uint64_t)>;
  const auto primary = gen_dimer_cover(t, 1);
  const std::vector<std::pair<const char*, Gen>> gens{
      {"dimer", [&](std::uint64_t s) { return gen_dimer_cover(t, s); }},
      {"secondary", [&](std::uint64_t s) { return gen_secondary_dimer(t, primary, s); }},
      {"monomer-dimer", [&](std::uint64_t s) { return gen_monomer_dimer(t, s); }},
      {"path", [&](std::uint64_t s) { return gen_path_cover(t, s); }},
      {"random", [&](std::uint64_t s) { return gen_random_sparse(t, 2, 0.4, s); }},
  };
  for (const auto& [name, gen] : gens) {
    INFO(name);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto a = gen(seed);
      CHECK(same_members(a, gen(seed)));
      check_profile_consistency(a);
    }
  }
}

TEST_CASE("dimer restriction is stable as the ball deepens") {
  // same seed on a deeper ball must restrict to the shallow cover
  auto shallow = build_ball({3, 3});
  auto deep = build_ball({3, 5});
  const auto ds = gen_dimer_cover(shallow, 9);
  const auto dd = gen_dimer_cover(deep, 9);
  for (EdgeId e = 0; e < shallow->edge_count(); ++e) CHECK(ds.contains(e) == dd.contains(e));
}

TEST_CASE("secondary dimer cover satisfies both incidence conditions") {
  auto t = build_ball({4, 4});
  const auto primary = gen_dimer_cover(t, 3);
  const auto secondary = gen_secondary_dimer(t, primary, 5);
  check_profile_consistency(secondary);

  // disjoint from the primary
  for (EdgeId e : secondary.edges()) CHECK(!primary.contains(e));

  // every member joins exactly two distinct dimers
  for (EdgeId e : secondary.edges()) {
    const VertexId u = t->edge_parent(e), v = t->edge_child(e);
    CHECK(primary.degree(u) == 1);
    CHECK(primary.degree(v) == 1);
  }

  // interior incidence counts
  const std::size_t interior = t->count_up_to(3);
  for (VertexId v = 0; v < interior; ++v) CHECK(secondary.degree(v) <= 1);

  const auto report = validate_cover(secondary, CoverKind::kSecondaryDimer, &primary);
  for (const auto& c : report.checks) {
    INFO(c.name);
    CHECK(c.pass);
  }
  CHECK(report.pass);

  // determinism
  CHECK(same_members(secondary, gen_secondary_dimer(t, primary, 5)));
}

TEST_CASE("secondary dimer requires the primary validator context") {
  auto t = build_ball({4, 3});
  const auto primary = gen_dimer_cover(t, 1);
  const auto secondary = gen_secondary_dimer(t, primary, 1);
  CHECK(!validate_cover(secondary, CoverKind::kSecondaryDimer, nullptr).pass);
}

TEST_CASE("secondary dimer reports the offending dimer when the pairing is impossible") {
  // a lone interior dimer has no neighbor dimer to pair with
  auto t = build_ball({4, 3});
  const EdgeId isolated = 0;  // root edge: both endpoints interior
  const auto primary = EdgeSet::single_bond(t, isolated);
  try {
    gen_secondary_dimer(t, primary, 1);
    FAIL("expected a structured pairing failure");
  } catch (const SecondaryDimerError& e) {
    CHECK(e.dimer_edge == isolated);
  }
}

TEST_CASE("monomer-dimer cover: spacing and domination") {
  for (int depth : {3, 4, 5, 6}) {
    auto t = build_ball({4, depth});
    const auto d = gen_monomer_dimer(t, 11);
    check_profile_consistency(d);
    CHECK(d.d_max() == 1);

    const auto edges = d.edges();
    for (std::size_t i = 0; i < edges.size(); ++i)
      for (std::size_t j = i + 1; j < std::min(edges.size(), i + 40); ++j)
        CHECK(oracle::bond_distance(*t, edges[i], edges[j]) >= 2);

    // interior domination, checked against plain distance arithmetic
    std::vector<std::uint8_t> endpoint(t->vertex_count(), 0);
    for (EdgeId e : edges) {
      endpoint[t->edge_parent(e)] = 1;
      endpoint[t->edge_child(e)] = 1;
    }
    const std::size_t interior = t->count_up_to(depth - 1);
    for (VertexId v = 0; v < interior; ++v) {
      bool near = endpoint[v];
      for (VertexId w : t->neighbors(v)) near = near || endpoint[w];
      CHECK(near);
    }

    const auto report = validate_cover(d, CoverKind::kMonomerDimer);
    CHECK(report.pass);
  }
  CHECK_THROWS_AS(gen_monomer_dimer(build_ball({4, 2}), 1), std::invalid_argument);
}

TEST_CASE("path cover: interior degree exactly two, members split into paths") {
  auto t = build_ball({6, 3});
  const auto d = gen_path_cover(t, 13);
  check_profile_consistency(d);
  CHECK(d.d_max() == 2);
  CHECK(admissible(d.d_max(), 6));

  const std::size_t interior = t->count_up_to(2);
  for (VertexId v = 0; v < interior; ++v) CHECK(d.degree(v) == 2);
  for (VertexId v = 0; v < t->vertex_count(); ++v) CHECK(d.degree(v) <= 2);  // simple paths

  CHECK(validate_cover(d, CoverKind::kPathCover).pass);
  CHECK_THROWS_AS(gen_path_cover(build_ball({1, 3}), 1), std::invalid_argument);
}

TEST_CASE("random sparse set respects the degree cap") {
  auto t = build_ball({4, 4});
  CHECK(gen_random_sparse(t, 3, 0.0, 1).size() == 0);
  CHECK(gen_random_sparse(t, 0, 0.9, 1).size() == 0);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (int cap : {1, 2}) {
      const auto d = gen_random_sparse(t, cap, 0.4, seed);
      check_profile_consistency(d);
      CHECK(d.d_max() <= cap);
      CHECK(same_members(d, gen_random_sparse(t, cap, 0.4, seed)));
    }
  }
  CHECK_THROWS_AS(gen_random_sparse(t, 1, 1.5, 1), std::invalid_argument);
}

TEST_CASE("validators flag broken covers with the offending vertices") {
  auto t = build_ball({4, 3});
  CHECK(validate_cover(EdgeSet::empty(t), CoverKind::kEmpty).pass);
  CHECK(!validate_cover(EdgeSet::single_bond(t, 0), CoverKind::kEmpty).pass);

  // a single bond at the root is nowhere near a dimer cover on depth >= 2
  const auto stub = EdgeSet::single_bond(t, 0);
  const auto report = validate_cover(stub, CoverKind::kDimer);
  CHECK(!report.pass);
  bool found_uncovered = false;
  for (const auto& c : report.checks)
    if (c.name == "interior-covered-once") {
      found_uncovered = true;
      CHECK(!c.pass);
      CHECK(c.bad_vertices.size() == t->count_up_to(2) - 2);  // all interior but the matched pair
    }
  CHECK(found_uncovered);

  CHECK(validate_cover(stub, CoverKind::kSingleBond).pass);
  CHECK(validate_cover(stub, CoverKind::kFiniteSet).pass);
}

TEST_CASE("edge set json round-trip") {
  auto t = build_ball({4, 3});
  const auto d = gen_dimer_cover(t, 21);
  const std::string text = edge_set_to_json(d);
  const auto back = edge_set_from_json(text);
  CHECK(back.kind() == CoverKind::kDimer);
  CHECK(back.seed() == 21);
  CHECK(back.edges() == d.edges());
  CHECK(edge_set_to_json(back) == text);

  // reuse of an existing tree with a shape mismatch is rejected
  CHECK_THROWS_AS(edge_set_from_json(text, build_ball({4, 2})), std::invalid_argument);
}

TEST_CASE("local pattern keys separate different environments") {
  auto t = build_ball({4, 4});
  const auto d = gen_dimer_cover(t, 2);
  const auto empty = EdgeSet::empty(t);
  // with no members every deep vertex looks the same
  const VertexId a = t->first_child(Tree::root());
  const VertexId b = a + 1;
  CHECK(local_pattern_key(empty, a, 2) == local_pattern_key(empty, b, 2));
  // a bond endpoint differs from a dominated neighbor that carries no bond
  const auto md = gen_monomer_dimer(t, 2);
  const EdgeId e = md.edges().front();
  const VertexId endpoint = t->edge_parent(e);
  VertexId bare = kNoVertex;
  for (VertexId w : t->neighbors(endpoint))
    if (md.degree(w) == 0) bare = w;
  REQUIRE(bare != kNoVertex);
  CHECK(local_pattern_key(md, endpoint, 1) != local_pattern_key(md, bare, 1));
  // covered dimer vertices in an empty-context radius share a key
  CHECK(local_pattern_key(d, t->edge_parent(d.edges().front()), 1) ==
        local_pattern_key(d, t->edge_child(d.edges().front()), 1));
}
