#include "bethe/json_io.hpp"

#include <cstdio>

#include <json.hpp>

namespace bethe {

namespace {

using nlohmann::json;

json address_json(const Tree& t, VertexId v) { return json(t.address(v)); }

VertexId vertex_from_address(const Tree& t, const json& addr, const char* what) {
  if (!addr.is_array()) throw std::invalid_argument(std::string(what) + ": address must be an array");
  std::vector<int> a;
  for (const auto& x : addr) a.push_back(x.get<int>());
  const auto v = t.vertex_at(a);
  if (!v) throw std::invalid_argument(std::string(what) + ": address outside the tree");
  return *v;
}

json edges_json(const Tree& t, const std::vector<EdgeId>& edges) {
  json out = json::array();
  for (EdgeId e : edges)
    out.push_back(json::array({address_json(t, t.edge_parent(e)), address_json(t, t.edge_child(e))}));
  return out;
}

EdgeId edge_from_json(const Tree& t, const json& pair, const char* what) {
  if (!pair.is_array() || pair.size() != 2)
    throw std::invalid_argument(std::string(what) + ": edge must be an [parent, child] pair");
  const VertexId p = vertex_from_address(t, pair[0], what);
  const VertexId c = vertex_from_address(t, pair[1], what);
  if (c == Tree::root() || t.parent(c) != p)
    throw std::invalid_argument(std::string(what) + ": pair is not a parent/child edge");
  return t.parent_edge(c);
}

json parse(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw std::invalid_argument(std::string(what) + ": malformed JSON");
  return j;
}

std::shared_ptr<const Tree> tree_for(const json& j, std::shared_ptr<const Tree> tree,
                                     std::size_t cap, const char* what) {
  const int k = j.at("k").get<int>();
  const int depth = j.at("depth").get<int>();
  if (tree) {
    if (tree->k() != k || tree->depth() != depth)
      throw std::invalid_argument(std::string(what) + ": tree shape mismatch");
    return tree;
  }
  return build_ball({k, depth}, cap);
}

}  // namespace

std::string tree_to_json(const Tree& t) {
  std::vector<EdgeId> all(t.edge_count());
  for (EdgeId e = 0; e < t.edge_count(); ++e) all[e] = e;
  json j{{"k", t.k()}, {"depth", t.depth()}, {"edges", edges_json(t, all)}};
  return j.dump(2) + "\n";
}

std::shared_ptr<const Tree> tree_from_json(const std::string& text, std::size_t vertex_cap) {
  const json j = parse(text, "tree");
  auto tree = build_ball({j.at("k").get<int>(), j.at("depth").get<int>()}, vertex_cap);
  if (j.contains("edges")) {
    if (j["edges"].size() != tree->edge_count())
      throw std::invalid_argument("tree: edge list does not match the ball");
    for (const auto& pair : j["edges"]) edge_from_json(*tree, pair, "tree");
  }
  return tree;
}

std::string edge_set_to_json(const EdgeSet& d) {
  json j{{"kind", cover_kind_name(d.kind())},
         {"seed", d.seed()},
         {"k", d.tree().k()},
         {"depth", d.tree().depth()},
         {"edges", edges_json(d.tree(), d.edges())}};
  return j.dump(2) + "\n";
}

EdgeSet edge_set_from_json(const std::string& text, std::shared_ptr<const Tree> tree,
                           std::size_t vertex_cap) {
  const json j = parse(text, "edge set");
  const auto kind = cover_kind_from_name(j.at("kind").get<std::string>());
  if (!kind) throw std::invalid_argument("edge set: unknown kind '" +
                                         j.at("kind").get<std::string>() + "'");
  auto t = tree_for(j, std::move(tree), vertex_cap, "edge set");
  std::vector<EdgeId> edges;
  for (const auto& pair : j.at("edges")) edges.push_back(edge_from_json(*t, pair, "edge set"));
  return EdgeSet::from_edges(std::move(t), edges, *kind,
                             j.value("seed", std::uint64_t{0}));
}

std::string spin_config_to_json(const SpinConfig& sigma) {
  json spins = json::array();
  for (std::int8_t s : sigma.spins()) spins.push_back(static_cast<int>(s));
  json j{{"treeRef", {{"k", sigma.tree().k()}, {"depth", sigma.tree().depth()}}},
         {"spins", std::move(spins)}};
  return j.dump(2) + "\n";
}

SpinConfig spin_config_from_json(const std::string& text, std::shared_ptr<const Tree> tree,
                                 std::size_t vertex_cap) {
  const json j = parse(text, "spin config");
  auto t = tree_for(j.at("treeRef"), std::move(tree), vertex_cap, "spin config");
  std::vector<std::int8_t> spins;
  for (const auto& s : j.at("spins")) spins.push_back(static_cast<std::int8_t>(s.get<int>()));
  return SpinConfig(std::move(t), std::move(spins));
}

std::string format_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace bethe
