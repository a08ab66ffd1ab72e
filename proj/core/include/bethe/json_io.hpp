#pragma once

#include <memory>
#include <string>

#include "bethe/dsets.hpp"
#include "bethe/groundstate.hpp"
#include "bethe/tree.hpp"

namespace bethe {

// File formats (vertex addresses are arrays of child indices):
//   tree:     {"k", "depth", "edges": [[parentAddress, childAddress], ...]}
//   edge set: {"kind", "seed", "k", "depth", "edges": [[pAddr, cAddr], ...]}
//   spins:    {"treeRef": {"k", "depth"}, "spins": [±1 ...]}  (breadth-first)

std::string tree_to_json(const Tree& tree);
std::shared_ptr<const Tree> tree_from_json(const std::string& text,
                                           std::size_t vertex_cap = kDefaultVertexCap);

std::string edge_set_to_json(const EdgeSet& d);
EdgeSet edge_set_from_json(const std::string& text,
                           std::shared_ptr<const Tree> tree = nullptr,
                           std::size_t vertex_cap = kDefaultVertexCap);

std::string spin_config_to_json(const SpinConfig& sigma);
SpinConfig spin_config_from_json(const std::string& text,
                                 std::shared_ptr<const Tree> tree = nullptr,
                                 std::size_t vertex_cap = kDefaultVertexCap);

// 17-significant-digit fixed formatting for numbers that land in golden files
std::string format_g17(double x);

// FNV-1a 64 over bytes, hex; used for output manifests
std::string fnv1a64_hex(std::string_view bytes);

}  // namespace bethe
