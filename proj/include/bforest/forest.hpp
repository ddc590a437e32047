#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bforest/types.hpp"

namespace bforest {

using NodeId = std::size_t;

struct BehaviorNode {
  Symbol symbol = 0;
  // Number of insertions that traversed the edge from the parent. Zero for roots.
  std::uint64_t edge_weight_in = 0;
  // Number of behaviors that ended at this node.
  std::uint64_t terminal_count = 0;
  std::map<Symbol, NodeId> children;
};

struct InsertionReceipt {
  bool created_new_node = false;
  std::uint64_t prior_terminal_count = 0;
  // Id of the node the path ends at; stable for the lifetime of the forest.
  NodeId path_id = 0;
};

struct TerminalPath {
  std::vector<Symbol> path;
  std::uint64_t terminal_count = 0;
  NodeId node = 0;
};

// Prefix trees of behavior paths keyed by their first (root) symbol. Nodes
// live in an arena so the forest is an ordinary copyable value.
class BehaviorForest {
 public:
  // Requires path.size() >= 2.
  InsertionReceipt insert(std::span<const Symbol> path);

  const BehaviorNode& node(NodeId id) const { return nodes_.at(id); }
  const std::map<Symbol, NodeId>& roots() const { return roots_; }
  std::optional<NodeId> find(std::span<const Symbol> path) const;

  std::uint64_t total_insertions() const { return total_insertions_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const;
  // Nodes with terminal_count > 0.
  std::size_t distinct_paths() const;
  // Sorted lexicographically by path.
  std::vector<TerminalPath> terminal_paths() const;
  std::vector<Symbol> path_of(NodeId id) const;

  bool empty() const { return roots_.empty(); }

  // Structural equality: same trees with the same counts, regardless of node ids.
  bool same_structure(const BehaviorForest& other) const;

  // Low-level building blocks used by restore().
  NodeId add_root(Symbol symbol);
  NodeId add_child(NodeId parent, Symbol symbol, std::uint64_t edge_weight);
  void set_terminal_count(NodeId id, std::uint64_t count);

 private:
  NodeId new_node(Symbol symbol);

  std::vector<BehaviorNode> nodes_;
  std::vector<NodeId> parents_;
  std::map<Symbol, NodeId> roots_;
  std::uint64_t total_insertions_ = 0;
};

inline bool operator==(const BehaviorForest& a, const BehaviorForest& b) {
  return a.same_structure(b);
}

inline constexpr int kSnapshotVersion = 1;

// Snapshot document: {version, config_hash, roots: [{symbol, node}], total_insertions}
// where node = {symbol, terminal_count, children: [{edge_weight, node}]}.
nlohmann::json forest_snapshot(const BehaviorForest& forest, const std::string& config_hash);

// Throws IoError on a malformed document and ConfigError when `expected_hash`
// is given and differs from the stored hash.
BehaviorForest forest_restore(const nlohmann::json& doc,
                              const std::optional<std::string>& expected_hash = std::nullopt);

std::string forest_to_dot(const BehaviorForest& forest);

// "1-2-3-4"
std::string path_to_string(std::span<const Symbol> path);
// Inverse of path_to_string; throws IoError on malformed text.
std::vector<Symbol> path_from_string(const std::string& text);

}  // namespace bforest
