#include "bforest/forest.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "bforest/errors.hpp"

namespace bforest {

NodeId BehaviorForest::new_node(Symbol symbol) {
  nodes_.push_back(BehaviorNode{symbol, 0, 0, {}});
  parents_.push_back(static_cast<NodeId>(-1));
  return nodes_.size() - 1;
}

NodeId BehaviorForest::add_root(Symbol symbol) {
  if (roots_.contains(symbol)) throw std::invalid_argument("duplicate root symbol");
  const NodeId id = new_node(symbol);
  roots_.emplace(symbol, id);
  return id;
}

NodeId BehaviorForest::add_child(NodeId parent, Symbol symbol, std::uint64_t edge_weight) {
  if (parent >= nodes_.size()) throw std::out_of_range("add_child: unknown parent");
  if (nodes_[parent].children.contains(symbol)) throw std::invalid_argument("duplicate child symbol");
  const NodeId id = new_node(symbol);
  nodes_[id].edge_weight_in = edge_weight;
  parents_[id] = parent;
  nodes_[parent].children.emplace(symbol, id);
  return id;
}

void BehaviorForest::set_terminal_count(NodeId id, std::uint64_t count) {
  auto& node = nodes_.at(id);
  total_insertions_ = total_insertions_ - node.terminal_count + count;
  node.terminal_count = count;
}

InsertionReceipt BehaviorForest::insert(std::span<const Symbol> path) {
  if (path.size() < 2) throw std::invalid_argument("behavior path needs at least two symbols");
  InsertionReceipt receipt;

  NodeId current;
  if (auto it = roots_.find(path[0]); it != roots_.end()) {
    current = it->second;
  } else {
    current = add_root(path[0]);
    receipt.created_new_node = true;
  }

  for (std::size_t i = 1; i < path.size(); ++i) {
    auto& children = nodes_[current].children;
    if (auto it = children.find(path[i]); it != children.end()) {
      current = it->second;
    } else {
      current = add_child(current, path[i], 0);
      receipt.created_new_node = true;
    }
    ++nodes_[current].edge_weight_in;
  }

  receipt.prior_terminal_count = nodes_[current].terminal_count;
  receipt.path_id = current;
  ++nodes_[current].terminal_count;
  ++total_insertions_;
  return receipt;
}

std::optional<NodeId> BehaviorForest::find(std::span<const Symbol> path) const {
  if (path.empty()) return std::nullopt;
  auto it = roots_.find(path[0]);
  if (it == roots_.end()) return std::nullopt;
  NodeId current = it->second;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const auto& children = nodes_[current].children;
    auto child = children.find(path[i]);
    if (child == children.end()) return std::nullopt;
    current = child->second;
  }
  return current;
}

std::size_t BehaviorForest::edge_count() const { return nodes_.size() - roots_.size(); }

std::size_t BehaviorForest::distinct_paths() const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [](const BehaviorNode& n) { return n.terminal_count > 0; }));
}

std::vector<Symbol> BehaviorForest::path_of(NodeId id) const {
  std::vector<Symbol> path;
  for (NodeId n = id; n != static_cast<NodeId>(-1); n = parents_.at(n)) {
    path.push_back(nodes_[n].symbol);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<TerminalPath> BehaviorForest::terminal_paths() const {
  std::vector<TerminalPath> result;
  std::vector<Symbol> path;
  std::function<void(NodeId)> walk = [&](NodeId id) {
    const auto& node = nodes_[id];
    path.push_back(node.symbol);
    if (node.terminal_count > 0) result.push_back({path, node.terminal_count, id});
    for (const auto& [symbol, child] : node.children) walk(child);
    path.pop_back();
  };
  for (const auto& [symbol, root] : roots_) walk(root);
  return result;
}

bool BehaviorForest::same_structure(const BehaviorForest& other) const {
  if (total_insertions_ != other.total_insertions_ || nodes_.size() != other.nodes_.size() ||
      roots_.size() != other.roots_.size()) {
    return false;
  }
  std::function<bool(NodeId, NodeId)> equal = [&](NodeId a, NodeId b) {
    const auto& x = nodes_[a];
    const auto& y = other.nodes_[b];
    if (x.symbol != y.symbol || x.edge_weight_in != y.edge_weight_in ||
        x.terminal_count != y.terminal_count || x.children.size() != y.children.size()) {
      return false;
    }
    auto ia = x.children.begin();
    auto ib = y.children.begin();
    for (; ia != x.children.end(); ++ia, ++ib) {
      if (ia->first != ib->first || !equal(ia->second, ib->second)) return false;
    }
    return true;
  };
  auto ia = roots_.begin();
  auto ib = other.roots_.begin();
  for (; ia != roots_.end(); ++ia, ++ib) {
    if (ia->first != ib->first || !equal(ia->second, ib->second)) return false;
  }
  return true;
}

namespace {

nlohmann::json node_to_json(const BehaviorForest& forest, NodeId id) {
  const auto& node = forest.node(id);
  nlohmann::json children = nlohmann::json::array();
  for (const auto& [symbol, child] : node.children) {
    children.push_back({{"edge_weight", forest.node(child).edge_weight_in},
                        {"node", node_to_json(forest, child)}});
  }
  return {{"symbol", node.symbol}, {"terminal_count", node.terminal_count}, {"children", children}};
}

template <class T>
T required(const nlohmann::json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw IoError(std::string("snapshot: missing field '") + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("snapshot: bad field '") + key + "': " + e.what());
  }
}

void restore_children(BehaviorForest& forest, NodeId parent, const nlohmann::json& node) {
  const auto& children = node.contains("children") ? node.at("children") : nlohmann::json::array();
  if (!children.is_array()) throw IoError("snapshot: 'children' must be an array");
  for (const auto& entry : children) {
    const auto weight = required<std::uint64_t>(entry, "edge_weight");
    if (!entry.contains("node")) throw IoError("snapshot: child without 'node'");
    const auto& child = entry.at("node");
    NodeId id;
    try {
      id = forest.add_child(parent, required<Symbol>(child, "symbol"), weight);
    } catch (const std::invalid_argument& e) {
      throw IoError(std::string("snapshot: ") + e.what());
    }
    forest.set_terminal_count(id, required<std::uint64_t>(child, "terminal_count"));
    restore_children(forest, id, child);
  }
}

}  // namespace

nlohmann::json forest_snapshot(const BehaviorForest& forest, const std::string& config_hash) {
  nlohmann::json roots = nlohmann::json::array();
  for (const auto& [symbol, id] : forest.roots()) {
    roots.push_back({{"symbol", symbol}, {"node", node_to_json(forest, id)}});
  }
  return {{"version", kSnapshotVersion},
          {"config_hash", config_hash},
          {"roots", roots},
          {"total_insertions", forest.total_insertions()}};
}

BehaviorForest forest_restore(const nlohmann::json& doc, const std::optional<std::string>& expected_hash) {
  if (!doc.is_object()) throw IoError("snapshot: document must be an object");
  const auto version = required<int>(doc, "version");
  if (version != kSnapshotVersion) {
    throw IoError("snapshot: unsupported version " + std::to_string(version));
  }
  const auto hash = required<std::string>(doc, "config_hash");
  if (expected_hash && *expected_hash != hash) {
    throw ConfigError("snapshot was built with config " + hash + ", current config is " + *expected_hash);
  }
  if (!doc.contains("roots") || !doc.at("roots").is_array()) {
    throw IoError("snapshot: 'roots' must be an array");
  }

  BehaviorForest forest;
  for (const auto& entry : doc.at("roots")) {
    const auto symbol = required<Symbol>(entry, "symbol");
    if (!entry.contains("node")) throw IoError("snapshot: root without 'node'");
    const auto& node = entry.at("node");
    if (required<Symbol>(node, "symbol") != symbol) {
      throw IoError("snapshot: root symbol does not match its node");
    }
    NodeId id;
    try {
      id = forest.add_root(symbol);
    } catch (const std::invalid_argument& e) {
      throw IoError(std::string("snapshot: ") + e.what());
    }
    forest.set_terminal_count(id, required<std::uint64_t>(node, "terminal_count"));
    restore_children(forest, id, node);
  }
  if (required<std::uint64_t>(doc, "total_insertions") != forest.total_insertions()) {
    throw IoError("snapshot: total_insertions does not match the terminal counts");
  }
  return forest;
}

std::string forest_to_dot(const BehaviorForest& forest) {
  std::ostringstream out;
  out << "digraph BehaviorForest {\n";
  out << "  node [shape=box, style=rounded];\n";
  std::size_t counter = 0;
  std::function<std::size_t(NodeId)> emit = [&](NodeId id) {
    const std::size_t name = counter++;
    const auto& node = forest.node(id);
    out << "  n" << name << " [label=\"" << node.symbol << " [" << node.terminal_count << "]\"";
    if (node.terminal_count > 0) out << ", peripheries=2";
    out << "];\n";
    for (const auto& [symbol, child] : node.children) {
      const std::size_t child_name = emit(child);
      out << "  n" << name << " -> n" << child_name << " [label=\""
          << forest.node(child).edge_weight_in << "\"];\n";
    }
    return name;
  };
  for (const auto& [symbol, root] : forest.roots()) emit(root);
  out << "}\n";
  return out.str();
}

std::string path_to_string(std::span<const Symbol> path) {
  std::string s;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(path[i]);
  }
  return s;
}

std::vector<Symbol> path_from_string(const std::string& text) {
  std::vector<Symbol> path;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto dash = std::min(text.find('-', pos), text.size());
    const auto part = text.substr(pos, dash - pos);
    Symbol value = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size()) {
      throw IoError("malformed path '" + text + "'");
    }
    path.push_back(value);
    pos = dash + 1;
  }
  return path;
}

}  // namespace bforest
