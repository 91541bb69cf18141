#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <utility>
#include <vector>

#include "lifemax/errors.hpp"
#include "lifemax/network.hpp"

namespace lifemax {

/// Spanning tree with every edge (transmitter, receiver) oriented away
/// from the root; edges kept sorted by receiver id.
struct OrientedTree {
  int root = 0;
  std::vector<std::pair<int, int>> edges;

  bool operator==(const OrientedTree& o) const { return root == o.root && edges == o.edges; }
  bool operator<(const OrientedTree& o) const {
    return root != o.root ? root < o.root : edges < o.edges;
  }

  /// Transmitters and their receivers, i.e. the out-adjacency.
  std::map<int, std::vector<int>> out_edges() const {
    std::map<int, std::vector<int>> adj;
    for (const auto& [i, j] : edges) adj[i].push_back(j);
    return adj;
  }
};

/// Checks the spanning/orientation invariants against a node set.
inline void validate_tree(const OrientedTree& t, const std::vector<int>& node_ids) {
  const std::set<int> nodes(node_ids.begin(), node_ids.end());
  if (!nodes.count(t.root)) throw InvariantError("tree: root not a network node");
  if (t.edges.size() + 1 != nodes.size())
    throw InvariantError("tree: edge count must be node count - 1");
  std::map<int, int> parent;
  for (const auto& [i, j] : t.edges) {
    if (!nodes.count(i) || !nodes.count(j)) throw InvariantError("tree: edge endpoint not a node");
    if (j == t.root) throw InvariantError("tree: root has an incoming edge");
    if (!parent.emplace(j, i).second)
      throw InvariantError("tree: node " + std::to_string(j) + " has two incoming edges");
  }
  // every non-root node must reach the root through the parent chain
  for (int v : nodes) {
    if (v == t.root) continue;
    int cur = v;
    std::size_t hops = 0;
    while (cur != t.root) {
      auto it = parent.find(cur);
      if (it == parent.end()) throw InvariantError("tree: node disconnected from root");
      cur = it->second;
      if (++hops > nodes.size()) throw InvariantError("tree: cycle detected");
    }
  }
}

namespace detail {

/// Decode a Pruefer sequence over `labels` into parent-oriented edges.
inline OrientedTree pruefer_decode(const std::vector<int>& labels,
                                   const std::vector<int>& seq, int root) {
  const int n = static_cast<int>(labels.size());
  std::map<int, int> degree;
  for (int v : labels) degree[v] = 1;
  for (int v : seq) ++degree[v];

  std::vector<std::pair<int, int>> undirected;
  std::priority_queue<int, std::vector<int>, std::greater<int>> leaves;
  for (int v : labels)
    if (degree[v] == 1) leaves.push(v);
  for (int v : seq) {
    const int leaf = leaves.top();
    leaves.pop();
    undirected.emplace_back(leaf, v);
    if (--degree[v] == 1) leaves.push(v);
  }
  const int a = leaves.top();
  leaves.pop();
  const int b = leaves.top();
  undirected.emplace_back(a, b);

  // orient away from the root
  std::map<int, std::vector<int>> adj;
  for (const auto& [x, y] : undirected) {
    adj[x].push_back(y);
    adj[y].push_back(x);
  }
  OrientedTree t;
  t.root = root;
  std::queue<int> bfs;
  std::set<int> seen{root};
  bfs.push(root);
  while (!bfs.empty()) {
    const int u = bfs.front();
    bfs.pop();
    for (int v : adj[u])
      if (seen.insert(v).second) {
        t.edges.emplace_back(u, v);
        bfs.push(v);
      }
  }
  std::sort(t.edges.begin(), t.edges.end(),
            [](const auto& l, const auto& r) { return l.second < r.second; });
  return t;
}

}  // namespace detail

/// Default cap on complete-graph tree enumeration: 8^6 = 262144 trees.
inline constexpr int kTreeEnumerationCap = 8;

/// All N^(N-2) spanning trees of the complete graph on the network's nodes,
/// oriented away from `root`, in lexicographic Pruefer order. Deterministic.
inline std::vector<OrientedTree> enumerate_spanning_trees(const Network& net, int root,
                                                          int cap = kTreeEnumerationCap) {
  const int n = net.size();
  if (n < 2) throw DomainError("enumerate_spanning_trees: need at least two nodes");
  if (!net.has(root)) throw DomainError("enumerate_spanning_trees: unknown root");
  if (n > cap)
    throw ResourceLimitError("enumerate_spanning_trees: N = " + std::to_string(n) +
                             " exceeds the enumeration cap " + std::to_string(cap));

  std::vector<int> labels = net.ids();
  std::sort(labels.begin(), labels.end());

  const int seq_len = n - 2;
  std::uint64_t count = 1;
  for (int k = 0; k < seq_len; ++k) count *= static_cast<std::uint64_t>(n);

  std::vector<OrientedTree> trees;
  trees.reserve(count);
  std::vector<int> idx(seq_len, 0);
  std::vector<int> seq(seq_len);
  for (std::uint64_t c = 0; c < count; ++c) {
    for (int k = 0; k < seq_len; ++k) seq[k] = labels[idx[k]];
    trees.push_back(detail::pruefer_decode(labels, seq, root));
    for (int k = seq_len - 1; k >= 0; --k) {
      if (++idx[k] < n) break;
      idx[k] = 0;
    }
  }
  return trees;
}

/// Chain tree k -> k+1 -> ... or k -> k-1 -> ... for a boundary source of a
/// line network with nodes 1..N.
inline OrientedTree line_chain_tree(int n, int k) {
  if (n < 1) throw DomainError("line_chain_tree: need n >= 1");
  if (k != 1 && k != n) throw DomainError("line_chain_tree: source must be a boundary node");
  OrientedTree t;
  t.root = k;
  if (k == 1)
    for (int v = 1; v < n; ++v) t.edges.emplace_back(v, v + 1);
  else
    for (int v = n; v > 1; --v) t.edges.emplace_back(v, v - 1);
  std::sort(t.edges.begin(), t.edges.end(),
            [](const auto& l, const auto& r) { return l.second < r.second; });
  return t;
}

/// The N broadcast trees that carry the optimal line-network solution for an
/// internal source k: tree r relays down one side of the line and lets node r
/// bridge to the other side (r = k is the plain double chain).
inline std::vector<OrientedTree> line_broadcast_trees(int n, int k) {
  if (n < 3) throw DomainError("line_broadcast_trees: need n >= 3");
  if (k <= 1 || k >= n)
    throw DomainError("line_broadcast_trees: source " + std::to_string(k) +
                      " is a boundary node; use the chain solution");
  std::vector<OrientedTree> trees;
  trees.reserve(n);
  for (int r = 1; r <= n; ++r) {
    OrientedTree t;
    t.root = k;
    if (r < k) {
      for (int v = k; v > 1; --v) t.edges.emplace_back(v, v - 1);   // k -> ... -> 1
      t.edges.emplace_back(r, k + 1);                                // bridge
      for (int v = k + 1; v < n; ++v) t.edges.emplace_back(v, v + 1);
    } else if (r == k) {
      for (int v = k; v > 1; --v) t.edges.emplace_back(v, v - 1);
      for (int v = k; v < n; ++v) t.edges.emplace_back(v, v + 1);
    } else {
      for (int v = k; v < n; ++v) t.edges.emplace_back(v, v + 1);   // k -> ... -> n
      t.edges.emplace_back(r, k - 1);                                // bridge
      for (int v = k - 1; v > 1; --v) t.edges.emplace_back(v, v - 1);
    }
    std::sort(t.edges.begin(), t.edges.end(),
              [](const auto& l, const auto& rh) { return l.second < rh.second; });
    trees.push_back(std::move(t));
  }
  return trees;
}

}  // namespace lifemax
