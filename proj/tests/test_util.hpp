#pragma once

#include <memory>
#include <queue>
#include <vector>

#include "emanet/ideal.hpp"
#include "emanet/scenario.hpp"

namespace emanet::testing {

inline DenseGraph chain_graph(int n) {
  DenseGraph g(static_cast<std::size_t>(n));
  for (int i = 0; i + 1 < n; ++i) {
    g[i].push_back(i + 1);
    g[i + 1].push_back(i);
  }
  return g;
}

// Every node in a ring is someone's MPR, so every node sends TCs.
inline DenseGraph ring_graph(int n) {
  DenseGraph g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    g[i].push_back(j);
    g[j].push_back(i);
  }
  return g;
}

inline DenseGraph complete_graph(int n) {
  DenseGraph g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) g[i].push_back(j);
    }
  }
  return g;
}

/// Undirected G(n, p) from a seeded stream.
inline DenseGraph random_graph(int n, double p, std::uint64_t seed) {
  RandomStream rng(seed);
  DenseGraph g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform() < p) {
        g[i].push_back(j);
        g[j].push_back(i);
      }
    }
  }
  return g;
}

/// Plain textbook BFS, kept separate from the library's helper.
inline std::vector<int> reference_hops(const DenseGraph& g, NodeId s) {
  std::vector<int> d(g.size(), -1);
  std::queue<NodeId> q;
  d[static_cast<std::size_t>(s)] = 0;
  q.push(s);
  while (!q.empty()) {
    const auto u = q.front();
    q.pop();
    for (auto v : g[static_cast<std::size_t>(u)]) {
      if (d[static_cast<std::size_t>(v)] < 0) {
        d[static_cast<std::size_t>(v)] = d[static_cast<std::size_t>(u)] + 1;
        q.push(v);
      }
    }
  }
  return d;
}

template <class Agent, class Params>
void install(IdealNetwork& net, const Params& params) {
  for (NodeId v = 0; v < static_cast<NodeId>(net.size()); ++v) {
    net.set_agent(v, std::make_unique<Agent>(net.context(v), params));
  }
}

template <class Agent>
Agent* agent_at(IdealNetwork& net, NodeId v) {
  return dynamic_cast<Agent*>(net.agent(v));
}

}  // namespace emanet::testing
