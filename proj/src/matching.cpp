#include "vcomp/matching.hpp"

#include <optional>

namespace vcomp {
namespace {

struct Arc {
  std::size_t to;
  std::size_t rev;
  int cap;
  Rational cost;
};

class FlowGraph {
public:
  explicit FlowGraph(std::size_t n) : adj_(n) {}

  void add(std::size_t from, std::size_t to, const Rational& cost) {
    adj_[from].push_back({to, adj_[to].size(), 1, cost});
    adj_[to].push_back({from, adj_[from].size() - 1, 0, -cost});
  }

  /// Bellman-Ford from source; returns cost to sink and the predecessor arcs.
  std::optional<Rational> shortest(std::size_t source, std::size_t sink,
                                   std::vector<std::pair<std::size_t, std::size_t>>& pred) const {
    const std::size_t n = adj_.size();
    std::vector<std::optional<Rational>> dist(n);
    pred.assign(n, {SIZE_MAX, SIZE_MAX});
    dist[source] = Rational{0};
    for (std::size_t round = 0; round + 1 < n; ++round) {
      bool changed = false;
      for (std::size_t u = 0; u < n; ++u) {
        if (!dist[u]) continue;
        for (std::size_t k = 0; k < adj_[u].size(); ++k) {
          const Arc& a = adj_[u][k];
          if (a.cap <= 0) continue;
          Rational cand = *dist[u] + a.cost;
          if (!dist[a.to] || cand < *dist[a.to]) {
            dist[a.to] = cand;
            pred[a.to] = {u, k};
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    return dist[sink];
  }

  void augment(std::size_t source, std::size_t sink, const std::vector<std::pair<std::size_t, std::size_t>>& pred) {
    for (std::size_t v = sink; v != source;) {
      auto [u, k] = pred[v];
      Arc& a = adj_[u][k];
      a.cap -= 1;
      adj_[a.to][a.rev].cap += 1;
      v = u;
    }
  }

  const std::vector<Arc>& arcs(std::size_t u) const { return adj_[u]; }

private:
  std::vector<std::vector<Arc>> adj_;
};

}  // namespace

MatchingResult max_weight_matching(std::size_t num_left, std::size_t num_right,
                                   const std::vector<MatchingEdge>& edges) {
  // Node layout: source, left vertices, right vertices, sink.
  const std::size_t source = 0;
  const std::size_t sink = num_left + num_right + 1;
  FlowGraph g(num_left + num_right + 2);
  for (std::size_t l = 0; l < num_left; ++l) g.add(source, 1 + l, Rational{0});
  for (std::size_t r = 0; r < num_right; ++r) g.add(1 + num_left + r, sink, Rational{0});
  for (const auto& e : edges) {
    if (e.weight.is_zero() || e.weight.is_negative()) continue;
    g.add(1 + e.left, 1 + num_left + e.right, -e.weight);
  }

  MatchingResult result;
  std::vector<std::pair<std::size_t, std::size_t>> pred;
  while (true) {
    auto cost = g.shortest(source, sink, pred);
    if (!cost || !cost->is_negative()) break;
    g.augment(source, sink, pred);
    result.weight -= *cost;
  }

  result.right_to_left.assign(num_right, -1);
  for (std::size_t l = 0; l < num_left; ++l) {
    for (const Arc& a : g.arcs(1 + l)) {
      if (a.to > num_left && a.to <= num_left + num_right && a.cap == 0 && a.cost.is_negative()) {
        result.right_to_left[a.to - 1 - num_left] = static_cast<long>(l);
      }
    }
  }
  return result;
}

}  // namespace vcomp
