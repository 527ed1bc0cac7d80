#pragma once

#include <cstddef>
#include <vector>

#include "vcomp/rational.hpp"

namespace vcomp {

struct MatchingEdge {
  std::size_t left;
  std::size_t right;
  Rational weight;
};

struct MatchingResult {
  Rational weight;
  /// For each right vertex, the matched left vertex or -1.
  std::vector<long> right_to_left;
};

/// Maximum-weight (not necessarily perfect) bipartite matching by successive
/// shortest augmenting paths over exact weights. Edges with nonpositive
/// weight never improve the objective and are ignored.
MatchingResult max_weight_matching(std::size_t num_left, std::size_t num_right, const std::vector<MatchingEdge>& edges);

}  // namespace vcomp
