#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace htqc {

struct WeightedEdge {
    int u;
    int v;
    std::int64_t weight;
};

// Exact maximum-weight matching (blossom algorithm, O(V^3)). Returns
// mate[v] = matched partner or -1. With max_cardinality the matching is
// maximum-weight among maximum-cardinality matchings.
std::vector<int> max_weight_matching(int n_vertices,
                                     const std::vector<WeightedEdge>& edges,
                                     bool max_cardinality);

// Exact minimum-weight perfect matching. Throws if no perfect matching
// exists. Weights must be nonnegative.
std::vector<std::pair<int, int>> min_weight_perfect_matching(
    int n_vertices, const std::vector<WeightedEdge>& edges);

}  // namespace htqc
