#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "htqc/generation.hpp"
#include "htqc/lattice.hpp"

namespace htqc {

// Union-find over cells; cells sharing a missing qubit live in one
// supercell. Offsets track each cell's position relative to its root in
// unwrapped coordinates so a supercell that wraps the torus is detected.
class SupercellPartition {
  public:
    explicit SupercellPartition(const LatticeGraph& g,
                                const std::vector<char>& missing);

    int find(int cell) const;
    std::array<int, 3> offset_to_root(int cell) const;
    bool percolated() const { return percolated_; }

    // XOR parity per supercell root given per-cell parities.
    std::vector<char> fold_parities(const std::vector<char>& cell_parity) const;

  private:
    // find with path compression; offset_ holds position relative to parent.
    int find_mut(int cell);
    mutable std::vector<int> parent_;
    mutable std::vector<std::array<int, 3>> offset_;
    std::vector<int> rank_;
    bool percolated_ = false;
};

struct Syndrome {
    SupercellPartition partition;
    std::vector<char> cell_parity;      // per cell, surviving flips only
    std::vector<int> flagged_roots;     // sorted supercell roots, odd parity
};

Syndrome extract_syndrome(const LatticeGraph& g, const ErrorInstance& inst);

struct MatchingGraph {
    std::vector<int> nodes;  // flagged supercell roots, ascending
    // complete graph; edge (i,j), i<j, index = pair rank
    std::vector<std::int64_t> weights;
    std::vector<std::vector<LatticeGraph::QubitId>> paths;  // surviving faces

    int n_nodes() const { return static_cast<int>(nodes.size()); }
    int edge_index(int i, int j) const;
};

MatchingGraph build_matching_graph(const Syndrome& syn, const LatticeGraph& g);

std::vector<std::pair<int, int>> mwpm(const MatchingGraph& mg);

struct DecodeResult {
    std::vector<std::pair<int, int>> matched;  // node indices into mg.nodes
    std::vector<char> correction;              // per qubit
    bool logical_flip = false;
    bool percolated = false;
};

// Applies the matched correction paths and judges the homology class of
// the residual (flips XOR correction) along the given axis. Missing faces
// are free: the residual wraps iff residual+missing contains a cycle with
// odd winding around `axis`. A percolated loss cluster forces failure.
DecodeResult apply_and_judge(const LatticeGraph& g, const ErrorInstance& inst,
                             const MatchingGraph& mg,
                             const std::vector<std::pair<int, int>>& matched,
                             int axis);

// Full pipeline for one trial.
DecodeResult decode(const LatticeGraph& g, const ErrorInstance& inst,
                    int axis = 0);

}  // namespace htqc
