#include "htqc/decoder.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <limits>
#include <stdexcept>

#include "htqc/matching.hpp"

// The displacement bookkeeping used twice below: every cell carries its
// position relative to its union-find root in unwrapped coordinates.
// Uniting two cells that are already connected compares the recorded
// displacement against the claimed one; a mismatch is a cycle that winds
// around the torus, and mismatch/d is its integer winding vector.

namespace htqc {

namespace {

// pos(second) - pos(first) for the two cells incident to a face qubit;
// incident_cells(q) = {c, c - e_axis}.
std::array<int, 3> incident_delta(int axis) {
    std::array<int, 3> d{0, 0, 0};
    d[axis] = -1;
    return d;
}

bool nonzero(const std::array<int, 3>& v) {
    return v[0] != 0 || v[1] != 0 || v[2] != 0;
}

}  // namespace

int SupercellPartition::find(int cell) const {
    if (parent_[cell] == cell) return cell;
    int root = find(parent_[cell]);
    const auto& po = offset_[parent_[cell]];  // parent now relative to root
    for (int k = 0; k < 3; ++k) offset_[cell][k] += po[k];
    parent_[cell] = root;
    return root;
}

int SupercellPartition::find_mut(int cell) { return find(cell); }

std::array<int, 3> SupercellPartition::offset_to_root(int cell) const {
    find(cell);
    return offset_[cell];  // roots keep the zero vector
}

SupercellPartition::SupercellPartition(const LatticeGraph& g,
                                       const std::vector<char>& missing)
    : parent_(g.n_cells()),
      offset_(g.n_cells(), {0, 0, 0}),
      rank_(g.n_cells(), 0) {
    const int n = static_cast<int>(g.n_cells());
    for (int i = 0; i < n; ++i) parent_[i] = i;

    const auto nq = g.n_qubits();
    for (LatticeGraph::QubitId q = 0; q < nq; ++q) {
        if (!missing[q]) continue;
        auto cells = g.incident_cells(q);
        auto delta = incident_delta(g.qubit_axis(q));
        int a = cells[0];
        int b = cells[1];
        int ra = find(a);
        int rb = find(b);
        if (ra == rb) {
            std::array<int, 3> mismatch;
            for (int k = 0; k < 3; ++k) {
                mismatch[k] = offset_[b][k] - offset_[a][k] - delta[k];
            }
            if (nonzero(mismatch)) percolated_ = true;
            continue;
        }
        std::array<int, 3> rel;  // pos(rb) - pos(ra)
        for (int k = 0; k < 3; ++k) {
            rel[k] = offset_[a][k] + delta[k] - offset_[b][k];
        }
        if (rank_[ra] < rank_[rb]) {
            parent_[ra] = rb;
            for (int k = 0; k < 3; ++k) offset_[ra][k] = -rel[k];
        } else {
            parent_[rb] = ra;
            offset_[rb] = rel;
            if (rank_[ra] == rank_[rb]) ++rank_[ra];
        }
    }
}

std::vector<char> SupercellPartition::fold_parities(
    const std::vector<char>& cell_parity) const {
    std::vector<char> out(cell_parity.size(), 0);
    for (std::size_t c = 0; c < cell_parity.size(); ++c) {
        if (cell_parity[c]) out[find(static_cast<int>(c))] ^= 1;
    }
    return out;
}

Syndrome extract_syndrome(const LatticeGraph& g, const ErrorInstance& inst) {
    Syndrome syn{SupercellPartition(g, inst.missing), {}, {}};
    syn.cell_parity.assign(static_cast<std::size_t>(g.n_cells()), 0);
    const auto nq = g.n_qubits();
    for (LatticeGraph::QubitId q = 0; q < nq; ++q) {
        if (!inst.flipped[q]) continue;
        auto cells = g.incident_cells(q);
        syn.cell_parity[cells[0]] ^= 1;
        syn.cell_parity[cells[1]] ^= 1;
    }
    std::vector<char> folded = syn.partition.fold_parities(syn.cell_parity);
    for (std::size_t c = 0; c < folded.size(); ++c) {
        if (folded[c]) syn.flagged_roots.push_back(static_cast<int>(c));
    }
    return syn;
}

int MatchingGraph::edge_index(int i, int j) const {
    assert(i != j);
    if (i > j) std::swap(i, j);
    int n = n_nodes();
    return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

MatchingGraph build_matching_graph(const Syndrome& syn,
                                   const LatticeGraph& g) {
    MatchingGraph mg;
    mg.nodes = syn.flagged_roots;  // already ascending
    int nn = mg.n_nodes();
    if (nn == 0) return mg;
    mg.weights.assign(static_cast<std::size_t>(nn) * (nn - 1) / 2, -1);
    mg.paths.resize(mg.weights.size());

    const int ncells = static_cast<int>(g.n_cells());
    std::vector<int> node_of_root(ncells, -1);
    for (int i = 0; i < nn; ++i) node_of_root[mg.nodes[i]] = i;
    // which flagged node, if any, owns each cell
    std::vector<int> cell_node(ncells, -1);
    for (int c = 0; c < ncells; ++c) {
        cell_node[c] = node_of_root[syn.partition.find(c)];
    }

    constexpr int kInf = std::numeric_limits<int>::max();
    std::vector<int> dist(ncells), prev_cell(ncells), prev_qubit(ncells);
    for (int i = 0; i < nn; ++i) {
        std::fill(dist.begin(), dist.end(), kInf);
        std::fill(prev_cell.begin(), prev_cell.end(), -1);
        std::fill(prev_qubit.begin(), prev_qubit.end(), -1);
        std::deque<int> dq;
        for (int c = 0; c < ncells; ++c) {
            if (cell_node[c] == i) {
                dist[c] = 0;
                dq.push_back(c);
            }
        }
        // 0-1 BFS: crossing a missing face is free, a surviving face costs 1
        while (!dq.empty()) {
            int c = dq.front();
            dq.pop_front();
            for (const auto& adj : g.cell_adjacency(c)) {
                // moves within a supercell are free; crossing into another
                // supercell costs one surviving face
                int w = (syn.partition.find(adj.cell) ==
                         syn.partition.find(c))
                            ? 0
                            : 1;
                int nd = dist[c] + w;
                if (nd < dist[adj.cell]) {
                    dist[adj.cell] = nd;
                    prev_cell[adj.cell] = c;
                    prev_qubit[adj.cell] = w ? adj.shared_qubit : -1;
                    if (w == 0) {
                        dq.push_front(adj.cell);
                    } else {
                        dq.push_back(adj.cell);
                    }
                }
            }
        }
        for (int j = i + 1; j < nn; ++j) {
            int best = -1;
            for (int c = 0; c < ncells; ++c) {
                if (cell_node[c] != j) continue;
                if (best == -1 || dist[c] < dist[best]) best = c;
            }
            assert(best != -1 && dist[best] < kInf);
            int e = mg.edge_index(i, j);
            mg.weights[e] = dist[best];
            auto& path = mg.paths[e];
            for (int c = best; prev_cell[c] != -1; c = prev_cell[c]) {
                if (prev_qubit[c] != -1) path.push_back(prev_qubit[c]);
            }
        }
    }
    return mg;
}

std::vector<std::pair<int, int>> mwpm(const MatchingGraph& mg) {
    int nn = mg.n_nodes();
    if (nn == 0) return {};
    if (nn % 2 != 0) throw std::logic_error("odd defect count");
    std::vector<WeightedEdge> edges;
    edges.reserve(mg.weights.size());
    for (int i = 0; i < nn; ++i) {
        for (int j = i + 1; j < nn; ++j) {
            edges.push_back({i, j, mg.weights[mg.edge_index(i, j)]});
        }
    }
    return min_weight_perfect_matching(nn, edges);
}

DecodeResult apply_and_judge(const LatticeGraph& g, const ErrorInstance& inst,
                             const MatchingGraph& mg,
                             const std::vector<std::pair<int, int>>& matched,
                             int axis) {
    DecodeResult res;
    res.matched = matched;
    res.correction.assign(static_cast<std::size_t>(g.n_qubits()), 0);
    for (const auto& [i, j] : matched) {
        for (auto q : mg.paths[mg.edge_index(i, j)]) res.correction[q] ^= 1;
    }

    // Winding pass over missing + residual faces. Missing faces first so a
    // wrapping loss cluster is attributed to percolation.
    const int ncells = static_cast<int>(g.n_cells());
    std::vector<int> parent(ncells), rank(ncells, 0);
    std::vector<std::array<int, 3>> offset(ncells, {0, 0, 0});
    for (int i = 0; i < ncells; ++i) parent[i] = i;
    auto find = [&](auto&& self, int v) -> int {
        if (parent[v] == v) return v;
        int root = self(self, parent[v]);
        for (int k = 0; k < 3; ++k) offset[v][k] += offset[parent[v]][k];
        parent[v] = root;
        return root;
    };
    bool percolated = false;
    bool wrap_odd = false;
    auto unite = [&](LatticeGraph::QubitId q, bool loss_phase) {
        auto cells = g.incident_cells(q);
        auto delta = incident_delta(g.qubit_axis(q));
        int a = cells[0], b = cells[1];
        int ra = find(find, a), rb = find(find, b);
        if (ra == rb) {
            std::array<int, 3> mm;
            for (int k = 0; k < 3; ++k) mm[k] = offset[b][k] - offset[a][k] - delta[k];
            if (nonzero(mm) && loss_phase) percolated = true;
            // each back edge closes one basis cycle; the homology class is
            // the parity of the summed windings
            if ((mm[axis] / g.distance()) % 2 != 0) wrap_odd = !wrap_odd;
            return;
        }
        std::array<int, 3> rel;
        for (int k = 0; k < 3; ++k) rel[k] = offset[a][k] + delta[k] - offset[b][k];
        if (rank[ra] < rank[rb]) {
            parent[ra] = rb;
            for (int k = 0; k < 3; ++k) offset[ra][k] = -rel[k];
        } else {
            parent[rb] = ra;
            offset[rb] = rel;
            if (rank[ra] == rank[rb]) ++rank[ra];
        }
    };
    const auto nq = g.n_qubits();
    for (LatticeGraph::QubitId q = 0; q < nq; ++q) {
        if (inst.missing[q]) unite(q, true);
    }
    for (LatticeGraph::QubitId q = 0; q < nq; ++q) {
        if ((inst.flipped[q] ^ res.correction[q]) && !inst.missing[q]) {
            unite(q, false);
        }
    }
    res.percolated = percolated;
    res.logical_flip = wrap_odd || percolated;
    return res;
}

DecodeResult decode(const LatticeGraph& g, const ErrorInstance& inst,
                    int axis) {
    Syndrome syn = extract_syndrome(g, inst);
    MatchingGraph mg = build_matching_graph(syn, g);
    auto matched = mwpm(mg);
    return apply_and_judge(g, inst, mg, matched, axis);
}

}  // namespace htqc
