#include "htqc/matching.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <stdexcept>

// Blossom algorithm for maximum-weight matching with integer weights,
// following the array-based formulation of Galil's O(V^3) scheme.
// Edge k has two endpoints 2k and 2k+1; mate[] and labelend[] store
// endpoint indices so the augmenting structure can be walked cheaply.

namespace htqc {

namespace {

class MatchingSolver {
  public:
    MatchingSolver(int n, const std::vector<WeightedEdge>& edges,
                   bool max_cardinality)
        : nvertex_(n), edges_(edges), maxcardinality_(max_cardinality) {}

    std::vector<int> solve();

  private:
    std::int64_t slack(int k) const {
        return dualvar_[edges_[k].u] + dualvar_[edges_[k].v] -
               2 * edges_[k].weight;
    }

    void blossom_leaves(int b, std::vector<int>& out) const {
        if (b < nvertex_) {
            out.push_back(b);
        } else {
            for (int t : blossomchilds_[b]) blossom_leaves(t, out);
        }
    }

    void assign_label(int w, int t, int p);
    int scan_blossom(int v, int w);
    void add_blossom(int base, int k);
    void expand_blossom(int b, bool endstage);
    void augment_blossom(int b, int v);
    void augment_matching(int k);

    int nvertex_;
    const std::vector<WeightedEdge>& edges_;
    bool maxcardinality_;

    std::vector<int> endpoint_;                  // endpoint p -> vertex
    std::vector<std::vector<int>> neighbend_;    // v -> remote endpoints
    std::vector<int> mate_;                      // v -> endpoint or -1
    std::vector<int> label_;                     // 0 free, 1 S, 2 T
    std::vector<int> labelend_;
    std::vector<int> inblossom_;
    std::vector<int> blossomparent_;
    std::vector<std::vector<int>> blossomchilds_;
    std::vector<int> blossombase_;
    std::vector<std::vector<int>> blossomendps_;
    std::vector<int> bestedge_;
    std::vector<std::vector<int>> blossombestedges_;
    std::vector<int> unusedblossoms_;
    std::vector<std::int64_t> dualvar_;
    std::vector<char> allowedge_;
    std::vector<int> queue_;
};

void MatchingSolver::assign_label(int w, int t, int p) {
    int b = inblossom_[w];
    assert(label_[w] == 0 && label_[b] == 0);
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
        blossom_leaves(b, queue_);
    } else {
        int base = blossombase_[b];
        assert(mate_[base] >= 0);
        assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
    }
}

// Trace back from both endpoints of an S-S edge; returns the base of the
// lowest common blossom ancestor, or -1 if the paths reach distinct roots
// (in which case the edge augments the matching).
int MatchingSolver::scan_blossom(int v, int w) {
    std::vector<int> path;
    int base = -1;
    while (v != -1 || w != -1) {
        int b = inblossom_[v];
        if (label_[b] & 4) {
            base = blossombase_[b];
            break;
        }
        assert(label_[b] == 1);
        path.push_back(b);
        label_[b] = 5;
        assert(labelend_[b] == mate_[blossombase_[b]]);
        if (labelend_[b] == -1) {
            v = -1;
        } else {
            v = endpoint_[labelend_[b]];
            b = inblossom_[v];
            assert(label_[b] == 2);
            assert(labelend_[b] >= 0);
            v = endpoint_[labelend_[b]];
        }
        if (w != -1) std::swap(v, w);
    }
    for (int b : path) label_[b] = 1;
    return base;
}

void MatchingSolver::add_blossom(int base, int k) {
    int v = edges_[k].u;
    int w = edges_[k].v;
    int bb = inblossom_[base];
    int bv = inblossom_[v];
    int bw = inblossom_[w];
    int b = unusedblossoms_.back();
    unusedblossoms_.pop_back();
    blossombase_[b] = base;
    blossomparent_[b] = -1;
    blossomparent_[bb] = b;
    auto& path = blossomchilds_[b];
    auto& endps = blossomendps_[b];
    path.clear();
    endps.clear();
    while (bv != bb) {
        blossomparent_[bv] = b;
        path.push_back(bv);
        endps.push_back(labelend_[bv]);
        assert(labelend_[bv] >= 0);
        v = endpoint_[labelend_[bv]];
        bv = inblossom_[v];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
        blossomparent_[bw] = b;
        path.push_back(bw);
        endps.push_back(labelend_[bw] ^ 1);
        assert(labelend_[bw] >= 0);
        w = endpoint_[labelend_[bw]];
        bw = inblossom_[w];
    }
    assert(label_[bb] == 1);
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dualvar_[b] = 0;
    std::vector<int> leaves;
    blossom_leaves(b, leaves);
    for (int lv : leaves) {
        if (label_[inblossom_[lv]] == 2) queue_.push_back(lv);
        inblossom_[lv] = b;
    }
    // Recompute the best-edge cache of the new blossom from its children.
    std::vector<int> bestedgeto(2 * nvertex_, -1);
    for (int child : path) {
        std::vector<std::vector<int>> nblists;
        if (blossombestedges_[child].empty()) {
            std::vector<int> chleaves;
            blossom_leaves(child, chleaves);
            for (int lv : chleaves) {
                nblists.emplace_back();
                for (int p : neighbend_[lv]) nblists.back().push_back(p / 2);
            }
        } else {
            nblists.push_back(blossombestedges_[child]);
        }
        for (const auto& nblist : nblists) {
            for (int ek : nblist) {
                int i = edges_[ek].u;
                int j = edges_[ek].v;
                if (inblossom_[j] == b) std::swap(i, j);
                int bj = inblossom_[j];
                if (bj != b && label_[bj] == 1 &&
                    (bestedgeto[bj] == -1 || slack(ek) < slack(bestedgeto[bj]))) {
                    bestedgeto[bj] = ek;
                }
            }
        }
        blossombestedges_[child].clear();
        bestedge_[child] = -1;
    }
    auto& be = blossombestedges_[b];
    be.clear();
    for (int ek : bestedgeto) {
        if (ek != -1) be.push_back(ek);
    }
    bestedge_[b] = -1;
    for (int ek : be) {
        if (bestedge_[b] == -1 || slack(ek) < slack(bestedge_[b])) {
            bestedge_[b] = ek;
        }
    }
}

void MatchingSolver::expand_blossom(int b, bool endstage) {
    auto childs = blossomchilds_[b];  // copy; we mutate below
    for (int s : childs) {
        blossomparent_[s] = -1;
        if (s < nvertex_) {
            inblossom_[s] = s;
        } else if (endstage && dualvar_[s] == 0) {
            expand_blossom(s, endstage);
        } else {
            std::vector<int> leaves;
            blossom_leaves(s, leaves);
            for (int v : leaves) inblossom_[v] = s;
        }
    }
    // If b was a T-blossom mid-stage, relabel the even-length path from the
    // entry child to the base, and clear labels on the rest.
    if (!endstage && label_[b] == 2) {
        int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
        int nchilds = static_cast<int>(childs.size());
        int j = static_cast<int>(
            std::find(childs.begin(), childs.end(), entrychild) -
            childs.begin());
        int jstep, endptrick;
        if (j & 1) {
            j -= nchilds;
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        auto at = [&](int idx) {
            return idx >= 0 ? idx : idx + nchilds;
        };
        const auto& endps = blossomendps_[b];
        int p = labelend_[b];
        while (j != 0) {
            label_[endpoint_[p ^ 1]] = 0;
            label_[endpoint_[endps[at(j - endptrick)] ^ endptrick ^ 1]] = 0;
            assign_label(endpoint_[p ^ 1], 2, p);
            allowedge_[endps[at(j - endptrick)] / 2] = 1;
            j += jstep;
            p = endps[at(j - endptrick)] ^ endptrick;
            allowedge_[p / 2] = 1;
            j += jstep;
        }
        int bv = childs[at(j)];
        label_[endpoint_[p ^ 1]] = label_[bv] = 2;
        labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
        bestedge_[bv] = -1;
        j += jstep;
        while (childs[at(j)] != entrychild) {
            bv = childs[at(j)];
            if (label_[bv] == 1) {
                j += jstep;
                continue;
            }
            std::vector<int> leaves;
            blossom_leaves(bv, leaves);
            int labeled = -1;
            for (int v : leaves) {
                if (label_[v] != 0) {
                    labeled = v;
                    break;
                }
            }
            if (labeled != -1) {
                assert(label_[labeled] == 2);
                assert(inblossom_[labeled] == bv);
                label_[labeled] = 0;
                label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
                assign_label(labeled, 2, labelend_[labeled]);
            }
            j += jstep;
        }
    }
    label_[b] = -1;
    labelend_[b] = -1;
    blossomchilds_[b].clear();
    blossomendps_[b].clear();
    blossombase_[b] = -1;
    blossombestedges_[b].clear();
    bestedge_[b] = -1;
    unusedblossoms_.push_back(b);
}

// Rotate blossom b so vertex v becomes its base, flipping matched edges
// along the way.
void MatchingSolver::augment_blossom(int b, int v) {
    int t = v;
    while (blossomparent_[t] != b) t = blossomparent_[t];
    if (t >= nvertex_) augment_blossom(t, v);
    auto& childs = blossomchilds_[b];
    auto& endps = blossomendps_[b];
    int nchilds = static_cast<int>(childs.size());
    int i = static_cast<int>(std::find(childs.begin(), childs.end(), t) -
                             childs.begin());
    int j = i;
    int jstep, endptrick;
    if (i & 1) {
        j -= nchilds;
        jstep = 1;
        endptrick = 0;
    } else {
        jstep = -1;
        endptrick = 1;
    }
    auto at = [&](int idx) { return idx >= 0 ? idx : idx + nchilds; };
    while (j != 0) {
        j += jstep;
        t = childs[at(j)];
        int p = endps[at(j - endptrick)] ^ endptrick;
        if (t >= nvertex_) augment_blossom(t, endpoint_[p]);
        j += jstep;
        t = childs[at(j)];
        if (t >= nvertex_) augment_blossom(t, endpoint_[p ^ 1]);
        mate_[endpoint_[p]] = p ^ 1;
        mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(childs.begin(), childs.begin() + i, childs.end());
    std::rotate(endps.begin(), endps.begin() + i, endps.end());
    blossombase_[b] = blossombase_[childs[0]];
    assert(blossombase_[b] == v);
}

void MatchingSolver::augment_matching(int k) {
    const int ends[2][2] = {{edges_[k].u, 2 * k + 1}, {edges_[k].v, 2 * k}};
    for (const auto& sp : ends) {
        int s = sp[0];
        int p = sp[1];
        while (true) {
            int bs = inblossom_[s];
            assert(label_[bs] == 1);
            assert(labelend_[bs] == mate_[blossombase_[bs]]);
            if (bs >= nvertex_) augment_blossom(bs, s);
            mate_[s] = p;
            if (labelend_[bs] == -1) break;
            int t = endpoint_[labelend_[bs]];
            int bt = inblossom_[t];
            assert(label_[bt] == 2);
            assert(labelend_[bt] >= 0);
            s = endpoint_[labelend_[bt]];
            int j = endpoint_[labelend_[bt] ^ 1];
            assert(blossombase_[bt] == t);
            if (bt >= nvertex_) augment_blossom(bt, j);
            mate_[j] = labelend_[bt];
            p = labelend_[bt] ^ 1;
        }
    }
}

std::vector<int> MatchingSolver::solve() {
    int n = nvertex_;
    int nedge = static_cast<int>(edges_.size());
    if (n == 0 || nedge == 0) return std::vector<int>(n, -1);

    std::int64_t maxweight = 0;
    for (const auto& e : edges_) {
        assert(e.u >= 0 && e.u < n && e.v >= 0 && e.v < n && e.u != e.v);
        maxweight = std::max(maxweight, e.weight);
    }

    endpoint_.resize(2 * nedge);
    for (int p = 0; p < 2 * nedge; ++p) {
        endpoint_[p] = (p & 1) ? edges_[p / 2].v : edges_[p / 2].u;
    }
    neighbend_.assign(n, {});
    for (int k = 0; k < nedge; ++k) {
        neighbend_[edges_[k].u].push_back(2 * k + 1);
        neighbend_[edges_[k].v].push_back(2 * k);
    }

    mate_.assign(n, -1);
    label_.assign(2 * n, 0);
    labelend_.assign(2 * n, -1);
    inblossom_.resize(n);
    for (int v = 0; v < n; ++v) inblossom_[v] = v;
    blossomparent_.assign(2 * n, -1);
    blossomchilds_.assign(2 * n, {});
    blossombase_.resize(2 * n);
    for (int v = 0; v < n; ++v) blossombase_[v] = v;
    for (int b = n; b < 2 * n; ++b) blossombase_[b] = -1;
    blossomendps_.assign(2 * n, {});
    bestedge_.assign(2 * n, -1);
    blossombestedges_.assign(2 * n, {});
    unusedblossoms_.clear();
    for (int b = n; b < 2 * n; ++b) unusedblossoms_.push_back(b);
    dualvar_.assign(2 * n, 0);
    for (int v = 0; v < n; ++v) dualvar_[v] = maxweight;
    allowedge_.assign(nedge, 0);

    for (int stage = 0; stage < n; ++stage) {
        std::fill(label_.begin(), label_.end(), 0);
        std::fill(bestedge_.begin(), bestedge_.end(), -1);
        for (int b = n; b < 2 * n; ++b) blossombestedges_[b].clear();
        std::fill(allowedge_.begin(), allowedge_.end(), 0);
        queue_.clear();

        for (int v = 0; v < n; ++v) {
            if (mate_[v] == -1 && label_[inblossom_[v]] == 0) {
                assign_label(v, 1, -1);
            }
        }

        bool augmented = false;
        while (true) {
            while (!queue_.empty() && !augmented) {
                int v = queue_.back();
                queue_.pop_back();
                assert(label_[inblossom_[v]] == 1);
                for (int p : neighbend_[v]) {
                    int k = p / 2;
                    int w = endpoint_[p];
                    if (inblossom_[v] == inblossom_[w]) continue;
                    std::int64_t kslack = 0;
                    if (!allowedge_[k]) {
                        kslack = slack(k);
                        if (kslack <= 0) allowedge_[k] = 1;
                    }
                    if (allowedge_[k]) {
                        if (label_[inblossom_[w]] == 0) {
                            assign_label(w, 2, p ^ 1);
                        } else if (label_[inblossom_[w]] == 1) {
                            int base = scan_blossom(v, w);
                            if (base >= 0) {
                                add_blossom(base, k);
                            } else {
                                augment_matching(k);
                                augmented = true;
                                break;
                            }
                        } else if (label_[w] == 0) {
                            assert(label_[inblossom_[w]] == 2);
                            label_[w] = 2;
                            labelend_[w] = p ^ 1;
                        }
                    } else if (label_[inblossom_[w]] == 1) {
                        int bv = inblossom_[v];
                        if (bestedge_[bv] == -1 ||
                            kslack < slack(bestedge_[bv])) {
                            bestedge_[bv] = k;
                        }
                    } else if (label_[w] == 0) {
                        if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) {
                            bestedge_[w] = k;
                        }
                    }
                }
            }
            if (augmented) break;

            // Dual update: pick the smallest feasible delta.
            int deltatype = -1;
            std::int64_t delta = 0;
            int deltaedge = -1;
            int deltablossom = -1;
            if (!maxcardinality_) {
                deltatype = 1;
                delta = *std::min_element(dualvar_.begin(),
                                          dualvar_.begin() + n);
            }
            for (int v = 0; v < n; ++v) {
                if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
                    std::int64_t d = slack(bestedge_[v]);
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 2;
                        deltaedge = bestedge_[v];
                    }
                }
            }
            for (int b = 0; b < 2 * n; ++b) {
                if (blossomparent_[b] == -1 && label_[b] == 1 &&
                    bestedge_[b] != -1) {
                    std::int64_t kslack = slack(bestedge_[b]);
                    assert(kslack % 2 == 0);
                    std::int64_t d = kslack / 2;
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 3;
                        deltaedge = bestedge_[b];
                    }
                }
            }
            for (int b = n; b < 2 * n; ++b) {
                if (blossombase_[b] >= 0 && blossomparent_[b] == -1 &&
                    label_[b] == 2 &&
                    (deltatype == -1 || dualvar_[b] < delta)) {
                    delta = dualvar_[b];
                    deltatype = 4;
                    deltablossom = b;
                }
            }
            if (deltatype == -1) {
                deltatype = 1;
                delta = std::max<std::int64_t>(
                    0, *std::min_element(dualvar_.begin(),
                                         dualvar_.begin() + n));
            }

            for (int v = 0; v < n; ++v) {
                int lab = label_[inblossom_[v]];
                if (lab == 1) {
                    dualvar_[v] -= delta;
                } else if (lab == 2) {
                    dualvar_[v] += delta;
                }
            }
            for (int b = n; b < 2 * n; ++b) {
                if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
                    if (label_[b] == 1) {
                        dualvar_[b] += delta;
                    } else if (label_[b] == 2) {
                        dualvar_[b] -= delta;
                    }
                }
            }

            if (deltatype == 1) {
                break;
            } else if (deltatype == 2) {
                allowedge_[deltaedge] = 1;
                int i = edges_[deltaedge].u;
                if (label_[inblossom_[i]] == 0) i = edges_[deltaedge].v;
                assert(label_[inblossom_[i]] == 1);
                queue_.push_back(i);
            } else if (deltatype == 3) {
                allowedge_[deltaedge] = 1;
                queue_.push_back(edges_[deltaedge].u);
            } else {
                expand_blossom(deltablossom, false);
            }
        }

        if (!augmented) break;

        for (int b = n; b < 2 * n; ++b) {
            if (blossomparent_[b] == -1 && blossombase_[b] >= 0 &&
                label_[b] == 1 && dualvar_[b] == 0) {
                expand_blossom(b, true);
            }
        }
    }

    std::vector<int> result(n, -1);
    for (int v = 0; v < n; ++v) {
        if (mate_[v] >= 0) result[v] = endpoint_[mate_[v]];
    }
    for (int v = 0; v < n; ++v) {
        assert(result[v] == -1 || result[result[v]] == v);
    }
    return result;
}

}  // namespace

std::vector<int> max_weight_matching(int n_vertices,
                                     const std::vector<WeightedEdge>& edges,
                                     bool max_cardinality) {
    if (n_vertices < 0) throw std::invalid_argument("negative vertex count");
    MatchingSolver solver(n_vertices, edges, max_cardinality);
    return solver.solve();
}

std::vector<std::pair<int, int>> min_weight_perfect_matching(
    int n_vertices, const std::vector<WeightedEdge>& edges) {
    if (n_vertices % 2 != 0) {
        throw std::invalid_argument("odd vertex count has no perfect matching");
    }
    if (n_vertices == 0) return {};
    std::int64_t wmax = 0;
    for (const auto& e : edges) {
        if (e.weight < 0) throw std::invalid_argument("negative edge weight");
        wmax = std::max(wmax, e.weight);
    }
    // Flip weights so that a maximum-weight maximum-cardinality matching
    // minimises the original total weight.
    std::vector<WeightedEdge> flipped(edges);
    for (auto& e : flipped) e.weight = wmax + 1 - e.weight;
    std::vector<int> mate = max_weight_matching(n_vertices, flipped, true);
    std::vector<std::pair<int, int>> out;
    for (int v = 0; v < n_vertices; ++v) {
        if (mate[v] == -1) throw std::runtime_error("no perfect matching");
        if (v < mate[v]) out.emplace_back(v, mate[v]);
    }
    return out;
}

}  // namespace htqc
