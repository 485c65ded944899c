#include "doctest.h"
#include "htqc/decoder.hpp"
#include "htqc/rng.hpp"

#include <algorithm>
#include <numeric>

using namespace htqc;

namespace {

ErrorInstance empty_instance(const LatticeGraph& g) {
    ErrorInstance inst;
    inst.missing.assign(g.n_qubits(), 0);
    inst.flipped.assign(g.n_qubits(), 0);
    return inst;
}

// parity of residual (flips XOR correction) folded into supercells must
// vanish everywhere after a decode
void check_annihilation(const LatticeGraph& g, const ErrorInstance& inst,
                        const DecodeResult& res) {
    std::vector<char> cell_parity(g.n_cells(), 0);
    for (LatticeGraph::QubitId q = 0; q < g.n_qubits(); ++q) {
        bool residual = (inst.flipped[q] ^ res.correction[q]) && !inst.missing[q];
        if (!residual) continue;
        auto cells = g.incident_cells(q);
        cell_parity[cells[0]] ^= 1;
        cell_parity[cells[1]] ^= 1;
    }
    SupercellPartition part(g, inst.missing);
    auto folded = part.fold_parities(cell_parity);
    CHECK(std::accumulate(folded.begin(), folded.end(), 0) == 0);
}

}  // namespace

TEST_CASE("clean instance decodes trivially") {
    LatticeGraph g(3);
    auto inst = empty_instance(g);
    auto syn = extract_syndrome(g, inst);
    CHECK(syn.flagged_roots.empty());
    CHECK_FALSE(syn.partition.percolated());
    auto res = decode(g, inst);
    CHECK_FALSE(res.logical_flip);
    CHECK_FALSE(res.percolated);
}

TEST_CASE("single flip flags its two cells and always corrects") {
    LatticeGraph g(3);
    for (LatticeGraph::QubitId q = 0; q < g.n_qubits(); ++q) {
        auto inst = empty_instance(g);
        inst.flipped[q] = 1;
        auto syn = extract_syndrome(g, inst);
        auto cells = g.incident_cells(q);
        std::vector<int> expect{cells[0], cells[1]};
        std::sort(expect.begin(), expect.end());
        CHECK(syn.flagged_roots == expect);
        auto mg = build_matching_graph(syn, g);
        REQUIRE(mg.n_nodes() == 2);
        CHECK(mg.weights[0] == 1);
        auto res = decode(g, inst);
        CHECK_FALSE(res.logical_flip);
        check_annihilation(g, inst, res);
    }
}

TEST_CASE("supercell merging marginalizes a missing qubit") {
    LatticeGraph g(3);
    auto inst = empty_instance(g);
    auto q = g.qubit_id(1, 1, 1, 0);
    inst.missing[q] = 1;
    // flip a non-parallel face of the first incident cell (the parallel
    // face would tie with a wrapping weight-1 correction at d=3)
    auto cells = g.incident_cells(q);
    auto faces = g.cell_qubits(cells[0]);
    LatticeGraph::QubitId other = -1;
    for (auto f : faces) {
        if (f != q && g.qubit_axis(f) != g.qubit_axis(q)) {
            other = f;
            break;
        }
    }
    inst.flipped[other] = 1;
    auto syn = extract_syndrome(g, inst);
    // the two merged cells act as one check: flagged iff surviving-flip
    // parity in the union is odd — here exactly one flip inside plus one
    // flag at the flip's other cell
    CHECK(syn.partition.find(cells[0]) == syn.partition.find(cells[1]));
    CHECK(syn.flagged_roots.size() == 2);
    auto res = decode(g, inst);
    CHECK_FALSE(res.logical_flip);
    check_annihilation(g, inst, res);
}

TEST_CASE("corridor of missing qubits costs nothing to cross") {
    // d=7 keeps the through-corridor correction strictly cheaper than the
    // wrap-around alternative
    LatticeGraph g(7);
    auto inst = empty_instance(g);
    // merge cells (1,2,2) and (2,2,2) via the face between them
    inst.missing[g.qubit_id(2, 2, 2, 0)] = 1;
    // flips on the two far sides of the corridor
    inst.flipped[g.qubit_id(1, 2, 2, 0)] = 1;  // between (0,2,2),(1,2,2)
    inst.flipped[g.qubit_id(3, 2, 2, 0)] = 1;  // between (2,2,2),(3,2,2)
    auto syn = extract_syndrome(g, inst);
    auto mg = build_matching_graph(syn, g);
    REQUIRE(mg.n_nodes() == 2);
    // the flips sit 3 cells apart but the merged supercell is free:
    // (0,2,2) -> (1,2,2)|(2,2,2) -> (3,2,2) costs 2
    CHECK(mg.weights[0] == 2);
    auto res = decode(g, inst);
    CHECK_FALSE(res.logical_flip);
    check_annihilation(g, inst, res);
}

TEST_CASE("undetectable wrapping chain is a logical failure") {
    LatticeGraph g(3);
    auto inst = empty_instance(g);
    // a straight line of axis-0 faces winding around axis 0: no syndrome
    for (int x = 0; x < 3; ++x) inst.flipped[g.qubit_id(x, 1, 1, 0)] = 1;
    auto syn = extract_syndrome(g, inst);
    CHECK(syn.flagged_roots.empty());
    auto res = decode(g, inst, 0);
    CHECK(res.logical_flip);
    // the same chain does not wrap axis 1
    auto res1 = decode(g, inst, 1);
    CHECK_FALSE(res1.logical_flip);
}

TEST_CASE("percolating loss forces failure") {
    LatticeGraph g(3);
    auto inst = empty_instance(g);
    for (int x = 0; x < 3; ++x) inst.missing[g.qubit_id(x, 0, 0, 0)] = 1;
    auto syn = extract_syndrome(g, inst);
    CHECK(syn.partition.percolated());
    auto res = decode(g, inst);
    CHECK(res.percolated);
    CHECK(res.logical_flip);
}

TEST_CASE("all weight-1 errors correct at d=3 and weight-2 at d=5") {
    LatticeGraph g5(5);
    CounterRng rng(2024, 0, 0);
    for (int t = 0; t < 4000; ++t) {
        auto inst = empty_instance(g5);
        auto q1 = static_cast<LatticeGraph::QubitId>(rng.below(g5.n_qubits()));
        auto q2 = static_cast<LatticeGraph::QubitId>(rng.below(g5.n_qubits()));
        inst.flipped[q1] ^= 1;
        inst.flipped[q2] ^= 1;
        auto res = decode(g5, inst);
        CHECK_FALSE(res.logical_flip);
        check_annihilation(g5, inst, res);
    }
}

TEST_CASE("loss equivalence: marginalized flip on a missing qubit is irrelevant") {
    LatticeGraph g(3);
    CounterRng rng(77, 0, 0);
    for (int t = 0; t < 500; ++t) {
        auto inst = empty_instance(g);
        auto qm = static_cast<LatticeGraph::QubitId>(rng.below(g.n_qubits()));
        inst.missing[qm] = 1;
        for (int k = 0; k < 2; ++k) {
            auto qf = static_cast<LatticeGraph::QubitId>(rng.below(g.n_qubits()));
            if (!inst.missing[qf]) inst.flipped[qf] ^= 1;
        }
        auto res = decode(g, inst);
        check_annihilation(g, inst, res);
        // re-decoding the identical instance gives the identical verdict
        auto res2 = decode(g, inst);
        CHECK(res.logical_flip == res2.logical_flip);
        CHECK(res.correction == res2.correction);
    }
}

TEST_CASE("random noisy instances keep invariants") {
    LatticeGraph g(5);
    int failures = 0;
    for (int t = 0; t < 300; ++t) {
        CounterRng rng(31337, 0, t);
        auto inst = sample_instance_pz(g, 0.02, 0.05, ErrorLocationConfig(4, 2, 4), rng);
        auto syn = extract_syndrome(g, inst);
        CHECK(syn.flagged_roots.size() % 2 == 0);
        auto res = decode(g, inst);
        check_annihilation(g, inst, res);
        failures += res.logical_flip ? 1 : 0;
    }
    CHECK(failures < 300);  // smoke: not everything fails at mild noise
}
