#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace htqc {

// Primal sublattice of the Raussendorf lattice with periodic boundaries:
// d^3 cubic cells, one qubit per face (3 d^3 qubits), each face shared by
// exactly two cells. Cell (x,y,z) owns the three faces on its negative
// sides, so qubit (c, axis) sits between cell c and cell c - e_axis.
class LatticeGraph {
public:
    using CellId = std::int32_t;
    using QubitId = std::int32_t;

    explicit LatticeGraph(int d) : d_(d) {
        if (d < 3 || d % 2 == 0)
            throw std::invalid_argument("LatticeGraph: d must be odd and >= 3");
    }

    int distance() const { return d_; }
    std::int64_t n_cells() const { return std::int64_t(d_) * d_ * d_; }
    std::int64_t n_qubits() const { return 3 * n_cells(); }

    // Full-lattice bookkeeping (primal + dual): 6d^3 cluster qubits, 12d^3
    // edges, and as many creation measurements as connection measurements.
    std::int64_t cluster_qubit_count() const { return 6 * n_cells(); }
    std::int64_t cluster_edge_count() const { return 12 * n_cells(); }

    CellId cell_id(int x, int y, int z) const {
        return CellId((std::int64_t(wrap(x)) * d_ + wrap(y)) * d_ + wrap(z));
    }
    std::array<int, 3> cell_coords(CellId c) const {
        return {int(c / (d_ * d_)), int((c / d_) % d_), int(c % d_)};
    }

    QubitId qubit_id(CellId c, int axis) const { return QubitId(c) * 3 + axis; }
    QubitId qubit_id(int x, int y, int z, int axis) const {
        return qubit_id(cell_id(x, y, z), axis);
    }
    CellId qubit_cell(QubitId q) const { return q / 3; }
    int qubit_axis(QubitId q) const { return q % 3; }

    CellId neighbor_cell(CellId c, int axis, int step) const {
        auto xyz = cell_coords(c);
        xyz[axis] += step;
        return cell_id(xyz[0], xyz[1], xyz[2]);
    }

    // The two cells sharing face q: its owner and the owner's negative
    // neighbor along the face normal.
    std::array<CellId, 2> incident_cells(QubitId q) const {
        check_qubit(q);
        CellId c = qubit_cell(q);
        return {c, neighbor_cell(c, qubit_axis(q), -1)};
    }

    // The six faces of cell c.
    std::array<QubitId, 6> cell_qubits(CellId c) const {
        check_cell(c);
        std::array<QubitId, 6> out{};
        for (int a = 0; a < 3; ++a) {
            out[2 * a] = qubit_id(c, a);
            out[2 * a + 1] = qubit_id(neighbor_cell(c, a, +1), a);
        }
        return out;
    }

    struct Adjacency {
        CellId cell;
        QubitId shared_qubit;
    };

    // The six neighbor cells of c with the face shared with each.
    std::array<Adjacency, 6> cell_adjacency(CellId c) const {
        check_cell(c);
        std::array<Adjacency, 6> out{};
        for (int a = 0; a < 3; ++a) {
            out[2 * a] = {neighbor_cell(c, a, -1), qubit_id(c, a)};
            CellId up = neighbor_cell(c, a, +1);
            out[2 * a + 1] = {up, qubit_id(up, a)};
        }
        return out;
    }

    // The four faces of q's owner cell that are not parallel to q. Used to
    // pick the second qubit removed by a failed creation measurement.
    std::array<QubitId, 4> creation_partners(QubitId q) const {
        check_qubit(q);
        CellId c = qubit_cell(q);
        int a = qubit_axis(q);
        std::array<QubitId, 4> out{};
        int k = 0;
        for (int b = 0; b < 3; ++b) {
            if (b == a) continue;
            out[k++] = qubit_id(c, b);
            out[k++] = qubit_id(neighbor_cell(c, b, +1), b);
        }
        return out;
    }

    // The d^2 faces normal to `axis` lying in the plane x_axis = 0. Every
    // cycle winding once around `axis` crosses this set an odd number of
    // times.
    std::vector<QubitId> logical_surface(int axis) const {
        if (axis < 0 || axis > 2)
            throw std::invalid_argument("logical_surface: axis must be 0, 1 or 2");
        std::vector<QubitId> out;
        out.reserve(std::size_t(d_) * d_);
        for (CellId c = 0; c < n_cells(); ++c)
            if (cell_coords(c)[axis] == 0) out.push_back(qubit_id(c, axis));
        return out;
    }

private:
    int wrap(int v) const {
        v %= d_;
        return v < 0 ? v + d_ : v;
    }
    void check_cell(CellId c) const {
        if (c < 0 || c >= n_cells()) throw std::out_of_range("LatticeGraph: bad cell id");
    }
    void check_qubit(QubitId q) const {
        if (q < 0 || q >= n_qubits()) throw std::out_of_range("LatticeGraph: bad qubit id");
    }

    int d_;
};

}  // namespace htqc
