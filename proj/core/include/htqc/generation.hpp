#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "htqc/analytic.hpp"
#include "htqc/lattice.hpp"
#include "htqc/rng.hpp"

namespace htqc {

// How many independent Z-flip opportunities each lattice qubit sees, and
// which rate the measurement-induced ones use. Totals of 4/6/8/10 are the
// sweep points used during calibration; the defaults hold the calibrated
// choice.
struct ErrorLocationConfig {
    int n_single_events = 2;          // calibrated default (4-event total)
    int creation_events_per_qubit = 1;
    int connection_events_per_qubit = 1;
    bool use_entangling_rate = true;  // else measurement events use p_z_single

    ErrorLocationConfig() = default;
    ErrorLocationConfig(int n_single, int creation, int connection,
                        bool entangling = true)
        : n_single_events(n_single),
          creation_events_per_qubit(creation),
          connection_events_per_qubit(connection),
          use_entangling_rate(entangling) {
        if (n_single < 0 || creation < 0 || connection < 0) {
            throw std::invalid_argument("event counts must be nonnegative");
        }
    }

    int total_events() const {
        return n_single_events + creation_events_per_qubit +
               connection_events_per_qubit;
    }

    // Preset keyed by total event count, used by the calibration sweep.
    static ErrorLocationConfig preset(int total_events) {
        switch (total_events) {
            case 4: return ErrorLocationConfig(2, 1, 1);
            case 6: return ErrorLocationConfig(2, 2, 2);
            case 8: return ErrorLocationConfig(4, 2, 2);
            case 10: return ErrorLocationConfig(4, 2, 4);
            default:
                throw std::invalid_argument("no preset for this event total");
        }
    }
};

struct ErrorInstance {
    std::vector<char> missing;  // indexed by qubit id
    std::vector<char> flipped;  // disjoint from missing
};

// Net flip probability of XOR-ing independent Bernoulli events.
inline double xor_rate(double p_single, int k_single, double p_meas,
                       int k_meas) {
    double prod = std::pow(1.0 - 2.0 * p_single, k_single) *
                  std::pow(1.0 - 2.0 * p_meas, k_meas);
    return 0.5 * (1.0 - prod);
}

// Heralded generation failures. Each qubit sees one creation attempt and
// one connection attempt, each failing with p_f/2; a creation failure also
// removes a random partner face, so the expected loss is 1.5*p_f per qubit.
inline std::vector<char> sample_failures(const LatticeGraph& g, double p_f,
                                         CounterRng& rng) {
    if (!(p_f >= 0.0 && p_f <= 0.5)) {
        throw std::invalid_argument("p_f must lie in [0, 1/2]");
    }
    std::vector<char> missing(static_cast<std::size_t>(g.n_qubits()), 0);
    const auto nq = g.n_qubits();
    for (LatticeGraph::QubitId q = 0; q < nq; ++q) {
        double u = rng.uniform();
        if (u < 0.5 * p_f) {
            missing[q] = 1;
            auto partners = g.creation_partners(q);
            missing[partners[rng.below(4)]] = 1;
        } else if (u < p_f) {
            missing[q] = 1;
        }
    }
    return missing;
}

// Z flips on surviving qubits. The XOR of the per-location events is a
// single Bernoulli at the closed-form net rate, so one draw per qubit
// suffices and the draw count stays independent of the config.
inline std::vector<char> sample_flips(const LatticeGraph& g,
                                      const NoiseModel& nm,
                                      const ErrorLocationConfig& cfg,
                                      const std::vector<char>& missing,
                                      CounterRng& rng) {
    double p_meas = cfg.use_entangling_rate ? nm.p_z_ent : nm.p_z_single;
    int k_meas =
        cfg.creation_events_per_qubit + cfg.connection_events_per_qubit;
    double rate = xor_rate(nm.p_z_single, cfg.n_single_events, p_meas, k_meas);
    std::vector<char> flipped(static_cast<std::size_t>(g.n_qubits()), 0);
    const auto nq = g.n_qubits();
    for (LatticeGraph::QubitId q = 0; q < nq; ++q) {
        bool flip = rng.bernoulli(rate);
        if (flip && !missing[q]) flipped[q] = 1;
    }
    return flipped;
}

inline ErrorInstance sample_instance(const LatticeGraph& g,
                                     const HybridParams& params,
                                     const ErrorLocationConfig& cfg,
                                     CounterRng& rng) {
    NoiseModel nm = analytic::make_noise_model(params);
    ErrorInstance inst;
    inst.missing = sample_failures(g, nm.p_f, rng);
    inst.flipped = sample_flips(g, nm, cfg, inst.missing, rng);
    return inst;
}

// Direct-knob variant: a given per-location p_Z with heralded loss rate p_f.
inline ErrorInstance sample_instance_pz(const LatticeGraph& g, double p_z,
                                        double p_f,
                                        const ErrorLocationConfig& cfg,
                                        CounterRng& rng) {
    NoiseModel nm{};
    nm.p_f = p_f;
    nm.p_z_single = p_z;
    nm.p_z_ent = p_z;
    ErrorInstance inst;
    inst.missing = sample_failures(g, p_f, rng);
    inst.flipped = sample_flips(g, nm, cfg, inst.missing, rng);
    return inst;
}

}  // namespace htqc
