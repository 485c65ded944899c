#pragma once

#include <cmath>
#include <stdexcept>

// Closed-form rates and resource counts for the hybrid-qubit topological
// scheme. Everything here is a pure function of the physical knobs
// (coherent-state amplitude alpha, photon-loss rate eta); the Monte-Carlo
// modules derive all of their rates from these.

namespace htqc {

struct HybridParams {
    double alpha;  // coherent-state amplitude, > 0
    double eta;    // photon-loss rate, in [0, 1)

    HybridParams(double alpha_, double eta_) : alpha(alpha_), eta(eta_) {
        if (!(alpha > 0.0))
            throw std::invalid_argument("HybridParams: alpha must be > 0");
        if (!(eta >= 0.0 && eta < 1.0))
            throw std::invalid_argument("HybridParams: eta must be in [0, 1)");
    }
};

// Derived per-location rates.
struct NoiseModel {
    double alpha_eff;    // attenuated amplitude alpha' = sqrt(1-eta) alpha
    double p_f;          // HBSM failure probability
    double p_z_single;   // single-qubit dephasing probability
    double p_z_ent;      // dephasing per entangling operation (per adjacent qubit)
    double p_leak;       // probability of a hybrid qubit collapsing to vacuum
};

struct ExtrapolationParams {
    double a;        // logical error rate at the second-highest simulated distance
    double a_prime;  // logical error rate at the highest simulated distance
    int d_a_prime;   // the highest simulated distance

    ExtrapolationParams(double a_, double a_prime_, int d_a_prime_)
        : a(a_), a_prime(a_prime_), d_a_prime(d_a_prime_) {
        if (!(0.0 < a_prime && a_prime < a && a < 1.0))
            throw std::invalid_argument("ExtrapolationParams: need 0 < a' < a < 1");
        if (d_a_prime < 3)
            throw std::invalid_argument("ExtrapolationParams: d_a' must be >= 3");
    }
};

namespace analytic {

inline double attenuated_amplitude(const HybridParams& p) {
    return std::sqrt(1.0 - p.eta) * p.alpha;
}

// (1+eta) e^{-2 alpha'^2} / 2; reduces to e^{-2 alpha^2}/2 at eta = 0.
inline double hbsm_failure_prob(const HybridParams& p) {
    double ap = attenuated_amplitude(p);
    return 0.5 * (1.0 + p.eta) * std::exp(-2.0 * ap * ap);
}

// [1 - (1-eta) e^{-2 eta alpha^2}] / 2
inline double dephasing_single(const HybridParams& p) {
    return 0.5 * (1.0 - (1.0 - p.eta) * std::exp(-2.0 * p.eta * p.alpha * p.alpha));
}

// (1 - e^{-4 eta alpha^2}) / 4
inline double dephasing_entangling(const HybridParams& p) {
    return 0.25 * (1.0 - std::exp(-4.0 * p.eta * p.alpha * p.alpha));
}

struct BaChannelWeights {
    double w_ii;
    double w_zi;
    double w_iz;
};

// Pauli weights of the dephasing channel a lossy entangling measurement
// induces on the two adjacent qubits.
inline BaChannelWeights ba_channel_weights(const HybridParams& p) {
    double e = std::exp(-4.0 * p.eta * p.alpha * p.alpha);
    return {0.5 * (1.0 + e), 0.25 * (1.0 - e), 0.25 * (1.0 - e)};
}

// eta e^{-alpha'^2}: overlap of a lossy hybrid qubit with the vacuum.
inline double qubit_loss_prob(const HybridParams& p) {
    double ap = attenuated_amplitude(p);
    return p.eta * std::exp(-ap * ap);
}

// Fraction of lattice qubits lost to heralded measurement failures;
// 1.5 qubits are lost per failure on average.
inline double missing_fraction(const HybridParams& p) {
    return 1.5 * hbsm_failure_prob(p);
}

// Expected hybrid qubits consumed per three-qubit cluster: 8/(1-e^{-2 alpha'^2})^2.
inline double three_cluster_cost(const HybridParams& p) {
    double ap = attenuated_amplitude(p);
    double s = 1.0 - std::exp(-2.0 * ap * ap);
    return 8.0 / (s * s);
}

inline double star_cluster_cost(const HybridParams& p) {
    return 3.0 * three_cluster_cost(p);
}

// 1125 d^3 / [4 (1 - e^{-2 alpha'^2})^2] hybrid qubits for a full lattice
// of distance d (side length 5d/4).
inline double total_resource(int d, const HybridParams& p) {
    if (d < 3) throw std::invalid_argument("total_resource: d must be >= 3");
    double ap = attenuated_amplitude(p);
    double s = 1.0 - std::exp(-2.0 * ap * ap);
    return 1125.0 * double(d) * d * d / (4.0 * s * s);
}

struct RequiredDistance {
    double real;
    int nearest;
};

// Inverts p_L = a' / (a/a')^{(d - d_a')/2} for d. The nearest integer is
// reported alongside the real solution.
inline RequiredDistance required_distance(double target_pl, const ExtrapolationParams& e) {
    if (!(target_pl > 0.0 && target_pl <= e.a_prime))
        throw std::invalid_argument("required_distance: target must be in (0, a']");
    double ratio = e.a / e.a_prime;
    double d = e.d_a_prime + 2.0 * std::log(e.a_prime / target_pl) / std::log(ratio);
    return {d, int(std::lround(d))};
}

// Forward evaluation of the same extrapolation, for round-trip checks.
inline double extrapolated_logical_rate(double d, const ExtrapolationParams& e) {
    return e.a_prime / std::pow(e.a / e.a_prime, (d - e.d_a_prime) / 2.0);
}

// Photon count for the redundantly-encoded photonic scheme:
// (2R+1) * 6 (5d/4)^3.
inline double tpqc_resource(int d, int repeat) {
    if (d < 3) throw std::invalid_argument("tpqc_resource: d must be >= 3");
    if (repeat < 1) throw std::invalid_argument("tpqc_resource: R must be >= 1");
    double side = 5.0 * d / 4.0;
    return (2.0 * repeat + 1.0) * 6.0 * side * side * side;
}

inline NoiseModel make_noise_model(const HybridParams& p) {
    return NoiseModel{attenuated_amplitude(p), hbsm_failure_prob(p),
                      dephasing_single(p),     dephasing_entangling(p),
                      qubit_loss_prob(p)};
}

// Smallest eta with dephasing_single(alpha, eta) = p_z, found by bisection.
double invert_dephasing_single(double p_z, double alpha);

}  // namespace analytic
}  // namespace htqc
