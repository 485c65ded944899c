#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "htqc/analytic.hpp"
#include "htqc/generation.hpp"

namespace htqc::exp {

// One simulated sweep: either an explicit per-location p_Z list, or a
// single (alpha, eta) operating point whose rates come from the closed
// forms. p_f is always taken from the operating point (or given directly).
struct TrialConfig {
    std::vector<int> distances{3, 5, 7};
    std::vector<double> pz_values;  // knob values; empty -> single (a,h) point
    double alpha = 1.247;
    double eta = 3.3e-3;
    std::optional<double> p_f_override;  // explicit heralded-loss rate
    long trials = 20000;
    std::uint64_t seed = 1;
    ErrorLocationConfig events;
    int workers = 1;

    void validate() const;  // throws std::invalid_argument
    double p_f() const;     // override or closed form at (alpha, eta)
};

struct RateEstimate {
    long trials = 0;
    long failures = 0;
    double p_l = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

// 95% Wilson score interval.
RateEstimate wilson_interval(long failures, long trials);

// Failure count for `trials` decode attempts at one (d, p_z, p_f) point.
// Each trial draws from CounterRng(seed, stream, trial), so the tally is
// identical for any worker count or trial partitioning.
long count_failures(int d, double p_z, double p_f,
                    const ErrorLocationConfig& events, std::uint64_t seed,
                    std::uint64_t stream, long trials, int workers);

struct CurvePoint {
    int d = 0;
    double knob = 0.0;  // per-location p_Z
    RateEstimate est;
};

RateEstimate estimate_logical_rate(int d, double p_z, double p_f,
                                   const ErrorLocationConfig& events,
                                   std::uint64_t seed, std::uint64_t stream,
                                   long trials, int workers);

struct CrossingResult {
    bool found = false;
    bool degenerate = false;  // curves indistinguishable over the range
    double threshold = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

// Pairwise crossings of log p_L vs log knob between distance curves;
// median over pairs, parametric bootstrap for the interval.
CrossingResult find_crossing(const std::vector<CurvePoint>& points,
                             std::uint64_t seed, int bootstrap = 1000);

// Inverts the single-qubit dephasing closed form in eta at fixed alpha.
double map_eta_threshold(double p_z_th, double alpha);

struct ThresholdResult {
    std::vector<CurvePoint> curve;
    CrossingResult crossing;
    double eta_th = 0.0;  // mapped at cfg.alpha; 0 when no crossing
};

ThresholdResult run_threshold(const TrialConfig& cfg);

struct AlphaPoint {
    double alpha = 0.0;
    double p_z_th = 0.0;
    double eta_th = 0.0;
    bool found = false;
};

// Threshold pipeline per alpha; the p_Z sweep grid comes from cfg.pz_values.
std::vector<AlphaPoint> alpha_sweep(const std::vector<double>& alphas,
                                    const TrialConfig& cfg);

struct PercolationPoint {
    int d = 0;
    double fraction = 0.0;
    RateEstimate wrap;  // probability that a supercell wraps the torus
};

struct PercolationResult {
    std::vector<PercolationPoint> curve;
    CrossingResult crossing;  // critical missing fraction
};

// Wrap probability under i.i.d. qubit loss, crossing over distances.
PercolationResult percolation_threshold(const std::vector<int>& distances,
                                        const std::vector<double>& fractions,
                                        long trials, std::uint64_t seed,
                                        int workers);

struct ResourceRow {
    std::string framework;
    double target_p_l = 0.0;
    double distance_real = 0.0;
    int distance = 0;
    double resources = 0.0;  // hybrid/Bell pairs or photons per logical qubit
};

// Overhead comparison at the reference operating point. Targets must lie
// below the extrapolation anchor of every framework.
std::vector<ResourceRow> resource_report(const std::vector<double>& targets);

// JSON manifest describing a run; `id` keys the CSV rows to it.
std::string run_manifest(const TrialConfig& cfg, const std::string& command);
std::string manifest_id(const TrialConfig& cfg, const std::string& command);

// CSV with the fixed column order
//   run_id,d,alpha,eta,p_z_single,p_z_ent,p_f,trials,failures,p_L,ci_low,ci_high
// printed with %.17g so replays are byte-identical.
struct CsvRow {
    std::string run_id;
    int d = 0;
    double alpha = 0.0;
    double eta = 0.0;
    double p_z_single = 0.0;
    double p_z_ent = 0.0;
    double p_f = 0.0;
    long trials = 0;
    long failures = 0;
    double p_l = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

extern const char* const kCsvHeader;
std::string csv_line(const CsvRow& row);
void write_csv(std::ostream& out, const std::vector<CsvRow>& rows);

}  // namespace htqc::exp
