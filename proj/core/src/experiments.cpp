#include "htqc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <limits>

#include <json.hpp>

#include "htqc/decoder.hpp"
#include "htqc/lattice.hpp"
#include "htqc/rng.hpp"

namespace htqc::exp {

void TrialConfig::validate() const {
    if (distances.empty())
        throw std::invalid_argument("at least one distance required");
    for (int d : distances)
        if (d < 3 || d % 2 == 0)
            throw std::invalid_argument("distances must be odd and >= 3");
    for (double p : pz_values)
        if (!(p >= 0.0 && p < 0.5))
            throw std::invalid_argument("p_Z values must lie in [0, 1/2)");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    if (!(eta >= 0.0 && eta < 1.0))
        throw std::invalid_argument("eta must lie in [0, 1)");
    const double pf = p_f();
    if (!(pf >= 0.0 && pf <= 0.5))
        throw std::invalid_argument("p_f must lie in [0, 1/2]");
}

double TrialConfig::p_f() const {
    if (p_f_override) return *p_f_override;
    return analytic::hbsm_failure_prob(HybridParams{alpha, eta});
}

RateEstimate wilson_interval(long failures, long trials) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (failures < 0 || failures > trials)
        throw std::invalid_argument("failures out of range");
    const double z = 1.959963984540054;  // 95%
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(failures) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half =
        z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    RateEstimate est;
    est.trials = trials;
    est.failures = failures;
    est.p_l = p;
    est.ci_low = std::min(std::max(0.0, center - half), p);
    est.ci_high = std::max(std::min(1.0, center + half), p);
    return est;
}

long count_failures(int d, double p_z, double p_f,
                    const ErrorLocationConfig& events, std::uint64_t seed,
                    std::uint64_t stream, long trials, int workers) {
    const LatticeGraph g(d);
    auto run_slice = [&](long first, long step) {
        long fails = 0;
        for (long t = first; t < trials; t += step) {
            CounterRng rng(seed, stream, static_cast<std::uint64_t>(t));
            auto inst = sample_instance_pz(g, p_z, p_f, events, rng);
            if (decode(g, inst, 0).logical_flip) ++fails;
        }
        return fails;
    };
    if (workers <= 1) return run_slice(0, 1);
    std::vector<long> partial(workers, 0);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w)
        threads.emplace_back(
            [&, w] { partial[w] = run_slice(w, workers); });
    for (auto& t : threads) t.join();
    long total = 0;
    for (long f : partial) total += f;
    return total;
}

RateEstimate estimate_logical_rate(int d, double p_z, double p_f,
                                   const ErrorLocationConfig& events,
                                   std::uint64_t seed, std::uint64_t stream,
                                   long trials, int workers) {
    return wilson_interval(
        count_failures(d, p_z, p_f, events, seed, stream, trials, workers),
        trials);
}

namespace {

// crossing of one distance pair from log p_L differences on a shared grid;
// returns nan when the pair never brackets a sign change
double pair_crossing(const std::vector<std::pair<double, double>>& lo,
                     const std::vector<std::pair<double, double>>& hi) {
    std::vector<std::pair<double, double>> diffs;  // (log knob, diff)
    for (const auto& [k, pa] : lo)
        for (const auto& [k2, pb] : hi)
            if (k == k2 && pa > 0.0 && pb > 0.0)
                diffs.push_back({std::log(k), std::log(pb) - std::log(pa)});
    std::sort(diffs.begin(), diffs.end());
    for (std::size_t i = 1; i < diffs.size(); ++i) {
        const auto [x0, d0] = diffs[i - 1];
        const auto [x1, d1] = diffs[i];
        if (d0 <= 0.0 && d1 > 0.0) {
            if (d1 == d0) return std::exp(x0);
            return std::exp(x0 - d0 * (x1 - x0) / (d1 - d0));
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double median_crossing(const std::map<int, std::vector<std::pair<double, double>>>&
                           curves) {
    std::vector<double> xs;
    for (auto a = curves.begin(); a != curves.end(); ++a)
        for (auto b = std::next(a); b != curves.end(); ++b) {
            const double x = pair_crossing(a->second, b->second);
            if (!std::isnan(x)) xs.push_back(x);
        }
    if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

CrossingResult find_crossing(const std::vector<CurvePoint>& points,
                             std::uint64_t seed, int bootstrap) {
    CrossingResult res;
    std::map<int, std::vector<std::pair<double, double>>> curves;
    for (const auto& p : points)
        curves[p.d].push_back({p.knob, p.est.p_l});
    if (curves.size() < 2) return res;

    // indistinguishable curves carry no crossing information
    bool all_equal = true;
    const auto& first = curves.begin()->second;
    for (const auto& [d, c] : curves)
        if (c != first) all_equal = false;
    if (all_equal) {
        res.degenerate = true;
        return res;
    }

    const double med = median_crossing(curves);
    if (std::isnan(med)) return res;
    res.found = true;
    res.threshold = med;

    // parametric bootstrap: binomial resample of every point (normal
    // approximation is ample at these counts)
    std::vector<double> boot;
    boot.reserve(bootstrap);
    CounterRng rng(seed, 0xB0075 /*stream*/, 0);
    for (int b = 0; b < bootstrap; ++b) {
        std::map<int, std::vector<std::pair<double, double>>> resampled;
        for (const auto& p : points) {
            const double n = static_cast<double>(p.est.trials);
            const double mean = n * p.est.p_l;
            const double sd = std::sqrt(
                std::max(0.0, n * p.est.p_l * (1.0 - p.est.p_l)));
            const double u1 = std::max(rng.uniform(), 1e-300);
            const double u2 = rng.uniform();
            const double gauss = std::sqrt(-2.0 * std::log(u1)) *
                                 std::cos(2.0 * M_PI * u2);
            double f = std::round(mean + sd * gauss);
            f = std::clamp(f, 0.0, n);
            resampled[p.d].push_back({p.knob, f / n});
        }
        const double x = median_crossing(resampled);
        if (!std::isnan(x)) boot.push_back(x);
    }
    if (boot.size() >= 100) {
        std::sort(boot.begin(), boot.end());
        res.ci_low = boot[static_cast<std::size_t>(0.025 * boot.size())];
        res.ci_high = boot[static_cast<std::size_t>(0.975 * boot.size()) - 1];
    } else {
        res.ci_low = res.ci_high = med;
    }
    return res;
}

double map_eta_threshold(double p_z_th, double alpha) {
    return analytic::invert_dephasing_single(p_z_th, alpha);
}

ThresholdResult run_threshold(const TrialConfig& cfg) {
    cfg.validate();
    if (cfg.pz_values.size() < 3)
        throw std::invalid_argument(
            "threshold estimation needs at least three p_Z values");
    if (cfg.distances.size() < 2)
        throw std::invalid_argument(
            "threshold estimation needs at least two distances");
    ThresholdResult res;
    const double pf = cfg.p_f();
    std::uint64_t stream = 1;
    for (int d : cfg.distances)
        for (double pz : cfg.pz_values) {
            CurvePoint pt;
            pt.d = d;
            pt.knob = pz;
            pt.est = estimate_logical_rate(d, pz, pf, cfg.events, cfg.seed,
                                           stream++, cfg.trials, cfg.workers);
            res.curve.push_back(pt);
        }
    res.crossing = find_crossing(res.curve, cfg.seed);
    if (res.crossing.found && res.crossing.threshold < 0.5)
        res.eta_th = map_eta_threshold(res.crossing.threshold, cfg.alpha);
    return res;
}

std::vector<AlphaPoint> alpha_sweep(const std::vector<double>& alphas,
                                    const TrialConfig& cfg) {
    std::vector<AlphaPoint> out;
    for (double a : alphas) {
        TrialConfig c = cfg;
        c.alpha = a;
        c.p_f_override.reset();  // heralded rate follows the amplitude
        auto th = run_threshold(c);
        AlphaPoint pt;
        pt.alpha = a;
        pt.found = th.crossing.found;
        if (th.crossing.found) {
            pt.p_z_th = th.crossing.threshold;
            pt.eta_th = th.eta_th;
        }
        out.push_back(pt);
    }
    return out;
}

PercolationResult percolation_threshold(const std::vector<int>& distances,
                                        const std::vector<double>& fractions,
                                        long trials, std::uint64_t seed,
                                        int workers) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    PercolationResult res;
    std::uint64_t stream = 0x9E4C0;
    for (int d : distances) {
        const LatticeGraph g(d);
        for (double f : fractions) {
            if (!(f >= 0.0 && f <= 1.0))
                throw std::invalid_argument("fraction out of range");
            const std::uint64_t s = stream++;
            auto run_slice = [&](long first, long step) {
                long wraps = 0;
                for (long t = first; t < trials; t += step) {
                    CounterRng rng(seed, s, static_cast<std::uint64_t>(t));
                    std::vector<char> missing(g.n_qubits(), 0);
                    for (int q = 0; q < g.n_qubits(); ++q)
                        if (rng.bernoulli(f)) missing[q] = 1;
                    if (SupercellPartition(g, missing).percolated()) ++wraps;
                }
                return wraps;
            };
            long wraps = 0;
            if (workers <= 1) {
                wraps = run_slice(0, 1);
            } else {
                std::vector<long> partial(workers, 0);
                std::vector<std::thread> threads;
                for (int w = 0; w < workers; ++w)
                    threads.emplace_back(
                        [&, w] { partial[w] = run_slice(w, workers); });
                for (auto& t : threads) t.join();
                for (long x : partial) wraps += x;
            }
            PercolationPoint pt;
            pt.d = d;
            pt.fraction = f;
            pt.wrap = wilson_interval(wraps, trials);
            res.curve.push_back(pt);
        }
    }
    std::vector<CurvePoint> as_curve;
    for (const auto& p : res.curve) {
        CurvePoint c;
        c.d = p.d;
        c.knob = p.fraction;
        c.est = p.wrap;
        as_curve.push_back(c);
    }
    res.crossing = find_crossing(as_curve, seed ^ 0x5ca1eULL);
    return res;
}

std::vector<ResourceRow> resource_report(const std::vector<double>& targets) {
    // suppression anchors: this work at the operating point; the photonic
    // comparison in both its computational-error and loss-only variants
    const ExtrapolationParams self{4.4e-4, 7.9e-5, 9};
    const double ratio = std::exp(2.0 * std::log(1e9) / (621.0 - 225.0));
    const ExtrapolationParams tp_comp{1e-6 * ratio, 1e-6, 225};
    const ExtrapolationParams tp_loss{0.015, 0.01, 15};
    const HybridParams op{1.247, 3.3e-3};
    constexpr int kRepeat = 7;

    std::vector<ResourceRow> rows;
    for (double target : targets) {
        {
            auto rd = analytic::required_distance(target, self);
            rows.push_back({"hybrid", target, rd.real, rd.nearest,
                            analytic::total_resource(rd.nearest, op)});
        }
        {
            auto rd = analytic::required_distance(target, tp_comp);
            rows.push_back({"photonic-computational", target, rd.real,
                            rd.nearest,
                            analytic::tpqc_resource(rd.nearest, kRepeat)});
        }
        {
            auto rd = analytic::required_distance(target, tp_loss);
            rows.push_back({"photonic-loss", target, rd.real, rd.nearest,
                            analytic::tpqc_resource(rd.nearest, kRepeat)});
        }
        rows.push_back({"matter-bell", target, 0.0, 0, 60.0});
        rows.push_back({"matter-bell-encoded", target, 0.0, 0, 187.0});
    }
    return rows;
}

namespace {

nlohmann::json config_json(const TrialConfig& cfg, const std::string& command) {
    nlohmann::json j;
    j["command"] = command;
    j["seed"] = cfg.seed;
    j["trials"] = cfg.trials;
    j["distances"] = cfg.distances;
    j["pz_values"] = cfg.pz_values;
    j["alpha"] = cfg.alpha;
    j["eta"] = cfg.eta;
    j["p_f"] = cfg.p_f();
    j["events"] = {
        {"single", cfg.events.n_single_events},
        {"creation", cfg.events.creation_events_per_qubit},
        {"connection", cfg.events.connection_events_per_qubit},
        {"entangling_rate", cfg.events.use_entangling_rate},
    };
    j["software"] = "htqc 0.1.0";
    return j;
}

}  // namespace

std::string manifest_id(const TrialConfig& cfg, const std::string& command) {
    const std::string blob = config_json(cfg, command).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : blob) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

std::string run_manifest(const TrialConfig& cfg, const std::string& command) {
    nlohmann::json j = config_json(cfg, command);
    j["id"] = manifest_id(cfg, command);
    return j.dump(2);
}

const char* const kCsvHeader =
    "run_id,d,alpha,eta,p_z_single,p_z_ent,p_f,trials,failures,p_L,ci_low,"
    "ci_high";

std::string csv_line(const CsvRow& r) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "%s,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%ld,%ld,%.17g,%.17g,"
                  "%.17g",
                  r.run_id.c_str(), r.d, r.alpha, r.eta, r.p_z_single,
                  r.p_z_ent, r.p_f, r.trials, r.failures, r.p_l, r.ci_low,
                  r.ci_high);
    return buf;
}

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows) {
    out << kCsvHeader << '\n';
    for (const auto& r : rows) out << csv_line(r) << '\n';
}

}  // namespace htqc::exp
