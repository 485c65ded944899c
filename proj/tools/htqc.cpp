// Command-line front end for the simulator and analysis toolkit.
//
// Subcommands: simulate, threshold, sweep-alpha, percolation, resources,
// oracle-verify. Tables go to --out/<name>.{csv,json} (or stdout when no
// --out is given) together with a run manifest keyed by the CSV run_id.
//
// Exit codes: 0 success, 2 invalid configuration, 3 no threshold crossing.

#include <CLI11.hpp>
#include <json.hpp>

#include <htqc/analytic.hpp>
#include <htqc/experiments.hpp>
#include <htqc/hybrid.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::json;

struct CommonOpts {
    htqc::exp::TrialConfig cfg;
    std::string events_rate = "entangling";
    std::string out_dir;
    std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--distances", o.cfg.distances, "code distances");
    cmd->add_option("--alpha", o.cfg.alpha, "coherent amplitude");
    cmd->add_option("--eta", o.cfg.eta, "per-component loss rate");
    cmd->add_option("--pz-list", o.cfg.pz_values, "per-location p_Z sweep");
    cmd->add_option("--trials", o.cfg.trials, "Monte Carlo trials per point");
    cmd->add_option("--seed", o.cfg.seed, "RNG seed");
    cmd->add_option("--events-single", o.cfg.events.n_single_events,
                    "single-qubit error events per qubit");
    cmd->add_option("--events-entangling-rate", o.events_rate,
                    "rate used by measurement-induced events")
        ->check(CLI::IsMember({"single", "entangling"}));
    cmd->add_option("--workers", o.cfg.workers, "decode threads");
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--format", o.format, "table format")
        ->check(CLI::IsMember({"csv", "json"}));
}

void finalize(CommonOpts& o) {
    o.cfg.events.use_entangling_rate = (o.events_rate == "entangling");
    o.cfg.validate();
}

// Writes `text` to out_dir/name, or stdout when no directory was given.
void emit(const CommonOpts& o, const std::string& name,
          const std::string& text) {
    if (o.out_dir.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::filesystem::create_directories(o.out_dir);
    std::ofstream f(std::filesystem::path(o.out_dir) / name,
                    std::ios::binary);
    if (!f) throw std::invalid_argument("cannot write to " + o.out_dir);
    f << text;
}

std::string table_name(const CommonOpts& o, const std::string& stem) {
    return stem + (o.format == "csv" ? ".csv" : ".json");
}

htqc::exp::CsvRow make_row(const CommonOpts& o, const std::string& id,
                           const htqc::exp::CurvePoint& pt) {
    htqc::exp::CsvRow row;
    row.run_id = id;
    row.d = pt.d;
    row.alpha = o.cfg.alpha;
    row.eta = o.cfg.eta;
    row.p_z_single = pt.knob;
    row.p_z_ent = pt.knob;
    row.p_f = o.cfg.p_f();
    row.trials = pt.est.trials;
    row.failures = pt.est.failures;
    row.p_l = pt.est.p_l;
    row.ci_low = pt.est.ci_low;
    row.ci_high = pt.est.ci_high;
    return row;
}

json row_json(const htqc::exp::CsvRow& r) {
    return json{{"run_id", r.run_id},   {"d", r.d},
                {"alpha", r.alpha},     {"eta", r.eta},
                {"p_z_single", r.p_z_single}, {"p_z_ent", r.p_z_ent},
                {"p_f", r.p_f},         {"trials", r.trials},
                {"failures", r.failures}, {"p_L", r.p_l},
                {"ci_low", r.ci_low},   {"ci_high", r.ci_high}};
}

std::string rows_text(const CommonOpts& o,
                      const std::vector<htqc::exp::CsvRow>& rows) {
    if (o.format == "csv") {
        std::ostringstream s;
        htqc::exp::write_csv(s, rows);
        return s.str();
    }
    json arr = json::array();
    for (const auto& r : rows) arr.push_back(row_json(r));
    return arr.dump(2) + "\n";
}

void emit_manifest(const CommonOpts& o, const std::string& command) {
    emit(o, "manifest.json", htqc::exp::run_manifest(o.cfg, command));
}

int cmd_simulate(CommonOpts& o) {
    finalize(o);
    if (o.cfg.pz_values.empty()) {
        // Default knob: the closed-form single-qubit rate at (alpha, eta).
        htqc::HybridParams hp{o.cfg.alpha, o.cfg.eta};
        o.cfg.pz_values = {htqc::analytic::dephasing_single(hp)};
    }
    const auto id = htqc::exp::manifest_id(o.cfg, "simulate");
    std::vector<htqc::exp::CsvRow> rows;
    std::uint64_t stream = 1;
    for (int d : o.cfg.distances)
        for (double pz : o.cfg.pz_values) {
            auto est = htqc::exp::estimate_logical_rate(
                d, pz, o.cfg.p_f(), o.cfg.events, o.cfg.seed, stream++,
                o.cfg.trials, o.cfg.workers);
            rows.push_back(make_row(o, id, {d, pz, est}));
        }
    emit_manifest(o, "simulate");
    emit(o, table_name(o, "simulate"), rows_text(o, rows));
    return 0;
}

int cmd_threshold(CommonOpts& o) {
    finalize(o);
    if (o.cfg.pz_values.empty())
        o.cfg.pz_values = {3e-3, 4.5e-3, 6e-3, 7.5e-3, 9e-3, 1.1e-2};
    const auto id = htqc::exp::manifest_id(o.cfg, "threshold");
    auto res = htqc::exp::run_threshold(o.cfg);
    std::vector<htqc::exp::CsvRow> rows;
    for (const auto& pt : res.curve) rows.push_back(make_row(o, id, pt));
    emit_manifest(o, "threshold");
    emit(o, table_name(o, "curve"), rows_text(o, rows));
    json summary{{"run_id", id},
                 {"found", res.crossing.found},
                 {"degenerate", res.crossing.degenerate},
                 {"p_z_threshold", res.crossing.threshold},
                 {"ci_low", res.crossing.ci_low},
                 {"ci_high", res.crossing.ci_high},
                 {"eta_threshold", res.eta_th}};
    emit(o, "threshold.json", summary.dump(2) + "\n");
    return res.crossing.found ? 0 : 3;
}

int cmd_sweep_alpha(CommonOpts& o, std::vector<double>& alphas) {
    finalize(o);
    if (alphas.empty()) alphas = {0.9, 1.1, 1.25, 1.5, 1.8};
    if (o.cfg.pz_values.empty())
        o.cfg.pz_values = {3e-3, 4.5e-3, 6e-3, 7.5e-3, 9e-3, 1.1e-2};
    const auto id = htqc::exp::manifest_id(o.cfg, "sweep-alpha");
    auto pts = htqc::exp::alpha_sweep(alphas, o.cfg);
    emit_manifest(o, "sweep-alpha");
    if (o.format == "csv") {
        std::ostringstream s;
        s << "run_id,alpha,found,p_z_th,eta_th\n";
        char buf[160];
        for (const auto& p : pts) {
            std::snprintf(buf, sizeof(buf), "%s,%.17g,%d,%.17g,%.17g\n",
                          id.c_str(), p.alpha, p.found ? 1 : 0, p.p_z_th,
                          p.eta_th);
            s << buf;
        }
        emit(o, "sweep-alpha.csv", s.str());
    } else {
        json arr = json::array();
        for (const auto& p : pts)
            arr.push_back({{"run_id", id},
                           {"alpha", p.alpha},
                           {"found", p.found},
                           {"p_z_th", p.p_z_th},
                           {"eta_th", p.eta_th}});
        emit(o, "sweep-alpha.json", arr.dump(2) + "\n");
    }
    return 0;
}

int cmd_percolation(CommonOpts& o, std::vector<double>& fracs) {
    finalize(o);
    if (fracs.empty())
        fracs = {0.20, 0.22, 0.24, 0.25, 0.26, 0.28, 0.30};
    const auto id = htqc::exp::manifest_id(o.cfg, "percolation");
    auto res = htqc::exp::percolation_threshold(o.cfg.distances, fracs,
                                                o.cfg.trials, o.cfg.seed,
                                                o.cfg.workers);
    emit_manifest(o, "percolation");
    if (o.format == "csv") {
        std::ostringstream s;
        s << "run_id,d,fraction,trials,wraps,p_wrap,ci_low,ci_high\n";
        char buf[224];
        for (const auto& p : res.curve) {
            std::snprintf(buf, sizeof(buf),
                          "%s,%d,%.17g,%ld,%ld,%.17g,%.17g,%.17g\n",
                          id.c_str(), p.d, p.fraction, p.wrap.trials,
                          p.wrap.failures, p.wrap.p_l, p.wrap.ci_low,
                          p.wrap.ci_high);
            s << buf;
        }
        emit(o, "percolation.csv", s.str());
    } else {
        json arr = json::array();
        for (const auto& p : res.curve)
            arr.push_back({{"run_id", id},
                           {"d", p.d},
                           {"fraction", p.fraction},
                           {"trials", p.wrap.trials},
                           {"wraps", p.wrap.failures},
                           {"p_wrap", p.wrap.p_l},
                           {"ci_low", p.wrap.ci_low},
                           {"ci_high", p.wrap.ci_high}});
        emit(o, "percolation.json", arr.dump(2) + "\n");
    }
    json summary{{"run_id", id},
                 {"found", res.crossing.found},
                 {"critical_fraction", res.crossing.threshold},
                 {"ci_low", res.crossing.ci_low},
                 {"ci_high", res.crossing.ci_high}};
    emit(o, "percolation-summary.json", summary.dump(2) + "\n");
    return res.crossing.found ? 0 : 3;
}

int cmd_resources(CommonOpts& o, std::vector<double>& targets) {
    if (targets.empty()) targets = {1e-6, 1e-15};
    auto rows = htqc::exp::resource_report(targets);
    if (o.format == "csv") {
        std::ostringstream s;
        s << "framework,target_p_L,distance_real,distance,resources\n";
        char buf[224];
        for (const auto& r : rows) {
            std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%d,%.17g\n",
                          r.framework.c_str(), r.target_p_l, r.distance_real,
                          r.distance, r.resources);
            s << buf;
        }
        emit(o, "resources.csv", s.str());
    } else {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back({{"framework", r.framework},
                           {"target_p_L", r.target_p_l},
                           {"distance_real", r.distance_real},
                           {"distance", r.distance},
                           {"resources", r.resources}});
        emit(o, "resources.json", arr.dump(2) + "\n");
    }
    return 0;
}

// Cross-checks of the exact state-vector oracle against the closed forms
// and the correction tables. Prints one CSV row per check.
int cmd_oracle_verify(CommonOpts& o) {
    using namespace htqc;
    using namespace htqc::oracle;
    std::ostringstream s;
    s << "check,alpha,eta,max_error,pass\n";
    bool all_ok = true;
    char buf[160];
    auto row = [&](const char* name, double alpha, double eta, double err,
                   bool ok) {
        std::snprintf(buf, sizeof(buf), "%s,%.6g,%.6g,%.3g,%d\n", name, alpha,
                      eta, err, ok ? 1 : 0);
        s << buf;
        all_ok = all_ok && ok;
    };

    const std::vector<double> alphas{0.5, 0.7425, 1.0, 1.247, 2.0};
    const std::vector<double> etas{0.0, 1e-3, 3.3e-3, 1e-2};
    for (double a : alphas)
        for (double h : etas) {
            HybridParams hp{a, h};
            HybridState pair(2, 2);
            {
                auto q = plus_logical(a);
                for (const auto& t1 : q.terms())
                    for (const auto& t2 : q.terms())
                        pair.add_term(t1.coeff * t2.coeff,
                                      {t1.label.cv[0], t2.label.cv[0]},
                                      {t1.label.dv[0], t2.label.dv[0]});
            }
            auto dist = hbsm_distribution(pair, h);
            double err =
                std::abs(dist.at(HBSMOutcome::Fail) - analytic::hbsm_failure_prob(hp));
            row("hbsm-failure", a, h, err, err < 1e-9);

            auto rep = ba_induced_channel(h, a);
            auto w = analytic::ba_channel_weights(hp);
            double werr = std::abs(rep.w_ii - w.w_ii);
            werr = std::max(werr, std::abs(rep.w_zi - w.w_zi));
            werr = std::max(werr, std::abs(rep.w_iz - w.w_iz));
            row("ba-channel", a, h, werr, werr < 1e-9);
        }

    for (double h : {0.0, 1e-3, 3.3e-3, 1e-2}) {
        bool ok = verify_bs_losstolerance(h) && verify_bi_losstolerance(h);
        row("loss-tolerance", 1.0, h, ok ? 0.0 : 1.0, ok);
    }

    // Correction-table round trips: generated state must return to the
    // ideal cluster fragment after the tabulated Pauli frame update.
    int bad = 0;
    const HBSMOutcome outs[4] = {HBSMOutcome::PsiPlus, HBSMOutcome::PsiMinus,
                                 HBSMOutcome::PhiPlus, HBSMOutcome::PhiMinus};
    const double a = 1.0;
    auto ref = c3_reference(a);
    for (auto b1 : outs)
        for (auto b2 : outs)
            for (auto click : {BiClick::H, BiClick::V}) {
                auto res = generate_c3(a, b1, b2, click);
                auto st = res.state;
                apply_pauli_string(st, pauli_correction(b1, b2, click));
                st.normalize();
                auto ov = st.inner(ref);
                if (std::abs(std::abs(ov) - 1.0) > 1e-9) ++bad;
            }
    row("correction-table", a, 0.0, static_cast<double>(bad), bad == 0);

    emit(o, "oracle-verify.csv", s.str());
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid topological quantum computing toolkit"};
    app.require_subcommand(1);

    CommonOpts o;
    std::vector<double> alphas, fractions, targets;

    auto* sim = app.add_subcommand("simulate", "logical rate at given points");
    add_common(sim, o);
    auto* thr = app.add_subcommand("threshold", "multi-distance crossing");
    add_common(thr, o);
    auto* swa = app.add_subcommand("sweep-alpha", "threshold vs amplitude");
    add_common(swa, o);
    swa->add_option("--alphas", alphas, "amplitudes to sweep");
    auto* perc = app.add_subcommand("percolation", "loss percolation study");
    add_common(perc, o);
    perc->add_option("--fractions", fractions, "missing-qubit fractions");
    auto* res = app.add_subcommand("resources", "overhead comparison table");
    add_common(res, o);
    res->add_option("--targets", targets, "target logical error rates");
    auto* orv = app.add_subcommand("oracle-verify", "cross-check table");
    add_common(orv, o);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(o);
        if (thr->parsed()) return cmd_threshold(o);
        if (swa->parsed()) return cmd_sweep_alpha(o, alphas);
        if (perc->parsed()) return cmd_percolation(o, fractions);
        if (res->parsed()) return cmd_resources(o, targets);
        if (orv->parsed()) return cmd_oracle_verify(o);
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
