#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "htqc/experiments.hpp"

using namespace htqc;
using namespace htqc::exp;

TEST_CASE("wilson interval") {
    auto e = wilson_interval(0, 100);
    CHECK(e.p_l == 0.0);
    CHECK(e.ci_low == 0.0);
    CHECK(std::abs(e.ci_high - 0.036995) < 1e-4);

    e = wilson_interval(50, 100);
    CHECK(e.p_l == 0.5);
    CHECK(std::abs(e.ci_low - 0.40383) < 1e-4);
    CHECK(std::abs(e.ci_high - 0.59617) < 1e-4);
    CHECK(e.ci_low <= e.p_l);
    CHECK(e.ci_high >= e.p_l);

    e = wilson_interval(100, 100);
    CHECK(e.ci_high == 1.0);
    CHECK(e.ci_low < 1.0);

    CHECK_THROWS(wilson_interval(-1, 100));
    CHECK_THROWS(wilson_interval(5, 4));
    CHECK_THROWS(wilson_interval(0, 0));
}

TEST_CASE("failure counting is worker-count independent") {
    const ErrorLocationConfig ev(2, 1, 1);
    const long a = count_failures(3, 0.03, 0.03, ev, 42, 7, 300, 1);
    const long b = count_failures(3, 0.03, 0.03, ev, 42, 7, 300, 3);
    const long c = count_failures(3, 0.03, 0.03, ev, 42, 7, 300, 16);
    CHECK(a == b);
    CHECK(a == c);
    CHECK(a > 0);  // well above threshold at this rate
}

TEST_CASE("logical rate limits") {
    const ErrorLocationConfig ev(2, 1, 1);
    auto zero = estimate_logical_rate(3, 0.0, 0.0, ev, 1, 1, 100, 1);
    CHECK(zero.failures == 0);
    CHECK(zero.p_l == 0.0);

    // far above threshold the decoder picks a random coset
    auto sat = estimate_logical_rate(3, 0.2, 0.0, ev, 1, 2, 500, 1);
    CHECK(sat.p_l > 0.35);
    CHECK(sat.p_l < 0.65);
}

TEST_CASE("synthetic crossing recovery") {
    const double p_star = 7e-3;
    std::vector<CurvePoint> pts;
    for (int d : {3, 5, 7})
        for (double p : {4.5e-3, 5.5e-3, 6.6e-3, 8e-3, 9.5e-3}) {
            CurvePoint c;
            c.d = d;
            c.knob = p;
            c.est.trials = 1000000;
            c.est.p_l = 0.5 * std::pow(p / p_star, (d + 1) / 2.0);
            c.est.failures = std::lround(c.est.p_l * 1e6);
            pts.push_back(c);
        }
    auto r = find_crossing(pts, 11, 200);
    CHECK(r.found);
    CHECK(std::abs(r.threshold - p_star) / p_star < 0.02);
    CHECK(r.ci_low <= r.threshold);
    CHECK(r.ci_high >= r.threshold);

    // identical curves carry no signal
    std::vector<CurvePoint> same;
    for (int d : {3, 5})
        for (double p : {4e-3, 6e-3, 8e-3}) {
            CurvePoint c;
            c.d = d;
            c.knob = p;
            c.est.trials = 1000;
            c.est.p_l = 0.1;
            c.est.failures = 100;
            same.push_back(c);
        }
    auto rs = find_crossing(same, 1, 50);
    CHECK(!rs.found);
    CHECK(rs.degenerate);

    // strictly ordered curves never bracket
    std::vector<CurvePoint> ordered;
    for (int d : {3, 5})
        for (double p : {4e-3, 6e-3, 8e-3}) {
            CurvePoint c;
            c.d = d;
            c.knob = p;
            c.est.trials = 1000;
            c.est.p_l = (d == 3) ? 0.2 : 0.02;
            c.est.failures = std::lround(c.est.p_l * 1000);
            ordered.push_back(c);
        }
    auto ro = find_crossing(ordered, 1, 50);
    CHECK(!ro.found);
    CHECK(!ro.degenerate);
}

TEST_CASE("eta mapping inverts the dephasing closed form") {
    const double eta = map_eta_threshold(6.9e-3, 1.247);
    CHECK(std::abs(eta - 0.0033796400182924752) < 1e-12);
    const double back =
        analytic::dephasing_single(HybridParams{1.247, eta});
    CHECK(std::abs(back - 6.9e-3) < 1e-9);
    CHECK(map_eta_threshold(0.0, 1.247) == 0.0);
    CHECK_THROWS(map_eta_threshold(0.6, 1.247));
}

TEST_CASE("percolation limits") {
    auto none = percolation_threshold({3, 5}, {0.0}, 50, 9, 1);
    for (const auto& p : none.curve) CHECK(p.wrap.failures == 0);

    auto deep = percolation_threshold({5}, {0.5}, 100, 9, 1);
    CHECK(deep.curve[0].wrap.p_l > 0.9);
}

TEST_CASE("resource comparison table") {
    auto rows = resource_report({1e-6, 1e-15});
    REQUIRE(rows.size() == 10);

    CHECK(rows[0].framework == "hybrid");
    CHECK(rows[0].distance == 14);
    CHECK(std::abs(rows[0].resources - 8.5e5) / 8.5e5 < 0.05);
    CHECK(rows[5].distance == 38);
    CHECK(std::abs(rows[5].resources - 1.7e7) / 1.7e7 < 0.05);

    CHECK(rows[1].framework == "photonic-computational");
    CHECK(rows[1].distance == 225);
    CHECK(std::abs(rows[1].resources - 2e9) / 2e9 < 0.1);
    CHECK(rows[6].distance == 621);
    CHECK(std::abs(rows[6].resources - 4.2e10) / 4.2e10 < 0.1);

    CHECK(rows[2].framework == "photonic-loss");
    CHECK(std::abs(rows[2].resources - 3.8e7) / 3.8e7 < 0.1);
    CHECK(std::abs(rows[7].resources - 7.5e8) / 7.5e8 < 0.1);

    CHECK(rows[3].resources == 60.0);
    CHECK(rows[4].resources == 187.0);

    CHECK_THROWS(resource_report({1e-4}));  // above the anchor
    CHECK_THROWS(resource_report({0.0}));
}

TEST_CASE("manifest and csv plumbing") {
    TrialConfig cfg;
    cfg.pz_values = {5e-3, 7e-3};
    cfg.trials = 10;
    cfg.seed = 123;
    const auto id = manifest_id(cfg, "threshold");
    CHECK(id.size() == 16);
    CHECK(id == manifest_id(cfg, "threshold"));
    CHECK(id != manifest_id(cfg, "simulate"));

    auto j = nlohmann::json::parse(run_manifest(cfg, "threshold"));
    CHECK(j["id"] == id);
    CHECK(j["seed"] == 123);
    CHECK(j["trials"] == 10);
    CHECK(j["distances"].size() == 3);
    CHECK(j["events"]["single"] == cfg.events.n_single_events);

    CsvRow row;
    row.run_id = id;
    row.d = 5;
    row.alpha = 1.247;
    row.eta = 3.3e-3;
    row.p_z_single = 0.0067384395096555295;
    row.p_z_ent = 0.0050792230017029941;
    row.p_f = 0.02260447114017295;
    row.trials = 20000;
    row.failures = 123;
    row.p_l = 123.0 / 20000.0;
    row.ci_low = 0.005;
    row.ci_high = 0.007;
    std::ostringstream out;
    write_csv(out, {row});
    const std::string text = out.str();
    CHECK(text.substr(0, text.find('\n')) ==
          "run_id,d,alpha,eta,p_z_single,p_z_ent,p_f,trials,failures,p_L,"
          "ci_low,ci_high");
    CHECK(text.find(",5,1.2470000000000001,") != std::string::npos);
    CHECK(text.find(",20000,123,") != std::string::npos);
    // byte-identical on re-emission
    std::ostringstream again;
    write_csv(again, {row});
    CHECK(text == again.str());
}

TEST_CASE("config validation") {
    TrialConfig cfg;
    cfg.pz_values = {5e-3};
    CHECK_NOTHROW(cfg.validate());
    cfg.distances = {4};
    CHECK_THROWS(cfg.validate());
    cfg.distances = {3};
    cfg.trials = 0;
    CHECK_THROWS(cfg.validate());
    cfg.trials = 10;
    cfg.pz_values = {0.7};
    CHECK_THROWS(cfg.validate());
    cfg.pz_values = {};
    cfg.eta = 1.5;
    CHECK_THROWS(cfg.validate());
    cfg.eta = 3.3e-3;
    cfg.workers = 0;
    CHECK_THROWS(cfg.validate());
    cfg.workers = 2;
    CHECK_NOTHROW(cfg.validate());
    CHECK(std::abs(cfg.p_f() - 0.02260447114017295) < 1e-15);
    cfg.p_f_override = 0.1;
    CHECK(cfg.p_f() == 0.1);
}

TEST_CASE("threshold pipeline smoke") {
    TrialConfig cfg;
    cfg.distances = {3, 5};
    cfg.pz_values = {3e-3, 7e-3, 1.2e-2};
    cfg.trials = 200;
    cfg.seed = 7;
    cfg.events = ErrorLocationConfig(2, 1, 1);
    auto res = run_threshold(cfg);
    CHECK(res.curve.size() == 6);
    for (const auto& p : res.curve) {
        CHECK(p.est.trials == 200);
        CHECK(p.est.p_l >= 0.0);
        CHECK(p.est.p_l <= 1.0);
    }
    // identical rerun, any worker count
    TrialConfig cfg2 = cfg;
    cfg2.workers = 4;
    auto res2 = run_threshold(cfg2);
    for (std::size_t i = 0; i < res.curve.size(); ++i)
        CHECK(res.curve[i].est.failures == res2.curve[i].est.failures);
}
