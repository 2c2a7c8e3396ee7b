#include "doctest.h"

#include "invlim/errors.hpp"
#include "invlim/harness.hpp"
#include "invlim/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace invlim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SweepConfig small_sweep(const fs::path& dir) {
    SweepConfig cfg;
    cfg.base.N = 32;
    cfg.base.T = 0.2;
    cfg.base.record_every = 0.05;
    cfg.base.initial.kind = InitialData::Kind::GaussianVortices;
    cfg.nu_list = {1e-2, 3e-3, 1e-3};
    cfg.output_dir = dir;
    cfg.workers = 2;
    cfg.bootstrap_samples = 20;
    return cfg;
}

} // namespace

TEST_CASE("log-log slope of an exact power law") {
    const std::vector<double> x = {1e-4, 3e-4, 1e-3, 5e-3};
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * std::pow(v, 0.7));
    CHECK(fit_log_slope(x, y) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(std::isnan(fit_log_slope({1e-3, 1e-3}, {1.0, 2.0})));
    CHECK_THROWS_AS(fit_log_slope({1.0}, {1.0}), DomainError);
}

TEST_CASE("energy slack: trapezoid with linear rate is exact") {
    EnergyTerms terms;
    for (int k = 0; k <= 4; ++k) {
        const double t = 0.25 * k;
        terms.t.push_back(t);
        terms.transport_rate.push_back(2.0 + 4.0 * t);   // integral 2t + 2t^2
        terms.w_sq.push_back(0.0);
    }
    const auto s = energy_slack(terms, 1e-3, 5.0);
    CHECK(s.transport.back() == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(s.max_error_bar == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    // w = 0: the slack is R nu t + transport, smallest at the first positive time
    CHECK(s.min_slack == doctest::Approx(5.0 * 1e-3 * 0.25 + 2.0 * 0.25 + 2.0 * 0.0625).epsilon(1e-14));
    CHECK(s.holds());
}

TEST_CASE("energy inequality: identical fields and identical runs") {
    SimConfig cfg;
    cfg.N = 32;
    cfg.nu = 1e-2;
    cfg.T = 0.2;
    cfg.record_every = 0.05;
    cfg.keep_snapshots = true;
    cfg.initial.kind = InitialData::Kind::GaussianVortices;
    const auto a = run(cfg);
    const auto b = run(cfg);
    std::vector<double> times;
    for (const auto& r : a.records) times.push_back(r.t);
    const auto s = check_energy_inequality(times, a.snapshots, b.snapshots, cfg.nu, 0.0);
    for (double l : s.lhs) CHECK(l == 0.0);
    const auto s2 = check_energy_inequality(times, a.snapshots, a.snapshots, cfg.nu, 3.0);
    CHECK(s2.min_slack == doctest::Approx(3.0 * cfg.nu * 0.05).epsilon(1e-12));

    std::vector<double> short_times(times.begin(), times.end() - 1);
    CHECK_THROWS_AS(check_energy_inequality(short_times, a.snapshots, b.snapshots, cfg.nu, 1.0), DomainError);
}

TEST_CASE("energy inequality: Navier-Stokes against Euler") {
    SimConfig cfg;
    cfg.N = 64;
    cfg.T = 0.5;
    cfg.record_every = 0.05;
    cfg.keep_snapshots = true;
    cfg.initial.kind = InitialData::Kind::GaussianVortices;
    const auto euler = run(cfg);
    cfg.nu = 5e-3;
    const auto ns = run(cfg);
    std::vector<double> times;
    for (const auto& r : ns.records) times.push_back(r.t);
    const double w0 = lp_norm(cfg.initial.build(cfg.grid()), 2.0);
    const auto s = check_energy_inequality(times, ns.snapshots, euler.snapshots, cfg.nu, 10.0 * w0 * w0);
    CHECK(s.holds());
    CHECK(s.lhs.back() > 0.0);
}

TEST_CASE("sweep records, reports and determinism") {
    const fs::path dir = fs::temp_directory_path() / "invlim_test_sweep";
    fs::remove_all(dir);
    auto cfg = small_sweep(dir / "a");
    const auto res = run_sweep(cfg);
    REQUIRE(res.records.size() == 3 * 5);
    CHECK(res.records.front().t == 0.0);
    CHECK(res.records.front().measured == 0.0);
    for (const auto& r : res.records) {
        CHECK(r.measured >= 0.0);
        CHECK(r.bound >= 0.0);
    }
    const auto& s = res.summary;
    REQUIRE(s.sup_diffs.size() == 3);
    CHECK(s.monotone);
    CHECK(s.sup_diffs[2] < s.sup_diffs[0]);
    CHECK(std::isfinite(s.alpha_hat));
    CHECK(s.bound_flags.size() == 3);
    CHECK(s.energy_flags.at(10.0));
    CHECK(fs::exists(dir / "a" / "records.csv"));
    CHECK(fs::exists(dir / "a" / "summary.json"));

    // second identical sweep: bit-identical CSV
    cfg.output_dir = dir / "b";
    cfg.workers = 1;
    run_sweep(cfg);
    CHECK(slurp(dir / "a" / "records.csv") == slurp(dir / "b" / "records.csv"));

    // duplicate nu values give identical records
    auto dup = small_sweep(dir / "c");
    dup.nu_list = {3e-3, 3e-3};
    const auto d = run_sweep(dup);
    const std::size_t half = d.records.size() / 2;
    for (std::size_t k = 0; k < half; ++k) {
        CHECK(d.records[k].measured == d.records[k + half].measured);
        CHECK(d.records[k].t == d.records[k + half].t);
    }

    // plot data and re-emission from the directory
    const auto plots = emit_report_from_dir(dir / "a", ReportFormat::PlotData);
    CHECK(plots.size() == 3 + 2);
    CHECK(fs::exists(dir / "a" / "plot_measured_vs_nu.dat"));
    const std::string before = slurp(dir / "a" / "summary.json");
    emit_report_from_dir(dir / "a", ReportFormat::JSON);
    CHECK(slurp(dir / "a" / "summary.json") == before);
    fs::remove_all(dir);
}

TEST_CASE("sweep config validation") {
    SweepConfig cfg;
    CHECK_THROWS_AS(cfg.validate(), DomainError);   // empty nu_list
    cfg.nu_list = {1e-3, 1e-2};
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg.nu_list = {1e-2, 1e-3};
    cfg.R_constants = {0.0};
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg.R_constants = {1.0};
    cfg.theta_spec = "bogus";
    CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("sweep config file") {
    const fs::path path = fs::temp_directory_path() / "invlim_sweep.cfg";
    {
        std::ofstream out(path);
        out << "N = 64\nT = 1\nnu_list = 1e-2, 1e-3\ntheta = iterlog:1\nM = auto\ntheta_scale = 2.5\n"
               "R_constants = 1, 10\noutput_dir = out\nworkers = 3\n";
    }
    const auto cfg = load_sweep_config(path.string());
    CHECK(cfg.base.N == 64);
    CHECK(cfg.nu_list == std::vector<double>{1e-2, 1e-3});
    CHECK(cfg.theta_spec == "iterlog:1");
    CHECK(!cfg.M);
    CHECK(*cfg.theta_scale == 2.5);
    CHECK(cfg.R_constants == std::vector<double>{1.0, 10.0});
    CHECK(cfg.workers == 3);
    {
        std::ofstream out(path);
        out << "nu_list = 1e-2\nfoo = 1\n";
    }
    CHECK_THROWS_AS(load_sweep_config(path.string()), DomainError);
    fs::remove(path);
}

TEST_CASE("report formats") {
    CHECK(records_csv({}) == records_csv_header() + "\n");
    std::vector<ConvergenceRecord> recs;
    for (double nu : {1e-2, 1e-3, 1e-4}) {
        for (int k = 0; k < 10; ++k) recs.push_back({nu, 0.1 * k, 1e-3 * k, 1e-2, 0.1 * k});
    }
    const std::string csv = records_csv(recs);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 31);
    const auto back = parse_records_csv(csv);
    REQUIRE(back.size() == 30);
    CHECK(back[17].t == recs[17].t);
    CHECK(back[17].measured == recs[17].measured);

    SweepSummary s;
    s.nu = {1e-2, 1e-3};
    s.sup_diffs = {0.1, 0.01 / 3.0};
    s.sup_ratios = {0.5, std::nan("")};
    s.alpha_hat = 0.4999999999999999;
    s.alpha_ci_low = 0.41;
    s.alpha_ci_high = 0.62;
    s.monotone = true;
    s.bound_flags = {{0.1, false}, {10.0, true}};
    s.smallest_sufficient_C = 2.0 / 3.0;
    s.energy_min_slack = {{0.1, -1e-9}, {10.0, 3.5e-4}};
    s.energy_flags = {{0.1, false}, {10.0, true}};
    s.theta = "iterlog:1 scale=2 p0=2";
    s.code_version = code_version();
    const auto j = summary_to_json(s, nlohmann::ordered_json::object());
    const auto r = summary_from_json(nlohmann::json::parse(j.dump()));
    CHECK(r.alpha_hat == s.alpha_hat);
    CHECK(r.sup_diffs == s.sup_diffs);
    CHECK(std::isnan(r.sup_ratios[1]));
    CHECK(r.bound_flags == s.bound_flags);
    CHECK(*r.smallest_sufficient_C == *s.smallest_sufficient_C);
    CHECK(r.energy_min_slack == s.energy_min_slack);
    CHECK(r.theta == s.theta);
    CHECK(summary_to_json(r, nlohmann::ordered_json::object()).dump() == j.dump());

    CHECK_THROWS_AS(emit_report(recs, s, {}, ReportFormat::CSV, "/proc/invlim_nope"), IoError);
    CHECK_THROWS_AS(parse_report_format("xml"), DomainError);
}
