// Command-line front end: beta/psi evaluation, admissibility checks, rate
// bounds, single simulations and viscosity sweeps.
#include "invlim/admissibility.hpp"
#include "invlim/errors.hpp"
#include "invlim/harness.hpp"
#include "invlim/io_util.hpp"
#include "invlim/osgood.hpp"
#include "invlim/report.hpp"
#include "invlim/snapshot_io.hpp"
#include "invlim/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>

using namespace invlim;
using nlohmann::ordered_json;

namespace {

ordered_json num(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

void print(const ordered_json& j) { std::cout << j.dump() << "\n"; }

BetaContext make_context(double M, const std::string& theta_spec, double p0) {
    BetaContext ctx = BetaContext::make(M, parse_theta(theta_spec, p0));
    ctx.validate();
    return ctx;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inviscid-limit toolkit: admissibility calculus, Osgood rate bounds, spectral solver"};
    app.require_subcommand(1);

    // beta eval / psi eval
    auto* beta = app.add_subcommand("beta", "beta(x) = inf_eps M^eps x^(1-eps) phi(1/eps)");
    beta->require_subcommand(1);
    auto* beta_eval = beta->add_subcommand("eval", "Evaluate beta at x");
    double M = 1.0, p0 = 0.0, x = 0.0;
    std::string theta = "const:1";
    beta_eval->add_option("--M", M, "Hoelder constant M > 0")->default_val(1.0);
    beta_eval->add_option("--theta", theta, "const:C | iterlog:m | pow:a | table:PATH")->required();
    beta_eval->add_option("--p0", p0, "Domain start of theta (default: profile minimum)");
    beta_eval->add_option("--x", x, "Argument in (0, 1]")->required();

    auto* psi = app.add_subcommand("psi", "psi(x) = inf_eps (x^eps / eps) theta(1/eps)");
    psi->require_subcommand(1);
    auto* psi_eval = psi->add_subcommand("eval", "Evaluate psi at x");
    psi_eval->add_option("--theta", theta, "Growth profile")->required();
    psi_eval->add_option("--p0", p0, "Domain start of theta");
    psi_eval->add_option("--x", x, "Argument x > 0")->required();

    auto* adm = app.add_subcommand("admissible", "Admissibility of theta");
    adm->require_subcommand(1);
    auto* adm_check = adm->add_subcommand("check", "Classify divergence of int ds / beta(s)");
    int decades = 10;
    adm_check->add_option("--theta", theta, "Growth profile")->required();
    adm_check->add_option("--M", M, "Hoelder constant")->default_val(1.0);
    adm_check->add_option("--p0", p0, "Domain start of theta");
    adm_check->add_option("--decades", decades, "Decades of depth ln(1/delta) to probe (>= 6)")->default_val(10);

    auto* rate = app.add_subcommand("rate", "Rate function bound f(R nu t)");
    rate->require_subcommand(1);
    double T = 1.0, R = 1.0, nu = 0.0, t = -1.0;
    int steps = 1;
    std::vector<double> nu_list;
    auto* rate_bound = rate->add_subcommand("bound", "Bound on |v_nu - v|_2^2 at one nu");
    auto* rate_table = rate->add_subcommand("table", "CSV of bounds over a nu list");
    for (auto* sub : {rate_bound, rate_table}) {
        sub->add_option("--theta", theta, "Growth profile")->required();
        sub->add_option("--M", M, "Hoelder constant")->default_val(1.0);
        sub->add_option("--p0", p0, "Domain start of theta");
        sub->add_option("--T", T, "Time horizon")->default_val(1.0);
        sub->add_option("--R", R, "Forcing constant R > 0")->default_val(1.0);
    }
    rate_bound->add_option("--nu", nu, "Viscosity")->required();
    rate_bound->add_option("--t", t, "Time in [0, T] (default T)");
    rate_table->add_option("--nu-list", nu_list, "Viscosities")->required()->delimiter(',');
    rate_table->add_option("--steps", steps, "Rows per nu at t = kT/steps, k = 1..steps")->default_val(1);

    auto* sim = app.add_subcommand("sim", "Single simulation");
    sim->require_subcommand(1);
    auto* sim_run = sim->add_subcommand("run", "Run a simulation from a key = value config");
    std::string config, out_dir = "sim_out";
    sim_run->add_option("--config", config, "Config file")->required();
    sim_run->add_option("--out", out_dir, "Output directory")->default_val("sim_out");

    auto* sweep = app.add_subcommand("sweep", "Viscosity sweeps");
    sweep->require_subcommand(1);
    auto* sweep_run = sweep->add_subcommand("run", "Run a sweep from a key = value config");
    sweep_run->add_option("--config", config, "Config file")->required();
    auto* sweep_report = sweep->add_subcommand("report", "Re-emit a report from a sweep directory");
    std::string format = "csv";
    sweep_report->add_option("--dir", out_dir, "Sweep output directory")->required();
    sweep_report->add_option("--format", format, "csv | json | plot")
        ->check(CLI::IsMember({"csv", "json", "plot"}))
        ->default_val("csv");

    CLI11_PARSE(app, argc, argv);

    try {
        if (beta_eval->parsed()) {
            const auto ctx = make_context(M, theta, p0);
            const auto m = minimize_beta(ctx, std::log(x));
            print({{"x", x}, {"M", M}, {"theta", ctx.theta.describe()}, {"p0", ctx.p0},
                   {"beta", num(eval_beta(ctx, x))}, {"eps", m.eps}});
        } else if (psi_eval->parsed()) {
            const auto th = parse_theta(theta, p0);
            const auto m = minimize_psi(th, std::log(x));
            print({{"x", x}, {"theta", th.describe()}, {"psi", num(eval_psi(th, x))}, {"eps", m.eps}});
        } else if (adm_check->parsed()) {
            const auto ctx = make_context(M, theta, p0);
            CutoffSequence cuts{1.0, 10.0, decades + 1};
            const auto v = check_admissible(ctx, cuts);
            ordered_json partial = ordered_json::array();
            for (const auto& pi : v.partial_integrals) {
                partial.push_back({{"log_cutoff", pi.log_cutoff}, {"value", num(pi.value)}});
            }
            print({{"theta", ctx.theta.describe()}, {"M", M}, {"verdict", to_string(v.verdict)},
                   {"tail_exponents", v.tail_exponents}, {"growth_per_decade", num(v.growth_per_decade)},
                   {"partial_integrals", partial}});
        } else if (rate_bound->parsed()) {
            RateBound rb{make_context(M, theta, p0), T, R};
            rb.validate();
            const double tt = t < 0.0 ? T : t;
            print({{"nu", nu}, {"t", tt}, {"bound", num(theoretical_l2_bound(rb, nu, tt))}});
        } else if (rate_table->parsed()) {
            RateBound rb{make_context(M, theta, p0), T, R};
            rb.validate();
            if (steps < 1) throw DomainError("--steps must be >= 1");
            std::cout << "nu,t,bound\n";
            for (double n : nu_list) {
                for (int k = 1; k <= steps; ++k) {
                    const double tt = T * k / steps;
                    std::cout << format_double(n) << "," << format_double(tt) << ","
                              << format_double(theoretical_l2_bound(rb, n, tt)) << "\n";
                }
            }
        } else if (sim_run->parsed()) {
            const SimConfig cfg = load_sim_config(config);
            std::filesystem::create_directories(out_dir);
            const std::filesystem::path dir(out_dir);
            std::size_t k = 0;
            const auto res = run(cfg, [&](const DiagnosticsRecord& rec, const ScalarField& field) {
                if (cfg.keep_snapshots) {
                    char name[32];
                    std::snprintf(name, sizeof name, "snap_%04zu.bin", k);
                    write_snapshot(dir / name, field, rec.t);
                }
                ++k;
            });
            write_diagnostics_csv(dir / "diagnostics.csv", res.records);
            write_snapshot(dir / "final.bin", res.final_field, cfg.T);
            print({{"out", out_dir}, {"records", res.records.size()}, {"steps", res.steps},
                   {"energy", res.records.back().energy}, {"max_vel", res.records.back().max_vel}});
        } else if (sweep_run->parsed()) {
            const SweepConfig cfg = load_sweep_config(config);
            const auto res = run_sweep(cfg);
            const auto& s = res.summary;
            print({{"out", cfg.output_dir.string()}, {"records", res.records.size()},
                   {"alpha_hat", num(s.alpha_hat)}, {"monotone", s.monotone},
                   {"smallest_sufficient_C", s.smallest_sufficient_C ? num(*s.smallest_sufficient_C) : ordered_json(nullptr)}});
        } else if (sweep_report->parsed()) {
            const auto files = emit_report_from_dir(out_dir, parse_report_format(format));
            ordered_json list = ordered_json::array();
            for (const auto& f : files) list.push_back(f.string());
            print({{"written", list}});
        }
    } catch (const InstabilityError& e) {
        print({{"error", e.what()}, {"time", e.time()}, {"cfl", num(e.cfl())}});
        return 3;
    } catch (const std::exception& e) {
        print({{"error", e.what()}});
        return 1;
    }
    return 0;
}
