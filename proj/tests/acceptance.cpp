// Acceptance suite: one PASS/FAIL line per criterion, tolerances fixed here.
#include "invlim/admissibility.hpp"
#include "invlim/harness.hpp"
#include "invlim/initial_data.hpp"
#include "invlim/osgood.hpp"
#include "invlim/solver.hpp"
#include "invlim/spectral.hpp"
#include "invlim/theta.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace invlim;
namespace fs = std::filesystem;

namespace {

constexpr double e = std::numbers::e;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
        out.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1)));
    }
    return out;
}

// ---- A1: beta calculus ----------------------------------------------------

Outcome beta_calculus() {
    const double tol = 1e-6;
    bool monotone = true, below_eps = true, to_zero = true;
    double worst_identity = 0.0;
    for (int m = 0; m <= 2; ++m) {
        const ThetaBound theta = ThetaBound::iterated_log(m, ThetaBound::minimal_p0(m));
        const auto ctx = BetaContext::make(1.0, theta);
        double prev = 0.0;
        for (double x : log_grid(1e-12, 1.0, 50)) {
            const double b = eval_beta(ctx, x);
            monotone = monotone && b >= prev;
            prev = b;
            for (double eps : log_grid(1e-4, 1.0 / ctx.p0, 12)) {
                below_eps = below_eps && b <= eval_beta_eps(ctx, eps, x) * (1.0 + 1e-12);
            }
        }
        // beta(x) -> 0: beta(x)/x^(1/2) shrinks along x = 10^-k
        double last = INFINITY;
        for (double x : {1e-10, 1e-40, 1e-100, 1e-200, 1e-300}) {
            const double b = eval_beta(ctx, x);
            to_zero = to_zero && b < last && b < std::sqrt(x);
            last = b;
        }
        for (double x : log_grid(1.0, 1e6, 50)) {
            const double lhs = eval_psi(theta, x);
            const double rhs = x * eval_beta(ctx, 1.0 / x);
            worst_identity = std::max(worst_identity, rel_diff(lhs, rhs));
        }
    }
    const bool pass = monotone && below_eps && to_zero && worst_identity <= tol;
    return {pass, std::string("monotone=") + (monotone ? "yes" : "no") + " beta<=beta_eps=" +
                      (below_eps ? "yes" : "no") + " ->0=" + (to_zero ? "yes" : "no") +
                      " max|psi-x*beta(1/x)|/psi=" + fmt("%.2e", worst_identity) + " (tol 1e-6)"};
}

// ---- A2: psi bound --------------------------------------------------------

Outcome psi_bound() {
    double worst = -INFINITY;  // max of psi / bound
    for (int m = 0; m <= 2; ++m) {
        const ThetaBound theta = ThetaBound::iterated_log(m, ThetaBound::minimal_p0(m));
        for (int i = 0; i < 50; ++i) {
            // ln x uniform on [p0, p0 + 200]
            const double lx = theta.p0() + 200.0 * i / 49.0;
            const double psi = std::exp(minimize_psi(theta, lx).log_value);
            const double bound = e * lx * theta(lx);
            worst = std::max(worst, psi / bound);
        }
    }
    return {worst <= 1.0 + 1e-12, "max psi/(e ln x theta(ln x)) = " + fmt("%.6f", worst) + " over 150 points"};
}

// ---- A3: admissibility verdicts --------------------------------------------

Outcome admissibility() {
    struct Case {
        ThetaBound theta;
        Verdict expected;
    };
    std::vector<Case> cases;
    for (int m = 0; m <= 3; ++m) {
        cases.push_back({ThetaBound::iterated_log(m, ThetaBound::minimal_p0(m)), Verdict::NumericallyDivergent});
    }
    for (double a : {0.5, 1.0, 2.0}) {
        cases.push_back({ThetaBound::power_law(a), Verdict::NumericallyConvergent});
    }
    int correct = 0, total = 0;
    std::string wrong;
    for (const auto& c : cases) {
        for (double M : {0.1, 1.0, 10.0}) {
            const auto v = check_admissible(BetaContext::make(M, c.theta));
            ++total;
            if (v.verdict == c.expected) {
                ++correct;
            } else {
                wrong += " " + c.theta.describe() + "@M=" + fmt("%g", M) + "->" + to_string(v.verdict);
            }
        }
    }
    return {correct == total, std::to_string(correct) + "/" + std::to_string(total) + " verdicts as expected" + wrong};
}

// ---- A4: Osgood / Groenwall and rate-function self-consistency ------------

// Independent re-integration of ds/beta(s) by composite Simpson in ln s.
double simpson_inverse_beta(const BetaContext& ctx, double x, double y, int n = 4000) {
    const double a = std::log(x), b = std::log(y);
    const double h = (b - a) / n;
    const auto g = [&](double l) { return std::exp(l) / eval_beta(ctx, std::exp(l)); };
    double sum = g(a) + g(b);
    for (int i = 1; i < n; ++i) {
        sum += (i % 2 ? 4.0 : 2.0) * g(a + i * h);
    }
    return sum * h / 3.0;
}

Outcome osgood_oracle() {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> ua(1e-3, 10.0), ut(0.01, 5.0);
    double worst_gronwall = 0.0;
    OsgoodProblem prob;
    prob.mu = Modulus::from_log_ratio([](double) { return 0.0; });
    for (int i = 0; i < 100; ++i) {
        prob.a = ua(rng);
        prob.t1 = 5.0;
        const double t = ut(rng);
        worst_gronwall = std::max(worst_gronwall, rel_diff(osgood_upper_bound(prob, t), prob.a * std::exp(t)));
    }
    double worst_self = 0.0;
    for (const char* spec : {"const:1", "iterlog:1", "iterlog:2"}) {
        for (double M : {0.5, 2.0}) {
            for (double T : {0.5, 2.0}) {
                const RateBound rb{BetaContext::make(M, parse_theta(spec)), T, 1.0};
                for (double x : {1e-9, 1e-5, 1e-2}) {
                    const double y = rate_function(rb, x);
                    worst_self = std::max(worst_self, rel_diff(simpson_inverse_beta(rb.beta, x, y), T));
                }
            }
        }
    }
    const bool pass = worst_gronwall <= 1e-6 && worst_self <= 1e-6;
    return {pass, "max Groenwall rel err " + fmt("%.2e", worst_gronwall) + " (100 instances), max |int_x^f(x) ds/beta - T|/T " +
                      fmt("%.2e", worst_self) + " (36 cases, tol 1e-6)"};
}

// ---- A5: bounded-vorticity closed form ------------------------------------

// theta = 1, M = 1, p0: beta(s) = e s ln(1/s) for s <= e^-p0, p0 s^(1-1/p0) above.
// G is an antiderivative of 1/beta; f(x) = G^{-1}(G(x) + T).
double closed_form_rate(double x, double T, double p0) {
    const double sc = std::exp(-p0);
    const double c = -std::log(p0) / e - 1.0 / e;
    const auto G = [&](double s) { return s <= sc ? -std::log(std::log(1.0 / s)) / e : std::pow(s, 1.0 / p0) + c; };
    const double g = G(x) + T;
    return g <= G(sc) ? std::exp(-std::exp(-e * g)) : std::pow(g - c, p0);
}

Outcome closed_form() {
    double worst = 0.0, worst_pure = 0.0;
    for (double T : {1.0, 2.0}) {
        const RateBound rb{BetaContext::make(1.0, ThetaBound::constant(1.0, 2.0)), T, 1.0};
        for (double x : log_grid(1e-12, 1e-3, 10)) {
            const double f = rate_function(rb, x);
            worst = std::max(worst, rel_diff(f, closed_form_rate(x, T, 2.0)));
            worst_pure = std::max(worst_pure, rel_diff(f, std::pow(x, std::exp(-e * T))));
        }
    }
    return {worst <= 0.05, "max rel diff to closed form " + fmt("%.2e", worst) +
                               " (tol 5e-2); single-branch x^exp(-eT) differs by up to " + fmt("%.2f", worst_pure)};
}

// ---- A6: solver oracles ---------------------------------------------------

double rel_l2(const ScalarField& a, const ScalarField& b) {
    ScalarField d(a.grid);
    for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] = a.values[i] - b.values[i];
    return lp_norm(d, 2.0) / lp_norm(b, 2.0);
}

Outcome solver_oracles() {
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    SimConfig tg;
    tg.N = 128;
    tg.nu = 1e-2;
    tg.T = 1.0;
    tg.record_every = 0.1;
    tg.keep_snapshots = true;
    const auto res = run(tg);
    const auto w0 = taylor_green_vorticity(tg.grid());
    double tg_err = 0.0;
    for (std::size_t k = 0; k < res.records.size(); ++k) {
        ScalarField exact = w0;
        for (auto& v : exact.values) v *= std::exp(-2.0 * tg.nu * res.records[k].t);
        tg_err = std::max(tg_err, rel_l2(res.snapshots[k], exact));
    }
    const double tg_time = std::chrono::duration<double>(clock::now() - t0).count();

    t0 = clock::now();
    SimConfig st;
    st.N = 256;
    st.nu = 0.0;
    st.T = 1.0;
    st.record_every = 0.1;
    st.keep_snapshots = true;
    st.initial.kind = InitialData::Kind::Stationary;
    const auto sres = run(st);
    const auto s0 = st.initial.build(st.grid());
    double st_err = 0.0;
    for (const auto& snap : sres.snapshots) st_err = std::max(st_err, rel_l2(snap, s0));
    const double st_time = std::chrono::duration<double>(clock::now() - t0).count();

    const bool pass = tg_err <= 1e-6 && tg_time < 60.0 && st_err <= 1e-6 && st_time < 300.0;
    return {pass, "Taylor-Green max rel err " + fmt("%.2e", tg_err) + " in " + fmt("%.1f", tg_time) +
                      " s; stationary drift " + fmt("%.2e", st_err) + " in " + fmt("%.1f", st_time) + " s (tol 1e-6)"};
}

// ---- A7: vorticity-norm diagnostics ---------------------------------------

Outcome norm_diagnostics() {
    const auto base = [](std::size_t N, double nu) {
        SimConfig c;
        c.N = N;
        c.nu = nu;
        c.T = 2.0;
        c.record_every = 0.1;
        c.initial.kind = InitialData::Kind::GaussianVortices;
        c.initial.core_radius = 0.4;
        return c;
    };
    // p = 2 is excluded from C_hat: there the gradient and vorticity norms coincide.
    double ns_max = 0.0, euler_dev = 0.0;
    std::vector<double> cz;
    for (std::size_t N : {128, 256}) {
        const auto ns = run(base(N, 1e-3));
        const auto eu = run(base(N, 0.0));
        double c_hat = 0.0;
        for (std::size_t i = 0; i < kDiagnosticPs.size(); ++i) {
            for (const auto& r : ns.records) {
                ns_max = std::max(ns_max, r.lp[i] / ns.records.front().lp[i] - 1.0);
                if (i > 0) c_hat = std::max(c_hat, r.glp[i] / (kDiagnosticPs[i] * r.lp[i]));
            }
            for (const auto& r : eu.records) {
                euler_dev = std::max(euler_dev, std::abs(r.lp[i] / eu.records.front().lp[i] - 1.0));
                if (i > 0) c_hat = std::max(c_hat, r.glp[i] / (kDiagnosticPs[i] * r.lp[i]));
            }
        }
        cz.push_back(c_hat);
    }
    const double spread = std::max(cz[0], cz[1]) / std::min(cz[0], cz[1]);
    const bool pass = ns_max <= 1e-3 && euler_dev <= 1e-3 && std::isfinite(spread) && spread < 2.0;
    return {pass, "NS max |w|_p growth " + fmt("%.2e", ns_max) + " (<=1e-3), Euler max dev " + fmt("%.2e", euler_dev) +
                      " (<=1e-3), C_hat(p>=4) N=128/256: " + fmt("%.4f", cz[0]) + "/" + fmt("%.4f", cz[1]) +
                      " (ratio " + fmt("%.3f", spread) + " < 2)"};
}

// ---- A8-A10: sweeps --------------------------------------------------------

SweepConfig sweep_config(InitialData::Kind kind, const std::string& theta, const fs::path& dir) {
    SweepConfig cfg;
    cfg.base.N = 256;
    cfg.base.T = 2.0;
    cfg.base.record_every = 0.1;
    cfg.base.initial.kind = kind;
    if (kind == InitialData::Kind::LogLog) {
        cfg.base.initial.core_radius = 0.7;
    } else {
        cfg.base.initial.core_radius = 0.4;
    }
    cfg.nu_list = log_grid(1e-4, 1e-2, 8);
    std::reverse(cfg.nu_list.begin(), cfg.nu_list.end());
    cfg.theta_spec = theta;
    cfg.output_dir = dir;
    return cfg;
}

std::string sup_list(const SweepSummary& s) {
    std::string out;
    for (double v : s.sup_diffs) out += (out.empty() ? "" : ",") + fmt("%.3g", v);
    return out;
}

Outcome smooth_sweep(const fs::path& dir) {
    const auto res = run_sweep(sweep_config(InitialData::Kind::GaussianVortices, "const:1", dir));
    const auto& s = res.summary;
    const bool in_range = s.alpha_hat >= 0.4 && s.alpha_hat <= 0.6;
    return {s.monotone && in_range, std::string("monotone=") + (s.monotone ? "yes" : "no") + " alpha_hat=" +
                                        fmt("%.4f", s.alpha_hat) + " CI [" + fmt("%.4f", s.alpha_ci_low) + ", " +
                                        fmt("%.4f", s.alpha_ci_high) + "] (required [0.4, 0.6]); sup_t diffs " +
                                        sup_list(s)};
}

Outcome loglog_sweep(const fs::path& dir) {
    const auto res = run_sweep(sweep_config(InitialData::Kind::LogLog, "iterlog:1", dir));
    const auto& s = res.summary;
    const bool to_zero = s.sup_diffs.back() < s.sup_diffs.front();
    bool dominated = false;
    double best_c = INFINITY;
    for (const auto& [c, ok] : s.bound_flags) {
        if (ok && c <= 10.0) {
            dominated = true;
            best_c = std::min(best_c, c);
        }
    }
    const bool energy = s.energy_flags.count(10.0) && s.energy_flags.at(10.0);
    const bool pass = s.monotone && to_zero && dominated && energy && std::isfinite(s.alpha_hat);
    return {pass, std::string("monotone=") + (s.monotone ? "yes" : "no") + " alpha_hat=" + fmt("%.4f", s.alpha_hat) +
                      " CI [" + fmt("%.4f", s.alpha_ci_low) + ", " + fmt("%.4f", s.alpha_ci_high) +
                      "], bound holds at C=" + fmt("%g", best_c) + ", energy slack(C=10) " +
                      fmt("%.3e", s.energy_min_slack.at(10.0)) + " vs error bar " +
                      fmt("%.3e", s.energy_max_error_bar) + "; sup_t diffs " + sup_list(s)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism(const fs::path& first_dir, const fs::path& dir) {
    run_sweep(sweep_config(InitialData::Kind::LogLog, "iterlog:1", dir));
    const std::string a = slurp(first_dir / "records.csv");
    const std::string b = slurp(dir / "records.csv");
    const bool same = !a.empty() && a == b;
    return {same, "records.csv " + std::to_string(a.size()) + " bytes, repeat run " + (same ? "identical" : "differs")};
}

} // namespace

int main(int argc, char** argv) {
    const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "invlim_acceptance";
    fs::remove_all(work);
    fs::create_directories(work);

    struct Criterion {
        const char* name;
        double time_limit;  // seconds; <= 0 means none
        std::function<Outcome()> body;
    };
    const std::vector<Criterion> criteria = {
        {"beta calculus", 10.0, beta_calculus},
        {"psi upper bound", 10.0, psi_bound},
        {"admissibility verdicts", 60.0, admissibility},
        {"Osgood/Groenwall oracle", 30.0, osgood_oracle},
        {"bounded-vorticity closed form", 0.0, closed_form},
        {"solver oracles", 360.0, solver_oracles},
        {"vorticity norm diagnostics", 600.0, norm_diagnostics},
        {"inviscid limit, smooth data", 1800.0, [&] { return smooth_sweep(work / "smooth"); }},
        {"inviscid limit, log-log data", 2700.0, [&] { return loglog_sweep(work / "loglog"); }},
        {"determinism", 0.0, [&] { return determinism(work / "loglog", work / "loglog_repeat"); }},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.body();
        } catch (const std::exception& ex) {
            out = {false, std::string("exception: ") + ex.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit > 0.0 && secs > c.time_limit) {
            out.pass = false;
            out.detail += " [time limit " + fmt("%.0f", c.time_limit) + " s exceeded]";
        }
        failures += out.pass ? 0 : 1;
        std::printf("[%s] A%zu %s: %s (%.1f s)\n", out.pass ? "PASS" : "FAIL", i + 1, c.name, out.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu acceptance criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
