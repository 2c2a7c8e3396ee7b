#include "invlim/harness.hpp"

#include "invlim/errors.hpp"
#include "invlim/kv_config.hpp"
#include "invlim/report.hpp"
#include "invlim/snapshot_io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#ifndef INVLIM_VERSION
#define INVLIM_VERSION "unknown"
#endif

namespace invlim {

std::string code_version() { return "invlim " INVLIM_VERSION; }

void SweepConfig::validate() const {
    base.validate();
    if (nu_list.empty()) {
        throw DomainError("nu_list is empty");
    }
    for (std::size_t i = 0; i < nu_list.size(); ++i) {
        if (!(nu_list[i] > 0.0) || !std::isfinite(nu_list[i])) {
            throw DomainError("nu_list entries must be positive");
        }
        if (i > 0 && nu_list[i] > nu_list[i - 1]) {
            throw DomainError("nu_list must be nonincreasing");
        }
    }
    if (R_constants.empty()) {
        throw DomainError("R_constants is empty");
    }
    for (double c : R_constants) {
        if (!(c > 0.0)) {
            throw DomainError("R constants must be positive");
        }
    }
    if (!(report_C > 0.0)) {
        throw DomainError("report_C must be positive");
    }
    if (theta_scale && !(*theta_scale > 0.0)) {
        throw DomainError("theta_scale must be positive");
    }
    if (M && !(*M > 0.0)) {
        throw DomainError("M must be positive");
    }
    if (fit_points < 2) {
        throw DomainError("fit_points must be at least 2");
    }
    parse_theta(theta_spec, p0);
}

std::size_t default_worker_count() {
    if (const char* env = std::getenv("INVLIM_WORKERS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0) {
            return static_cast<std::size_t>(n);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw DomainError("fit_log_slope needs two or more matching points");
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
            return std::nan("");
        }
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxx > 0.0 ? sxy / sxx : std::nan("");
}

EnergySlack energy_slack(const EnergyTerms& terms, double nu, double R) {
    const std::size_t n = terms.t.size();
    if (terms.w_sq.size() != n || terms.transport_rate.size() != n || n == 0) {
        throw DomainError("energy terms are misaligned");
    }
    EnergySlack s;
    s.R = R;
    s.nu = nu;
    s.t = terms.t;
    s.lhs = terms.w_sq;
    s.transport.assign(n, 0.0);
    s.error_bar.assign(n, 0.0);
    const auto& g = terms.transport_rate;
    // |g_{i-1} - 2 g_i + g_{i+1}| at interior nodes
    std::vector<double> second(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        second[i] = std::abs(g[i - 1] - 2.0 * g[i] + g[i + 1]);
    }
    for (std::size_t i = 1; i < n; ++i) {
        const double h = terms.t[i] - terms.t[i - 1];
        s.transport[i] = s.transport[i - 1] + 0.5 * h * (g[i - 1] + g[i]);
        double curvature = std::max(second[i - 1], second[i]);
        if (n > 2 && i == 1) curvature = std::max(curvature, second[1]);
        if (n > 2 && i == n - 1) curvature = std::max(curvature, second[n - 2]);
        s.error_bar[i] = s.error_bar[i - 1] + h * curvature / 12.0;
    }
    // t = 0 has zero slack by construction and is left out
    s.min_slack = n > 1 ? INFINITY : 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        s.min_slack = std::min(s.min_slack, R * nu * terms.t[i] + s.transport[i] - s.lhs[i]);
        s.max_error_bar = std::max(s.max_error_bar, s.error_bar[i]);
    }
    return s;
}

namespace {

// |w|^2 and 2 int |grad v_b| |w|^2 for w = v_a - v_b.
std::pair<double, double> energy_terms_at(const ScalarField& a, const ScalarField& b, const ScalarField& grad_b) {
    const VectorField w = biot_savart(zero_mean_difference(a, b));
    double w_sq = 0.0, transport = 0.0;
    for (std::size_t i = 0; i < w.u.size(); ++i) {
        const double m = w.u[i] * w.u[i] + w.v[i] * w.v[i];
        w_sq += m;
        transport += grad_b.values[i] * m;
    }
    const double area = a.grid.cell_area();
    return {w_sq * area, 2.0 * transport * area};
}

} // namespace

EnergySlack check_energy_inequality(const std::vector<double>& times, const std::vector<ScalarField>& omega_a,
                                    const std::vector<ScalarField>& omega_b, double nu, double R) {
    if (omega_a.size() != times.size() || omega_b.size() != times.size()) {
        throw DomainError("snapshot lists do not match the time grid");
    }
    EnergyTerms terms;
    terms.t = times;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!(omega_a[k].grid == omega_b[k].grid)) {
            throw DomainError("snapshot grids differ");
        }
        const auto grad_b = gradient_magnitude(biot_savart(omega_b[k]));
        const auto [w_sq, rate] = energy_terms_at(omega_a[k], omega_b[k], grad_b);
        terms.w_sq.push_back(w_sq);
        terms.transport_rate.push_back(rate);
    }
    return energy_slack(terms, nu, R);
}

namespace {

struct NuRun {
    std::vector<DiagnosticsRecord> diagnostics;
    std::vector<double> measured;
    EnergyTerms energy;
    std::exception_ptr error;
};

void persist(const SweepConfig& cfg, const std::vector<ConvergenceRecord>& records, const SweepSummary* summary) {
    std::filesystem::create_directories(cfg.output_dir);
    emit_report(records, summary ? *summary : SweepSummary{}, sweep_config_to_json(cfg), ReportFormat::CSV,
                cfg.output_dir);
    if (summary) {
        emit_report(records, *summary, sweep_config_to_json(cfg), ReportFormat::JSON, cfg.output_dir);
    }
}

} // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    const Grid grid = cfg.base.grid();
    const ScalarField omega0 = cfg.base.initial.build(grid);
    const auto times = record_times(cfg.base.T, cfg.base.record_every);

    // Euler reference and its 2N control run concurrently.
    SimConfig euler_cfg = cfg.base;
    euler_cfg.nu = 0.0;
    euler_cfg.keep_snapshots = true;
    RunResult euler;
    RunResult control;
    std::exception_ptr control_error;
    {
        std::thread control_thread;
        if (cfg.control_run) {
            control_thread = std::thread([&] {
                try {
                    SimConfig c = euler_cfg;
                    c.N = 2 * cfg.base.N;
                    control = run(c, resample_spectral(omega0, c.N));
                } catch (...) {
                    control_error = std::current_exception();
                }
            });
        }
        try {
            euler = run(euler_cfg, omega0);
        } catch (...) {
            if (control_thread.joinable()) control_thread.join();
            persist(cfg, {}, nullptr);
            throw;
        }
        if (control_thread.joinable()) control_thread.join();
    }
    if (control_error) {
        persist(cfg, {}, nullptr);
        std::rethrow_exception(control_error);
    }

    // Euler-side fields used by every comparison.
    std::vector<ScalarField> euler_grad;
    euler_grad.reserve(times.size());
    for (const auto& w : euler.snapshots) {
        euler_grad.push_back(gradient_magnitude(biot_savart(w)));
    }

    const std::size_t jobs = cfg.nu_list.size();
    std::vector<NuRun> runs(jobs);
    std::atomic<std::size_t> next{0};
    const std::size_t workers = std::min(jobs, cfg.workers ? cfg.workers : default_worker_count());
    const auto worker = [&] {
        for (std::size_t j = next++; j < jobs; j = next++) {
            NuRun& out = runs[j];
            SimConfig c = cfg.base;
            c.nu = cfg.nu_list[j];
            c.keep_snapshots = false;
            std::size_t k = 0;
            try {
                const auto res = run(c, omega0, [&](const DiagnosticsRecord& rec, const ScalarField& field) {
                    const auto [w_sq, rate] = energy_terms_at(field, euler.snapshots[k], euler_grad[k]);
                    out.measured.push_back(std::sqrt(w_sq));
                    out.energy.t.push_back(rec.t);
                    out.energy.w_sq.push_back(w_sq);
                    out.energy.transport_rate.push_back(rate);
                    ++k;
                });
                out.diagnostics = res.records;
            } catch (...) {
                out.error = std::current_exception();
            }
        }
    };
    {
        std::vector<std::thread> pool;
        for (std::size_t w = 1; w < workers; ++w) {
            pool.emplace_back(worker);
        }
        worker();
        for (auto& t : pool) {
            t.join();
        }
    }

    SweepResult result;
    SweepSummary& s = result.summary;
    s.omega0_l2 = lp_norm(omega0, 2.0);
    s.code_version = code_version();
    for (std::size_t j = 0; j < jobs; ++j) {
        for (std::size_t k = 0; k < runs[j].measured.size(); ++k) {
            result.records.push_back({cfg.nu_list[j], times[k], runs[j].measured[k], 0.0, 0.0});
        }
    }
    for (const auto& r : runs) {
        if (r.error) {
            persist(cfg, result.records, nullptr);
            std::rethrow_exception(r.error);
        }
    }

    // Hoelder constant M and the fitted growth profile.
    double euler_vel = 0.0;
    for (const auto& r : euler.records) euler_vel = std::max(euler_vel, r.max_vel);
    double ns_vel = 0.0;
    for (const auto& run : runs) {
        for (const auto& r : run.diagnostics) ns_vel = std::max(ns_vel, r.max_vel);
    }
    s.M = cfg.M ? *cfg.M : std::max((ns_vel + euler_vel) * (ns_vel + euler_vel), 1e-300);
    const ThetaBound unit = parse_theta(cfg.theta_spec, cfg.p0);
    if (cfg.theta_scale) {
        s.theta_scale = *cfg.theta_scale;
    } else {
        // smallest factor with 2 |grad v|_p <= p * factor * theta(p) on every Euler record
        double factor = 0.0;
        for (const auto& r : euler.records) {
            for (std::size_t i = 0; i < kDiagnosticPs.size(); ++i) {
                const double p = kDiagnosticPs[i];
                if (p < unit.p0()) continue;
                factor = std::max(factor, 2.0 * r.glp[i] / (p * unit(p)));
            }
        }
        s.theta_scale = factor > 0.0 ? factor : 1.0;
    }
    const ThetaBound theta = unit.scaled(s.theta_scale);
    s.theta = theta.describe();
    s.p0 = theta.p0();

    // One antiderivative table serves every C: only R = C |omega0|^2 changes.
    RateTable table(RateBound{BetaContext::make(s.M, theta), cfg.base.T, s.omega0_l2 * s.omega0_l2});
    const double w0_sq = s.omega0_l2 * s.omega0_l2;
    const auto bound_at = [&](double C, double nu, double t) {
        return C * w0_sq > 0.0 && t > 0.0 ? table.l2_bound(C * nu, t) : 0.0;
    };

    // Per-record bound at the reporting constant, and the flag for every constant.
    std::vector<double> cs = cfg.R_constants;
    if (std::find(cs.begin(), cs.end(), cfg.report_C) == cs.end()) cs.push_back(cfg.report_C);
    std::sort(cs.begin(), cs.end());
    for (double C : cs) {
        bool ok = true;
        for (auto& rec : result.records) {
            const double b = bound_at(C, rec.nu, rec.t);
            const double sq = rec.measured * rec.measured;
            ok = ok && sq <= b * (1.0 + 1e-12);
            if (C == cfg.report_C) {
                rec.bound = b;
                rec.ratio = b > 0.0 ? sq / b : (sq > 0.0 ? INFINITY : 0.0);
            }
        }
        if (std::find(cfg.R_constants.begin(), cfg.R_constants.end(), C) != cfg.R_constants.end()) {
            s.bound_flags[C] = ok;
        }
    }
    if (w0_sq > 0.0) {
        // measured^2 <= f(C |omega0|^2 nu t)  <=>  C >= f^{-1}(measured^2) / (|omega0|^2 nu t)
        double needed = 0.0;
        for (const auto& rec : result.records) {
            if (rec.t <= 0.0 || rec.measured <= 0.0) continue;
            const double x = table.inverse_rate(rec.measured * rec.measured);
            needed = std::max(needed, x / (w0_sq * rec.nu * rec.t));
        }
        s.smallest_sufficient_C = needed;
    }

    // Per-nu summaries.
    for (std::size_t j = 0; j < jobs; ++j) {
        s.nu.push_back(cfg.nu_list[j]);
        s.sup_diffs.push_back(*std::max_element(runs[j].measured.begin(), runs[j].measured.end()));
        double sup_ratio = 0.0;
        for (const auto& rec : result.records) {
            if (rec.nu == cfg.nu_list[j] && rec.t > 0.0) sup_ratio = std::max(sup_ratio, rec.ratio);
        }
        s.sup_ratios.push_back(sup_ratio);
    }
    s.monotone = true;
    for (std::size_t j = 1; j < jobs; ++j) {
        s.monotone = s.monotone && s.sup_diffs[j] <= s.sup_diffs[j - 1] * (1.0 + cfg.monotone_slack);
    }

    const std::size_t fit_n = std::min(cfg.fit_points, jobs);
    const std::size_t first = jobs - fit_n;
    if (fit_n >= 2) {
        const std::vector<double> fx(s.nu.begin() + first, s.nu.end());
        s.alpha_hat = fit_log_slope(fx, std::vector<double>(s.sup_diffs.begin() + first, s.sup_diffs.end()));
        // bootstrap over resampled record times
        std::mt19937_64 rng(cfg.bootstrap_seed);
        std::uniform_int_distribution<std::size_t> pick(1, times.size() - 1);
        std::vector<double> alphas;
        for (std::size_t b = 0; b < cfg.bootstrap_samples && times.size() > 1; ++b) {
            std::vector<std::size_t> idx(times.size() - 1);
            for (auto& i : idx) i = pick(rng);
            std::vector<double> fy;
            for (std::size_t j = first; j < jobs; ++j) {
                double sup = 0.0;
                for (auto i : idx) sup = std::max(sup, runs[j].measured[i]);
                fy.push_back(sup);
            }
            const double a = fit_log_slope(fx, fy);
            if (std::isfinite(a)) alphas.push_back(a);
        }
        if (!alphas.empty()) {
            std::sort(alphas.begin(), alphas.end());
            const auto q = [&](double f) {
                return alphas[static_cast<std::size_t>(std::floor(f * static_cast<double>(alphas.size() - 1)))];
            };
            s.alpha_ci_low = q(0.025);
            s.alpha_ci_high = q(0.975);
        } else {
            s.alpha_ci_low = s.alpha_ci_high = std::nan("");
        }
    }

    for (double C : cfg.R_constants) {
        double min_slack = INFINITY;
        bool ok = true;
        for (std::size_t j = 0; j < jobs; ++j) {
            const auto e = energy_slack(runs[j].energy, cfg.nu_list[j], C * s.omega0_l2 * s.omega0_l2);
            min_slack = std::min(min_slack, e.min_slack);
            ok = ok && e.holds();
            s.energy_max_error_bar = std::max(s.energy_max_error_bar, e.max_error_bar);
        }
        s.energy_min_slack[C] = min_slack;
        s.energy_flags[C] = ok;
    }

    if (cfg.control_run) {
        for (std::size_t k = 0; k < times.size(); ++k) {
            const auto down = resample_spectral(control.snapshots[k], grid.n);
            s.reference_error = std::max(s.reference_error, l2_velocity_diff(down, euler.snapshots[k]));
        }
    }

    persist(cfg, result.records, &s);
    write_diagnostics_csv(cfg.output_dir / "diagnostics_euler.csv", euler.records);
    for (std::size_t j = 0; j < jobs; ++j) {
        write_diagnostics_csv(cfg.output_dir / ("diagnostics_nu" + std::to_string(j) + ".csv"), runs[j].diagnostics);
    }
    return result;
}

SweepConfig load_sweep_config(const std::string& path) {
    auto kv = KeyValueConfig::load(path);
    SweepConfig cfg;
    read_sim_keys(kv, cfg.base);
    if (auto v = kv.take_double_list("nu_list")) cfg.nu_list = *v;
    if (auto v = kv.take_string("theta")) cfg.theta_spec = *v;
    if (auto v = kv.take_string("theta_scale"); v && *v != "auto") cfg.theta_scale = parse_number(*v, path + ": theta_scale");
    if (auto v = kv.take_string("M"); v && *v != "auto") cfg.M = parse_number(*v, path + ": M");
    if (auto v = kv.take_double("p0")) cfg.p0 = *v;
    if (auto v = kv.take_double_list("R_constants")) cfg.R_constants = *v;
    if (auto v = kv.take_double("report_C")) cfg.report_C = *v;
    if (auto v = kv.take_string("output_dir")) cfg.output_dir = *v;
    if (auto v = kv.take_bool("control_run")) cfg.control_run = *v;
    if (auto v = kv.take_int("fit_points")) cfg.fit_points = static_cast<std::size_t>(std::max(0L, *v));
    if (auto v = kv.take_double("monotone_slack")) cfg.monotone_slack = *v;
    if (auto v = kv.take_int("bootstrap_samples")) cfg.bootstrap_samples = static_cast<std::size_t>(std::max(0L, *v));
    if (auto v = kv.take_int("bootstrap_seed")) cfg.bootstrap_seed = static_cast<std::uint64_t>(*v);
    if (auto v = kv.take_int("workers")) cfg.workers = static_cast<std::size_t>(std::max(0L, *v));
    kv.finish();
    cfg.validate();
    return cfg;
}

} // namespace invlim
