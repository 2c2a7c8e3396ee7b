#pragma once

#include "invlim/osgood.hpp"
#include "invlim/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace invlim {

struct SweepConfig {
    SimConfig base;                        ///< shared initial data, T, grid, cadence
    std::vector<double> nu_list;           ///< nonincreasing, positive
    std::string theta_spec = "const:1";
    std::optional<double> theta_scale;     ///< empty: fitted from the Euler run
    std::optional<double> M;               ///< empty: (max|v_nu| + max|v|)^2 over the sweep
    double p0 = 0.0;                       ///< <= 0: the profile's default
    std::vector<double> R_constants = {0.1, 1.0, 10.0};
    double report_C = 10.0;                ///< calibration used for the per-record bound column
    std::filesystem::path output_dir = "sweep_out";
    bool control_run = true;               ///< Euler at 2N for a discretization error bar
    std::size_t fit_points = 4;            ///< smallest nu values used for the rate fit
    double monotone_slack = 0.05;
    std::size_t bootstrap_samples = 200;
    std::uint64_t bootstrap_seed = 20240917;
    std::size_t workers = 0;               ///< 0: INVLIM_WORKERS or hardware concurrency

    /// Throws DomainError on an empty or increasing nu_list, nonpositive
    /// constants, or a bad base config.
    void validate() const;
};

/// One (nu, t) comparison against the Euler reference.
struct ConvergenceRecord {
    double nu = 0.0;
    double t = 0.0;
    double measured = 0.0;   ///< |v_nu(t) - v(t)|_2
    double bound = 0.0;      ///< f(R nu t) with R = report_C |omega0|_2^2; bounds measured^2
    double ratio = 0.0;      ///< measured^2 / bound (0 when both vanish)
};

/// Discrete check of |w(t)|^2 <= R nu t + 2 int_0^t int |grad v'| |w|^2.
struct EnergySlack {
    std::vector<double> t;
    std::vector<double> lhs;             ///< |w(t)|_2^2
    std::vector<double> transport;       ///< 2 int_0^t int |grad v'| |w|^2 (trapezoid)
    std::vector<double> error_bar;       ///< trapezoid error estimate of `transport`
    double R = 0.0;
    double nu = 0.0;
    double min_slack = 0.0;              ///< min over t > 0 of R nu t + transport - lhs
    double max_error_bar = 0.0;
    bool holds() const { return min_slack >= -max_error_bar; }
};

/// w = v_a - v_b and |grad v_b| at aligned times; v_b plays the role of v'.
/// Throws DomainError when the time grids differ.
EnergySlack check_energy_inequality(const std::vector<double>& times, const std::vector<ScalarField>& omega_a,
                                    const std::vector<ScalarField>& omega_b, double nu, double R);

/// Precomputed per-time terms, so a run need not keep its snapshots.
struct EnergyTerms {
    std::vector<double> t;
    std::vector<double> w_sq;            ///< |w(t)|_2^2
    std::vector<double> transport_rate;  ///< 2 int |grad v'| |w|^2 at t
};
EnergySlack energy_slack(const EnergyTerms& terms, double nu, double R);

struct SweepSummary {
    std::vector<double> nu;
    std::vector<double> sup_diffs;                ///< sup_t measured per nu
    std::vector<double> sup_ratios;               ///< sup_t measured^2 / bound at report_C
    double alpha_hat = 0.0;
    double alpha_ci_low = 0.0;
    double alpha_ci_high = 0.0;
    bool monotone = false;                         ///< sup_diffs nonincreasing within slack
    std::map<double, bool> bound_flags;            ///< per C: measured^2 <= f(R nu t) everywhere
    std::optional<double> smallest_sufficient_C;   ///< empty when no finite C works
    std::map<double, double> energy_min_slack;     ///< per C, min over nu
    std::map<double, bool> energy_flags;           ///< per C: slack >= -error bar for every nu
    double energy_max_error_bar = 0.0;
    double reference_error = 0.0;                  ///< sup_t |v_N - v_2N| of the Euler runs (0 without control)
    double omega0_l2 = 0.0;
    double M = 0.0;
    double theta_scale = 0.0;
    std::string theta;
    double p0 = 0.0;
    std::string code_version;
};

struct SweepResult {
    std::vector<ConvergenceRecord> records;   ///< sorted by nu (list order) then t
    SweepSummary summary;
};

/// Runs Euler, the optional 2N control, and one Navier-Stokes run per nu
/// (concurrently), then writes records.csv and summary.json into output_dir.
/// On a solver instability the records gathered so far are written before
/// the exception propagates.
SweepResult run_sweep(const SweepConfig& cfg);

/// Least-squares slope of ln y against ln x.
double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Reads a flat key = value sweep file (see docs/config.md).
SweepConfig load_sweep_config(const std::string& path);

std::size_t default_worker_count();

/// Version string stamped into reports.
std::string code_version();

} // namespace invlim
