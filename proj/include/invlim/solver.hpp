#pragma once

#include "invlim/fft.hpp"
#include "invlim/field.hpp"
#include "invlim/initial_data.hpp"
#include "invlim/spectral.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace invlim {

enum class Dealias { TwoThirds, None };

/// Exponents p at which vorticity and velocity-gradient norms are recorded.
inline constexpr std::array<double, 5> kDiagnosticPs = {2.0, 4.0, 8.0, 16.0, 32.0};

struct SimConfig {
    double nu = 0.0;                 ///< 0 selects Euler
    double T = 1.0;
    std::optional<double> dt;        ///< empty: CFL-limited step, re-evaluated every step
    double cfl = 0.5;
    std::size_t N = 128;
    double box_length = 6.283185307179586;
    Dealias dealias = Dealias::TwoThirds;
    InitialData initial;
    double record_every = 0.1;
    bool keep_snapshots = false;     ///< store the vorticity at every record time

    Grid grid() const { return Grid{N, box_length}; }
    /// Throws DomainError on nonpositive T/dt/record_every, negative nu, bad grid or cfl.
    void validate() const;
};

struct DiagnosticsRecord {
    double t = 0.0;
    double energy = 0.0;                        ///< |v|_2^2 / 2
    std::array<double, 5> lp{};                 ///< |omega|_p for kDiagnosticPs
    std::array<double, 5> glp{};                ///< |grad v|_p for kDiagnosticPs
    double max_vel = 0.0;
};

DiagnosticsRecord compute_diagnostics(const ScalarField& omega, double t);

/// Integrating-factor RK4 for d_t w + v.grad w = nu lap w on the spectral
/// state. The nonlinear term is formed from 2/3-truncated inputs and
/// truncated again, so modes above N/3 only feel diffusion.
class VorticityStepper {
public:
    VorticityStepper(const Grid& grid, double nu, Dealias dealias);

    void set_state(const ScalarField& omega);
    ScalarField state() const;
    double time() const { return time_; }
    void set_time(double t) { time_ = t; }

    /// Advances by dt. Throws InstabilityError when the state stops being finite.
    void advance(double dt);
    /// max |v| of the current state.
    double max_velocity();
    /// dt |v|_inf N / L.
    double cfl_number(double dt) { return dt * max_velocity() / grid_.spacing(); }

private:
    void nonlinear(const std::vector<Complex>& w, std::vector<Complex>& out, double* max_vel = nullptr);

    Grid grid_;
    double nu_;
    Wavenumbers wn_;
    std::vector<double> mask_;
    std::vector<Complex> w_;
    double time_ = 0.0;
    bool k1_fresh_ = false;  ///< k1_ holds the nonlinear term of the current state
    // scratch
    std::vector<Complex> a_, b_, k1_, k2_, k3_, k4_, tmp_;
    std::vector<double> u_, v_, wx_, wy_;
};

/// One integrating-factor RK4 step of the configured equation.
ScalarField step(const ScalarField& omega, const SimConfig& cfg, double dt);

struct RunResult {
    ScalarField final_field;
    std::vector<DiagnosticsRecord> records;
    std::vector<ScalarField> snapshots;   ///< aligned with records when keep_snapshots
    std::size_t steps = 0;
};

/// Called after each record is taken, with the field at that time.
using RecordCallback = std::function<void(const DiagnosticsRecord&, const ScalarField&)>;

/// Steps from 0 to T, stopping exactly at k * record_every and at T.
/// Deterministic: identical configs give bit-identical results.
RunResult run(const SimConfig& cfg, const RecordCallback& on_record = {});
/// Same, from an explicit initial field (must live on cfg.grid()).
RunResult run(const SimConfig& cfg, const ScalarField& omega0, const RecordCallback& on_record = {});

/// Record times k * record_every for k * record_every < T, then T.
std::vector<double> record_times(double T, double record_every);

Dealias parse_dealias(const std::string& name);
std::string to_string(Dealias d);

class KeyValueConfig;

/// Consumes the simulation keys present in `kv` into `cfg`.
void read_sim_keys(KeyValueConfig& kv, SimConfig& cfg);
/// Reads a flat key = value file (see docs/config.md for the keys).
SimConfig load_sim_config(const std::string& path);

} // namespace invlim
