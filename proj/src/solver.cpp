#include "invlim/solver.hpp"

#include "invlim/errors.hpp"
#include "invlim/kv_config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace invlim {

void SimConfig::validate() const {
    grid().validate();
    if (!(nu >= 0.0) || !std::isfinite(nu)) {
        throw DomainError("nu must be finite and >= 0");
    }
    if (!(T >= 0.0) || !std::isfinite(T)) {
        throw DomainError("T must be finite and >= 0");
    }
    if (dt && !(*dt > 0.0)) {
        throw DomainError("dt must be positive");
    }
    if (!(cfl > 0.0) || cfl > 2.0) {
        throw DomainError("cfl must lie in (0, 2]");
    }
    if (!(record_every > 0.0)) {
        throw DomainError("record_every must be positive");
    }
}

DiagnosticsRecord compute_diagnostics(const ScalarField& omega, double t) {
    DiagnosticsRecord r;
    r.t = t;
    const VectorField v = biot_savart(omega);
    const double l2 = lp_norm(v, 2.0);
    r.energy = 0.5 * l2 * l2;
    const ScalarField grad = gradient_magnitude(v);
    for (std::size_t i = 0; i < kDiagnosticPs.size(); ++i) {
        r.lp[i] = lp_norm(omega, kDiagnosticPs[i]);
        r.glp[i] = lp_norm(grad, kDiagnosticPs[i]);
    }
    r.max_vel = lp_norm(v, INFINITY);
    return r;
}

VorticityStepper::VorticityStepper(const Grid& grid, double nu, Dealias dealias)
    : grid_(grid), nu_(nu), wn_(grid) {
    const std::size_t m = wn_.k2.size();
    mask_.assign(m, 1.0);
    if (dealias == Dealias::TwoThirds) {
        const long n = static_cast<long>(grid.n);
        for (std::size_t i = 0; i < m; ++i) {
            if (3 * std::abs(wn_.mode_x[i]) >= n || 3 * std::abs(wn_.mode_y[i]) >= n) {
                mask_[i] = 0.0;
            }
        }
    }
    w_.assign(m, Complex{});
    for (auto* s : {&a_, &b_, &k1_, &k2_, &k3_, &k4_, &tmp_}) {
        s->assign(m, Complex{});
    }
    for (auto* s : {&u_, &v_, &wx_, &wy_}) {
        s->assign(grid.size(), 0.0);
    }
}

void VorticityStepper::set_state(const ScalarField& omega) {
    if (!(omega.grid == grid_)) {
        throw DomainError("initial field grid does not match the stepper");
    }
    transform_for(grid_.n).forward(omega.values, w_);
    w_[0] = 0.0;
    k1_fresh_ = false;
}

ScalarField VorticityStepper::state() const {
    ScalarField out(grid_);
    transform_for(grid_.n).inverse(w_, out.values);
    return out;
}

void VorticityStepper::nonlinear(const std::vector<Complex>& w, std::vector<Complex>& out, double* max_vel) {
    auto& tr = transform_for(grid_.n);
    const std::size_t m = w.size();
    // v = (d_y psi, -d_x psi), psi_hat = w_hat / |k|^2
    for (std::size_t i = 0; i < m; ++i) {
        const Complex psi = w[i] * (mask_[i] * wn_.inv_k2[i]);
        a_[i] = Complex(0.0, wn_.ky[i]) * psi;
        b_[i] = Complex(0.0, -wn_.kx[i]) * psi;
    }
    tr.inverse(a_, u_);
    tr.inverse(b_, v_);
    for (std::size_t i = 0; i < m; ++i) {
        const Complex wm = w[i] * mask_[i];
        a_[i] = Complex(0.0, wn_.kx[i]) * wm;
        b_[i] = Complex(0.0, wn_.ky[i]) * wm;
    }
    tr.inverse(a_, wx_);
    tr.inverse(b_, wy_);
    double peak = 0.0;
    for (std::size_t i = 0; i < u_.size(); ++i) {
        if (max_vel) {
            peak = std::max(peak, std::hypot(u_[i], v_[i]));
        }
        u_[i] = -(u_[i] * wx_[i] + v_[i] * wy_[i]);
    }
    if (max_vel) {
        *max_vel = peak;
    }
    tr.forward(u_, out);
    for (std::size_t i = 0; i < m; ++i) {
        out[i] *= mask_[i];
    }
    out[0] = 0.0;
}

double VorticityStepper::max_velocity() {
    double peak = 0.0;
    nonlinear(w_, k1_, &peak);
    k1_fresh_ = true;
    return peak;
}

void VorticityStepper::advance(double dt) {
    const std::size_t m = w_.size();
    const double half = 0.5 * dt;
    if (!k1_fresh_) {
        nonlinear(w_, k1_);
    }
    k1_fresh_ = false;
    // Lawson RK4 with E(h) = exp(-nu |k|^2 h)
    for (std::size_t i = 0; i < m; ++i) {
        const double e_half = std::exp(-nu_ * wn_.k2[i] * half);
        tmp_[i] = e_half * (w_[i] + half * k1_[i]);
    }
    nonlinear(tmp_, k2_);
    for (std::size_t i = 0; i < m; ++i) {
        const double e_half = std::exp(-nu_ * wn_.k2[i] * half);
        tmp_[i] = e_half * w_[i] + half * k2_[i];
    }
    nonlinear(tmp_, k3_);
    for (std::size_t i = 0; i < m; ++i) {
        const double e_half = std::exp(-nu_ * wn_.k2[i] * half);
        tmp_[i] = e_half * e_half * w_[i] + dt * e_half * k3_[i];
    }
    nonlinear(tmp_, k4_);
    double norm = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double e_half = std::exp(-nu_ * wn_.k2[i] * half);
        const double e_full = e_half * e_half;
        w_[i] = e_full * w_[i] + (dt / 6.0) * (e_full * k1_[i] + 2.0 * e_half * (k2_[i] + k3_[i]) + k4_[i]);
        norm += std::norm(w_[i]);
    }
    w_[0] = 0.0;
    if (!std::isfinite(norm)) {
        std::ostringstream msg;
        msg << "vorticity became non-finite at t = " << time_ + dt << " (dt = " << dt << ")";
        throw InstabilityError(msg.str(), time_ + dt, dt * max_velocity() / grid_.spacing());
    }
    time_ += dt;
}

ScalarField step(const ScalarField& omega, const SimConfig& cfg, double dt) {
    cfg.validate();
    if (!(dt > 0.0)) {
        throw DomainError("dt must be positive");
    }
    VorticityStepper s(omega.grid, cfg.nu, cfg.dealias);
    s.set_state(omega);
    s.advance(dt);
    return s.state();
}

std::vector<double> record_times(double T, double record_every) {
    std::vector<double> out;
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * record_every;
        // merge a record that falls within round-off of T into T itself
        if (t >= T - 1e-12 * std::max(1.0, T)) {
            break;
        }
        out.push_back(t);
    }
    out.push_back(T);
    return out;
}

RunResult run(const SimConfig& cfg, const RecordCallback& on_record) {
    cfg.validate();
    return run(cfg, cfg.initial.build(cfg.grid()), on_record);
}

RunResult run(const SimConfig& cfg, const ScalarField& omega0, const RecordCallback& on_record) {
    cfg.validate();
    if (!(omega0.grid == cfg.grid())) {
        throw DomainError("initial field grid does not match the configuration");
    }
    RunResult result;
    VorticityStepper stepper(cfg.grid(), cfg.nu, cfg.dealias);
    stepper.set_state(omega0);

    const auto take_record = [&](const ScalarField& field, double t) {
        const DiagnosticsRecord rec = compute_diagnostics(field, t);
        result.records.push_back(rec);
        if (cfg.keep_snapshots) {
            result.snapshots.push_back(field);
        }
        if (on_record) {
            on_record(rec, field);
        }
    };

    const auto times = record_times(cfg.T, cfg.record_every);
    // the initial record uses the field exactly as given
    take_record(omega0, 0.0);
    ScalarField current = omega0;
    const double h = cfg.grid().spacing();
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double target = times[k];
        while (stepper.time() < target) {
            const double remaining = target - stepper.time();
            double dt = cfg.dt ? *cfg.dt : cfg.cfl * h / std::max(stepper.max_velocity(), 1e-300);
            bool last = false;
            // finish the interval when within a small fraction of a step
            if (dt >= remaining * (1.0 - 1e-9)) {
                dt = remaining;
                last = true;
            }
            stepper.advance(dt);
            ++result.steps;
            if (last) {
                stepper.set_time(target);
            }
        }
        current = stepper.state();
        take_record(current, target);
    }
    result.final_field = std::move(current);
    return result;
}

Dealias parse_dealias(const std::string& name) {
    if (name == "two_thirds") return Dealias::TwoThirds;
    if (name == "none") return Dealias::None;
    throw DomainError("unknown dealias mode '" + name + "'");
}

std::string to_string(Dealias d) {
    return d == Dealias::TwoThirds ? "two_thirds" : "none";
}

void read_sim_keys(KeyValueConfig& kv, SimConfig& cfg) {
    const std::string& path = kv.source();
    if (auto v = kv.take_double("nu")) cfg.nu = *v;
    if (auto v = kv.take_double("T")) cfg.T = *v;
    if (auto v = kv.take_string("dt"); v && *v != "auto") {
        cfg.dt = parse_number(*v, path + ": dt");
    }
    if (auto v = kv.take_double("cfl")) cfg.cfl = *v;
    if (auto v = kv.take_int("N")) {
        if (*v <= 0) throw DomainError(path + ": N must be positive");
        cfg.N = static_cast<std::size_t>(*v);
    }
    if (auto v = kv.take_double("box_length")) cfg.box_length = *v;
    if (auto v = kv.take_string("dealias")) cfg.dealias = parse_dealias(*v);
    if (auto v = kv.take_double("record_every")) cfg.record_every = *v;
    if (auto v = kv.take_bool("keep_snapshots")) cfg.keep_snapshots = *v;
    if (auto v = kv.take_string("initial")) cfg.initial.kind = parse_initial_kind(*v);
    if (auto v = kv.take_double("amplitude")) cfg.initial.amplitude = *v;
    if (auto v = kv.take_double("core_radius")) cfg.initial.core_radius = *v;
    if (auto v = kv.take_string("cap"); v && *v != "grid") {
        cfg.initial.cap = parse_number(*v, path + ": cap");
    }
    if (auto v = kv.take_double("r_min")) cfg.initial.r_min = *v;
    if (auto v = kv.take_double("r_max")) cfg.initial.r_max = *v;
}

SimConfig load_sim_config(const std::string& path) {
    auto kv = KeyValueConfig::load(path);
    SimConfig cfg;
    read_sim_keys(kv, cfg);
    kv.finish();
    cfg.validate();
    return cfg;
}

} // namespace invlim
