#include "invlim/report.hpp"

#include "invlim/errors.hpp"
#include "invlim/io_util.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace invlim {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// NaN and infinities become null.
ordered_json number(double v) {
    return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

double number_from(const json& j) {
    return j.is_null() ? std::nan("") : j.get<double>();
}

// Map keys are the shortest round-trip spelling of C.
std::string key_of(double c) { return json(c).dump(); }

template <class V>
ordered_json map_to_json(const std::map<double, V>& m) {
    ordered_json out = ordered_json::object();
    for (const auto& [k, v] : m) {
        if constexpr (std::is_same_v<V, double>) {
            out[key_of(k)] = number(v);
        } else {
            out[key_of(k)] = v;
        }
    }
    return out;
}

template <class V>
std::map<double, V> map_from_json(const json& j) {
    std::map<double, V> out;
    for (const auto& [k, v] : j.items()) {
        if constexpr (std::is_same_v<V, double>) {
            out[std::stod(k)] = number_from(v);
        } else {
            out[std::stod(k)] = v.template get<V>();
        }
    }
    return out;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

ReportFormat parse_report_format(const std::string& name) {
    if (name == "csv") return ReportFormat::CSV;
    if (name == "json") return ReportFormat::JSON;
    if (name == "plot") return ReportFormat::PlotData;
    throw DomainError("unknown report format '" + name + "'");
}

std::string records_csv_header() { return "nu,t,measured,measured_sq,bound,ratio"; }

std::string records_csv(const std::vector<ConvergenceRecord>& records) {
    std::string out = records_csv_header() + "\n";
    for (const auto& r : records) {
        out += format_double(r.nu) + "," + format_double(r.t) + "," + format_double(r.measured) + "," +
               format_double(r.measured * r.measured) + "," + format_double(r.bound) + "," +
               format_double(r.ratio) + "\n";
    }
    return out;
}

std::vector<ConvergenceRecord> parse_records_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != records_csv_header()) {
        throw IoError("records CSV lacks its header");
    }
    std::vector<ConvergenceRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> cols;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) {
            cols.push_back(std::strtod(cell.c_str(), nullptr));
        }
        if (cols.size() != 6) {
            throw IoError("malformed records row: " + line);
        }
        out.push_back({cols[0], cols[1], cols[2], cols[4], cols[5]});
    }
    return out;
}

ordered_json sweep_config_to_json(const SweepConfig& cfg) {
    ordered_json j;
    const SimConfig& b = cfg.base;
    j["nu_list"] = cfg.nu_list;
    j["T"] = b.T;
    j["dt"] = b.dt ? ordered_json(*b.dt) : ordered_json("auto");
    j["cfl"] = b.cfl;
    j["N"] = b.N;
    j["box_length"] = b.box_length;
    j["dealias"] = to_string(b.dealias);
    j["record_every"] = b.record_every;
    j["initial"] = to_string(b.initial.kind);
    j["amplitude"] = b.initial.amplitude;
    j["core_radius"] = b.initial.core_radius;
    j["cap"] = b.initial.cap > 0.0 ? ordered_json(b.initial.cap) : ordered_json("grid");
    j["r_min"] = b.initial.r_min;
    j["r_max"] = b.initial.r_max;
    j["theta"] = cfg.theta_spec;
    j["theta_scale"] = cfg.theta_scale ? ordered_json(*cfg.theta_scale) : ordered_json("auto");
    j["M"] = cfg.M ? ordered_json(*cfg.M) : ordered_json("auto");
    j["p0"] = cfg.p0;
    j["R_constants"] = cfg.R_constants;
    j["report_C"] = cfg.report_C;
    j["control_run"] = cfg.control_run;
    j["fit_points"] = cfg.fit_points;
    j["monotone_slack"] = cfg.monotone_slack;
    j["bootstrap_samples"] = cfg.bootstrap_samples;
    j["bootstrap_seed"] = cfg.bootstrap_seed;
    return j;
}

ordered_json summary_to_json(const SweepSummary& s, const ordered_json& config_echo) {
    ordered_json j;
    j["code_version"] = s.code_version;
    j["alpha_hat"] = number(s.alpha_hat);
    j["alpha_ci"] = {number(s.alpha_ci_low), number(s.alpha_ci_high)};
    ordered_json per_nu = ordered_json::array();
    for (std::size_t i = 0; i < s.nu.size(); ++i) {
        per_nu.push_back({{"nu", s.nu[i]}, {"sup_diff", number(s.sup_diffs[i])}, {"sup_ratio", number(s.sup_ratios[i])}});
    }
    j["sup_diffs"] = per_nu;
    j["monotone"] = s.monotone;
    j["bound_flags"] = map_to_json(s.bound_flags);
    j["smallest_sufficient_C"] = s.smallest_sufficient_C ? number(*s.smallest_sufficient_C) : ordered_json(nullptr);
    j["energy_min_slack"] = map_to_json(s.energy_min_slack);
    j["energy_flags"] = map_to_json(s.energy_flags);
    j["energy_max_error_bar"] = number(s.energy_max_error_bar);
    j["reference_error"] = number(s.reference_error);
    j["omega0_l2"] = number(s.omega0_l2);
    j["M"] = number(s.M);
    j["theta"] = s.theta;
    j["theta_scale"] = number(s.theta_scale);
    j["p0"] = number(s.p0);
    j["config"] = config_echo;
    return j;
}

SweepSummary summary_from_json(const json& j) {
    SweepSummary s;
    try {
        s.code_version = j.at("code_version").get<std::string>();
        s.alpha_hat = number_from(j.at("alpha_hat"));
        s.alpha_ci_low = number_from(j.at("alpha_ci").at(0));
        s.alpha_ci_high = number_from(j.at("alpha_ci").at(1));
        for (const auto& e : j.at("sup_diffs")) {
            s.nu.push_back(e.at("nu").get<double>());
            s.sup_diffs.push_back(number_from(e.at("sup_diff")));
            s.sup_ratios.push_back(number_from(e.at("sup_ratio")));
        }
        s.monotone = j.at("monotone").get<bool>();
        s.bound_flags = map_from_json<bool>(j.at("bound_flags"));
        if (!j.at("smallest_sufficient_C").is_null()) {
            s.smallest_sufficient_C = j.at("smallest_sufficient_C").get<double>();
        }
        s.energy_min_slack = map_from_json<double>(j.at("energy_min_slack"));
        s.energy_flags = map_from_json<bool>(j.at("energy_flags"));
        s.energy_max_error_bar = number_from(j.at("energy_max_error_bar"));
        s.reference_error = number_from(j.at("reference_error"));
        s.omega0_l2 = number_from(j.at("omega0_l2"));
        s.M = number_from(j.at("M"));
        s.theta = j.at("theta").get<std::string>();
        s.theta_scale = number_from(j.at("theta_scale"));
        s.p0 = number_from(j.at("p0"));
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed summary: ") + e.what());
    }
    return s;
}

std::vector<std::filesystem::path> emit_report(const std::vector<ConvergenceRecord>& records,
                                               const SweepSummary& summary, const ordered_json& config_echo,
                                               ReportFormat format, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory '" + dir.string() + "'");
    }
    std::vector<std::filesystem::path> written;
    const auto write = [&](const std::filesystem::path& name, const std::string& content) {
        atomic_write_file(dir / name, content);
        written.push_back(dir / name);
    };
    switch (format) {
    case ReportFormat::CSV:
        write("records.csv", records_csv(records));
        break;
    case ReportFormat::JSON:
        write("summary.json", summary_to_json(summary, config_echo).dump(2) + "\n");
        break;
    case ReportFormat::PlotData: {
        // nu values in first-seen order
        std::vector<double> nus;
        for (const auto& r : records) {
            if (nus.empty() || nus.back() != r.nu) nus.push_back(r.nu);
        }
        std::string measured = "# nu sup_t_measured\n";
        std::string bound = "# nu sup_t_bound\n";
        for (std::size_t j = 0; j < nus.size(); ++j) {
            double sup_m = 0.0, sup_b = 0.0;
            std::string curve = "# t measured measured_sq bound\n";
            for (const auto& r : records) {
                if (r.nu != nus[j]) continue;
                sup_m = std::max(sup_m, r.measured);
                sup_b = std::max(sup_b, r.bound);
                curve += format_double(r.t) + " " + format_double(r.measured) + " " +
                         format_double(r.measured * r.measured) + " " + format_double(r.bound) + "\n";
            }
            measured += format_double(nus[j]) + " " + format_double(sup_m) + "\n";
            bound += format_double(nus[j]) + " " + format_double(sup_b) + "\n";
            write("plot_measured_vs_t_nu" + std::to_string(j) + ".dat", curve);
        }
        write("plot_measured_vs_nu.dat", measured);
        write("plot_bound_vs_nu.dat", bound);
        break;
    }
    }
    return written;
}

std::vector<std::filesystem::path> emit_report_from_dir(const std::filesystem::path& dir, ReportFormat format) {
    const auto records = parse_records_csv(read_text(dir / "records.csv"));
    if (format == ReportFormat::JSON) {
        ordered_json j;
        try {
            j = ordered_json::parse(read_text(dir / "summary.json"));
        } catch (const json::exception& e) {
            throw IoError(std::string("malformed summary.json: ") + e.what());
        }
        const ordered_json echo = j.contains("config") ? j.at("config") : ordered_json::object();
        return emit_report(records, summary_from_json(json::parse(j.dump())), echo, format, dir);
    }
    return emit_report(records, SweepSummary{}, ordered_json::object(), format, dir);
}

} // namespace invlim
