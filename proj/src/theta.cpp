#include "invlim/theta.hpp"

#include "invlim/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace invlim {

namespace {

double parse_number(std::string_view text, std::string_view what) {
    std::string s(text);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(s, &used);
    } catch (const std::exception&) {
        throw DomainError("cannot parse " + std::string(what) + " from '" + s + "'");
    }
    if (used != s.size()) {
        throw DomainError("trailing characters in " + std::string(what) + " '" + s + "'");
    }
    return value;
}

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

} // namespace

ThetaBound ThetaBound::constant(double scale, double p0) {
    ThetaBound t;
    t.kind_ = ThetaKind::Constant;
    t.scale_ = scale;
    t.p0_ = p0;
    t.check_positive_at_p0();
    return t;
}

ThetaBound ThetaBound::iterated_log(int m, double p0, double scale) {
    if (m < 0) {
        throw DomainError("iterated-log order must be nonnegative");
    }
    ThetaBound t;
    t.kind_ = ThetaKind::IteratedLog;
    t.order_ = m;
    t.scale_ = scale;
    t.p0_ = p0;
    t.check_positive_at_p0();
    return t;
}

ThetaBound ThetaBound::power_law(double exponent, double p0, double scale) {
    if (!(exponent > 0.0)) {
        throw DomainError("power-law exponent must be positive");
    }
    ThetaBound t;
    t.kind_ = ThetaKind::PowerLaw;
    t.exponent_ = exponent;
    t.scale_ = scale;
    t.p0_ = p0;
    t.check_positive_at_p0();
    return t;
}

ThetaBound ThetaBound::tabulated(std::vector<std::pair<double, double>> samples, double scale) {
    if (samples.size() < 2) {
        throw DomainError("tabulated theta needs at least two samples");
    }
    ThetaBound t;
    t.kind_ = ThetaKind::Tabulated;
    t.scale_ = scale;
    const std::size_t n = samples.size();
    t.table_p_.reserve(n);
    t.table_theta_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto [p, value] = samples[i];
        if (i > 0 && !(p > samples[i - 1].first)) {
            throw DomainError("tabulated theta samples must be strictly increasing in p");
        }
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw DomainError("tabulated theta values must be positive and finite");
        }
        t.table_p_.push_back(p);
        t.table_theta_.push_back(value);
    }
    t.p0_ = t.table_p_.front();

    // Fritsch-Carlson slopes.
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        h[k] = t.table_p_[k + 1] - t.table_p_[k];
        delta[k] = (t.table_theta_[k + 1] - t.table_theta_[k]) / h[k];
    }
    t.table_slope_.assign(n, 0.0);
    t.table_slope_.front() = delta.front();
    t.table_slope_.back() = delta.back();
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (delta[k - 1] * delta[k] <= 0.0) {
            t.table_slope_[k] = 0.0;
        } else {
            const double w1 = 2.0 * h[k] + h[k - 1];
            const double w2 = h[k] + 2.0 * h[k - 1];
            t.table_slope_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    t.check_positive_at_p0();
    return t;
}

double ThetaBound::minimal_p0(int iterated_log_order) {
    // ln^m p > 0 iff p > exp^(m-1)(1).
    double threshold = 1.0;
    for (int j = 1; j < iterated_log_order; ++j) {
        threshold = std::exp(threshold);
    }
    return std::max(2.0, std::floor(threshold) + 1.0);
}

void ThetaBound::check_positive_at_p0() const {
    if (!(p0_ > 1.0) || !std::isfinite(p0_)) {
        throw DomainError("theta domain start p0 must be a finite real > 1");
    }
    if (!(scale_ > 0.0) || !std::isfinite(scale_)) {
        throw DomainError("theta scale must be positive and finite");
    }
    if (kind_ == ThetaKind::IteratedLog) {
        double v = p0_;
        for (int j = 0; j < order_; ++j) {
            v = std::log(v);
            if (!(v > 0.0)) {
                std::ostringstream msg;
                msg << "iterlog:" << order_ << " is not positive at p0 = " << p0_
                    << "; need p0 >= " << minimal_p0(order_);
                throw DomainError(msg.str());
            }
        }
    }
}

double ThetaBound::max_p() const {
    if (kind_ == ThetaKind::Tabulated) {
        return table_p_.back();
    }
    return std::numeric_limits<double>::infinity();
}

double ThetaBound::table_value(double p) const {
    auto it = std::upper_bound(table_p_.begin(), table_p_.end(), p);
    std::size_t k = static_cast<std::size_t>(it - table_p_.begin());
    k = std::clamp<std::size_t>(k, 1, table_p_.size() - 1) - 1;
    const double h = table_p_[k + 1] - table_p_[k];
    const double s = (p - table_p_[k]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return h00 * table_theta_[k] + h10 * h * table_slope_[k] + h01 * table_theta_[k + 1] +
           h11 * h * table_slope_[k + 1];
}

double ThetaBound::log_value(double p) const {
    if (!(p >= p0_)) {
        std::ostringstream msg;
        msg << "theta evaluated at p = " << p << " below p0 = " << p0_;
        throw DomainError(msg.str());
    }
    const double log_scale = std::log(scale_);
    switch (kind_) {
    case ThetaKind::Constant:
        return log_scale;
    case ThetaKind::IteratedLog: {
        double acc = log_scale;
        double v = p;
        for (int j = 0; j < order_; ++j) {
            v = std::log(v);
            acc += std::log(v);
        }
        return acc;
    }
    case ThetaKind::PowerLaw:
        return log_scale + exponent_ * std::log(p);
    case ThetaKind::Tabulated:
        if (p > table_p_.back()) {
            std::ostringstream msg;
            msg << "tabulated theta evaluated at p = " << p << " beyond last sample "
                << table_p_.back();
            throw DomainError(msg.str());
        }
        return log_scale + std::log(table_value(p));
    }
    return log_scale;
}

double ThetaBound::operator()(double p) const { return std::exp(log_value(p)); }

ThetaBound ThetaBound::with_p0(double p0) const {
    if (kind_ == ThetaKind::Tabulated && p0 < table_p_.front()) {
        throw DomainError("cannot extend a tabulated theta below its first sample");
    }
    ThetaBound t = *this;
    t.p0_ = p0;
    t.check_positive_at_p0();
    return t;
}

ThetaBound ThetaBound::scaled(double factor) const {
    ThetaBound t = *this;
    t.scale_ *= factor;
    t.check_positive_at_p0();
    return t;
}

std::string ThetaBound::describe() const {
    std::ostringstream out;
    out.precision(17);
    switch (kind_) {
    case ThetaKind::Constant:
        out << "const";
        break;
    case ThetaKind::IteratedLog:
        out << "iterlog:" << order_;
        break;
    case ThetaKind::PowerLaw:
        out << "pow:" << exponent_;
        break;
    case ThetaKind::Tabulated:
        out << "table(" << table_p_.size() << " samples)";
        break;
    }
    out << " scale=" << scale_ << " p0=" << p0_;
    return out.str();
}

double eval_theta(const ThetaBound& theta, double p) { return theta(p); }

std::vector<std::pair<double, double>> read_theta_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open theta table '" + path + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw DomainError("theta table '" + path + "' is empty; a p,theta header row is required");
    }
    {
        const std::string header = trim(line);
        const auto comma = header.find(',');
        if (comma == std::string::npos || trim(header.substr(0, comma)) != "p" ||
            trim(header.substr(comma + 1)) != "theta") {
            throw DomainError("theta table '" + path + "' must start with the header 'p,theta'");
        }
    }
    std::vector<std::pair<double, double>> samples;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw DomainError("theta table row '" + line + "' does not have two columns");
        }
        samples.emplace_back(parse_number(trim(line.substr(0, comma)), "p"),
                             parse_number(trim(line.substr(comma + 1)), "theta"));
    }
    return samples;
}

ThetaBound parse_theta(std::string_view spec, double p0) {
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos) {
        throw DomainError("theta spec '" + std::string(spec) +
                          "' must be const:C, iterlog:m, pow:a or table:PATH");
    }
    const std::string_view kind = spec.substr(0, colon);
    const std::string_view arg = spec.substr(colon + 1);
    if (kind == "const") {
        return ThetaBound::constant(parse_number(arg, "const scale"), p0 > 0 ? p0 : 2.0);
    }
    if (kind == "iterlog") {
        const double m = parse_number(arg, "iterlog order");
        if (m < 0 || m != std::floor(m)) {
            throw DomainError("iterlog order must be a nonnegative integer");
        }
        const int order = static_cast<int>(m);
        return ThetaBound::iterated_log(order, p0 > 0 ? p0 : ThetaBound::minimal_p0(order));
    }
    if (kind == "pow") {
        return ThetaBound::power_law(parse_number(arg, "power-law exponent"), p0 > 0 ? p0 : 2.0);
    }
    if (kind == "table") {
        ThetaBound t = ThetaBound::tabulated(read_theta_table(std::string(arg)));
        return p0 > 0 ? t.with_p0(p0) : t;
    }
    throw DomainError("unknown theta kind '" + std::string(kind) + "'");
}

} // namespace invlim
