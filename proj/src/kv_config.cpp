#include "invlim/kv_config.hpp"

#include "invlim/errors.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace invlim {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

} // namespace

double parse_number(const std::string& text, const std::string& what) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
        throw DomainError(what + ": not a number: '" + text + "'");
    }
    return v;
}

KeyValueConfig KeyValueConfig::parse(const std::string& text, const std::string& source) {
    KeyValueConfig cfg;
    cfg.source_ = source;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw DomainError(source + ":" + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw DomainError(source + ":" + std::to_string(lineno) + ": empty key");
        }
        if (!cfg.values_.emplace(key, value).second) {
            throw DomainError(source + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

std::optional<std::string> KeyValueConfig::take_string(const std::string& key) {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        return std::nullopt;
    }
    used_.insert(key);
    return it->second;
}

std::optional<double> KeyValueConfig::take_double(const std::string& key) {
    const auto s = take_string(key);
    if (!s) {
        return std::nullopt;
    }
    return parse_number(*s, source_ + ": " + key);
}

std::optional<long> KeyValueConfig::take_int(const std::string& key) {
    const auto s = take_string(key);
    if (!s) {
        return std::nullopt;
    }
    char* end = nullptr;
    const long v = std::strtol(s->c_str(), &end, 10);
    if (s->empty() || end != s->c_str() + s->size()) {
        throw DomainError(source_ + ": " + key + ": not an integer: '" + *s + "'");
    }
    return v;
}

std::optional<bool> KeyValueConfig::take_bool(const std::string& key) {
    const auto s = take_string(key);
    if (!s) {
        return std::nullopt;
    }
    if (*s == "true" || *s == "1" || *s == "yes") {
        return true;
    }
    if (*s == "false" || *s == "0" || *s == "no") {
        return false;
    }
    throw DomainError(source_ + ": " + key + ": not a boolean: '" + *s + "'");
}

std::optional<std::vector<double>> KeyValueConfig::take_double_list(const std::string& key) {
    const auto s = take_string(key);
    if (!s) {
        return std::nullopt;
    }
    std::vector<double> out;
    std::istringstream in(*s);
    std::string item;
    while (std::getline(in, item, ',')) {
        out.push_back(parse_number(trim(item), source_ + ": " + key));
    }
    return out;
}

void KeyValueConfig::finish() const {
    std::string unknown;
    for (const auto& [key, value] : values_) {
        if (!used_.count(key)) {
            unknown += (unknown.empty() ? "" : ", ") + key;
        }
    }
    if (!unknown.empty()) {
        throw DomainError(source_ + ": unknown keys: " + unknown);
    }
}

} // namespace invlim
