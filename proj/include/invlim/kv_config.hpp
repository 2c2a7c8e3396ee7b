#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace invlim {

/// strtod over the whole string; DomainError mentioning `what` otherwise.
double parse_number(const std::string& text, const std::string& what);

/// Flat `key = value` text. `#` starts a comment; blank lines are ignored.
/// Every key must be consumed, otherwise finish() reports the leftovers.
class KeyValueConfig {
public:
    static KeyValueConfig parse(const std::string& text, const std::string& source = "<config>");
    static KeyValueConfig load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::optional<std::string> take_string(const std::string& key);
    std::optional<double> take_double(const std::string& key);
    std::optional<long> take_int(const std::string& key);
    std::optional<bool> take_bool(const std::string& key);
    /// Comma-separated reals.
    std::optional<std::vector<double>> take_double_list(const std::string& key);

    /// Throws DomainError naming any key that was never taken.
    void finish() const;
    const std::string& source() const { return source_; }

private:
    std::string source_;
    std::map<std::string, std::string> values_;
    std::set<std::string> used_;
};

} // namespace invlim
