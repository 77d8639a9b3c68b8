// config.hpp — the flat key-value scenario file format:
//   # comment
//   params.omega1 = 1.0
//   pulse.1.tau_p = 0.1
// Dotted section names, one assignment per line. Parsing reports line
// numbers; unknown keys are rejected at the scenario layer.

#pragma once

#include <map>
#include <optional>
#include <string>

namespace dimer {

struct KeyValues {
    std::map<std::string, std::string> entries;

    void set(const std::string& key, const std::string& value) { entries[key] = value; }
    std::optional<std::string> get(const std::string& key) const;

    double get_number(const std::string& key, double fallback) const;
    double require_number(const std::string& key) const;

    // serialize sorted, one key = value per line
    std::string to_text() const;
};

KeyValues parse_kv_text(const std::string& text);  // throws ConfigError with line info
KeyValues parse_kv_file(const std::string& path);  // throws ConfigError

// "key=value" fragments from the command line
void apply_override(KeyValues& kv, const std::string& assignment);

}  // namespace dimer
