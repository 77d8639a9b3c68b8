// config.cpp

#include "dimer/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "dimer/errors.hpp"

namespace dimer {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace

std::optional<std::string> KeyValues::get(const std::string& key) const {
    const auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    return it->second;
}

double KeyValues::get_number(const std::string& key, double fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    try {
        std::size_t pos = 0;
        const double x = std::stod(*v, &pos);
        if (pos != v->size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' is not a number: '" + *v + "'");
    }
}

double KeyValues::require_number(const std::string& key) const {
    if (!get(key)) throw ConfigError("config: missing required key '" + key + "'");
    return get_number(key, 0.0);
}

std::string KeyValues::to_text() const {
    std::ostringstream os;
    for (const auto& [k, v] : entries) os << k << " = " << v << "\n";
    return os.str();
}

KeyValues parse_kv_text(const std::string& text) {
    KeyValues kv;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (value.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty value for '" + key + "'");
        kv.set(key, value);
    }
    return kv;
}

KeyValues parse_kv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_kv_text(buf.str());
}

void apply_override(KeyValues& kv, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override must look like key=value: '" + assignment + "'");
    kv.set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

}  // namespace dimer
