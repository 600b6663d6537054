#include "mineroi/keyval.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mineroi/error.hpp"

namespace mineroi {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace

KeyVal KeyVal::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    KeyVal kv = parse_text(buf.str(), path.string());
    kv.origin_dir_ = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    return kv;
}

KeyVal KeyVal::parse_text(const std::string& text, const std::string& origin) {
    KeyVal kv;
    kv.origin_ = origin;
    kv.origin_dir_ = ".";
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        }
        kv.values_[key] = value;
    }
    return kv;
}

const std::string& KeyVal::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError(origin_ + ": missing required key '" + key + "'");
    return it->second;
}

std::string KeyVal::get_or(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

long KeyVal::get_int(const std::string& key) const {
    const std::string& s = get(key);
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (errno != 0 || end != s.c_str() + s.size() || s.empty()) {
        throw ConfigError(origin_ + ": key '" + key + "' is not an integer: '" + s + "'");
    }
    return v;
}

long KeyVal::get_int_or(const std::string& key, long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

double KeyVal::get_double(const std::string& key) const {
    const std::string& s = get(key);
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (errno != 0 || end != s.c_str() + s.size() || s.empty()) {
        throw ConfigError(origin_ + ": key '" + key + "' is not a number: '" + s + "'");
    }
    return v;
}

double KeyVal::get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

Date KeyVal::get_date(const std::string& key) const {
    try {
        return Date::parse(get(key));
    } catch (const InputError& e) {
        throw ConfigError(origin_ + ": key '" + key + "': " + e.what());
    }
}

std::vector<std::string> KeyVal::get_list(const std::string& key) const {
    const std::string& s = get(key);
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t comma = s.find(',', start);
        if (comma == std::string::npos) comma = s.size();
        const std::string item = trim(s.substr(start, comma - start));
        if (!item.empty()) out.push_back(item);
        start = comma + 1;
    }
    return out;
}

std::vector<Date> KeyVal::get_date_list(const std::string& key) const {
    std::vector<Date> out;
    for (const auto& item : get_list(key)) out.push_back(Date::parse(item));
    return out;
}

DateRange KeyVal::get_range(const std::string& key) const {
    const std::string& s = get(key);
    const std::size_t colon = s.find(':');
    if (colon == std::string::npos) {
        throw ConfigError(origin_ + ": key '" + key + "' must be 'start:end', got '" + s + "'");
    }
    DateRange r{Date::parse(trim(s.substr(0, colon))), Date::parse(trim(s.substr(colon + 1)))};
    if (r.end <= r.start) {
        throw ConfigError(origin_ + ": key '" + key + "': empty or inverted range '" + s + "'");
    }
    return r;
}

std::string KeyVal::to_text() const {
    std::string out;
    for (const auto& [k, v] : values_) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

void KeyVal::write_file(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write config file: " + path.string());
    out << to_text();
}

std::filesystem::path KeyVal::resolve_path(const std::string& value) const {
    std::filesystem::path p(value);
    if (p.is_absolute()) return p;
    return origin_dir_ / p;
}

}  // namespace mineroi
