#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mineroi/date.hpp"

namespace mineroi {

// Plain-text "key = value" configuration, one pair per line, '#' comments.
// Dataset manifests, run configs and run manifests all use this format.
class KeyVal {
public:
    KeyVal() = default;

    static KeyVal parse_file(const std::filesystem::path& path);
    static KeyVal parse_text(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    const std::string& get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    long get_int(const std::string& key) const;
    long get_int_or(const std::string& key, long fallback) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    Date get_date(const std::string& key) const;
    // "a,b,c" -> {"a","b","c"}; empty value -> {}
    std::vector<std::string> get_list(const std::string& key) const;
    std::vector<Date> get_date_list(const std::string& key) const;
    // "YYYY-MM-DD:YYYY-MM-DD" half-open range
    DateRange get_range(const std::string& key) const;

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    // Keys are emitted sorted so that identical contents serialize identically.
    std::string to_text() const;
    void write_file(const std::filesystem::path& path) const;

    const std::map<std::string, std::string>& entries() const { return values_; }
    const std::filesystem::path& origin_dir() const { return origin_dir_; }

    // Resolves a possibly relative path against the file this config came from.
    std::filesystem::path resolve_path(const std::string& value) const;

private:
    std::map<std::string, std::string> values_;
    std::string origin_;
    std::filesystem::path origin_dir_;
};

}  // namespace mineroi
