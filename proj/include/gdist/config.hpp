#pragma once

// Flat key=value configuration with module-namespaced keys ("wreath.m = 2").

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace gdist {

class Config {
public:
    /// '#' starts a comment; blank lines are skipped. Keys must look like "module.name".
    /// Throws UsageError with the line number on malformed input or duplicate keys.
    static Config parse(const std::string& text);
    static Config load(const std::filesystem::path& path);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get(const std::string& key, const std::string& fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<std::string> get_list(const std::string& key, const std::vector<std::string>& fallback) const;

    /// Rejects keys outside `known` (UsageError naming the first stranger).
    void require_known(const std::set<std::string>& known) const;

    /// Sorted "key = value" lines; parsing it back yields the same configuration.
    std::string snapshot() const;
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

std::vector<std::string> split_list(const std::string& text, char sep = ',');

}  // namespace gdist
