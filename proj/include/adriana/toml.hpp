#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace adriana {

/// Flat view of a TOML-style key-value file. Sections become dotted key
/// prefixes, so `[seir] beta = 0.5` is read back as "seir.beta". Supports
/// strings, numbers, booleans and homogeneous number arrays; that subset
/// covers every config this tool writes.
class ConfigTree {
public:
    static ConfigTree parse(const std::string& text);
    static ConfigTree parse_file(const std::string& path);

    bool has(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_array(const std::string& key) const;

    /// Keys under `prefix.` in document order.
    std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

private:
    // raw values keep their source text; typing happens at access time
    std::map<std::string, std::string> values_;
    std::vector<std::string> order_;

    const std::string& raw(const std::string& key) const;
};

} // namespace adriana
