#include "adriana/toml.hpp"

#include "adriana/error.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace adriana {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        else if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

double to_double(const std::string& key, const std::string& raw) {
    try {
        std::size_t used = 0;
        const double v = std::stod(raw, &used);
        if (used != raw.size())
            throw Error(ErrorCode::InvalidConfig, "trailing characters in '" + key + "'");
        return v;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidConfig, "'" + key + "' is not a number: " + raw);
    }
}

} // namespace

ConfigTree ConfigTree::parse(const std::string& text) {
    ConfigTree tree;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw Error(ErrorCode::InvalidConfig,
                            "unterminated section header on line " + std::to_string(line_no));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::InvalidConfig,
                        "expected key = value on line " + std::to_string(line_no));
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw Error(ErrorCode::InvalidConfig,
                        "empty key or value on line " + std::to_string(line_no));
        if (!section.empty()) key = section + "." + key;
        if (tree.values_.count(key))
            throw Error(ErrorCode::InvalidConfig, "duplicate key '" + key + "'");
        tree.values_[key] = value;
        tree.order_.push_back(key);
    }
    return tree;
}

ConfigTree ConfigTree::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

bool ConfigTree::has(const std::string& key) const { return values_.count(key) != 0; }

const std::string& ConfigTree::raw(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end())
        throw Error(ErrorCode::InvalidConfig, "missing config key '" + key + "'");
    return it->second;
}

std::string ConfigTree::get_string(const std::string& key) const {
    const std::string& value = raw(key);
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
        return value.substr(1, value.size() - 2);
    return value;
}

std::string ConfigTree::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

double ConfigTree::get_double(const std::string& key) const { return to_double(key, raw(key)); }

double ConfigTree::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

std::int64_t ConfigTree::get_int(const std::string& key) const {
    return static_cast<std::int64_t>(get_double(key));
}

std::int64_t ConfigTree::get_int(const std::string& key, std::int64_t fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::uint64_t ConfigTree::get_u64(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const std::string& value = raw(key);
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw Error(ErrorCode::InvalidConfig, "'" + key + "' is not an unsigned integer");
    return out;
}

bool ConfigTree::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string& value = raw(key);
    if (value == "true") return true;
    if (value == "false") return false;
    throw Error(ErrorCode::InvalidConfig, "'" + key + "' is not a boolean");
}

std::vector<double> ConfigTree::get_array(const std::string& key) const {
    const std::string& value = raw(key);
    if (value.size() < 2 || value.front() != '[' || value.back() != ']')
        throw Error(ErrorCode::InvalidConfig, "'" + key + "' is not an array");
    std::vector<double> out;
    std::string item;
    std::istringstream in(value.substr(1, value.size() - 2));
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(to_double(key, item));
    }
    return out;
}

std::vector<std::string> ConfigTree::keys_with_prefix(const std::string& prefix) const {
    const std::string dotted = prefix + ".";
    std::vector<std::string> out;
    for (const auto& key : order_)
        if (key.rfind(dotted, 0) == 0) out.push_back(key);
    return out;
}

} // namespace adriana
