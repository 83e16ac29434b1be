#pragma once

#include "adriana/error.hpp"
#include "adriana/stationarity.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace testutil {

/// MMIX LCG mirrored by tests/oracle/adf_oracle.py so frozen oracle
/// values and the C++ inputs are bit-identical.
class Lcg {
public:
    explicit Lcg(std::uint64_t seed) : state_(seed) {}

    double uniform() {
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(state_ >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

inline std::vector<double> lcg_normals(std::uint64_t seed, std::size_t n) {
    Lcg rng(seed);
    std::vector<double> out;
    out.reserve(n + 1);
    while (out.size() < n) {
        const double u1 = rng.uniform();
        const double u2 = rng.uniform();
        const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        out.push_back(r * std::cos(2.0 * 3.14159265358979323846 * u2));
        out.push_back(r * std::sin(2.0 * 3.14159265358979323846 * u2));
    }
    out.resize(n);
    return out;
}

inline std::vector<double> random_walk(std::uint64_t seed, std::size_t n) {
    auto steps = lcg_normals(seed, n);
    double running = 0.0;
    for (auto& v : steps) {
        running += v;
        v = running;
    }
    return steps;
}

inline std::vector<double> ar1(double phi, std::size_t n, std::uint64_t seed,
                               double sigma = 1.0) {
    const auto noise = lcg_normals(seed, n);
    std::vector<double> out(n);
    double prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        prev = phi * prev + sigma * noise[i];
        out[i] = prev;
    }
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline std::string fixture_path(const std::string& name) {
    return std::string(FIXTURE_DIR) + "/" + name;
}

inline adriana::WindowedDataset windows_of(const std::vector<double>& series,
                                           std::size_t w) {
    return adriana::make_windows(series, w);
}

template <typename Fn>
bool throws_code(adriana::ErrorCode code, Fn&& fn) {
    try {
        fn();
    } catch (const adriana::Error& error) {
        return error.code() == code;
    } catch (...) {
        return false;
    }
    return false;
}

} // namespace testutil
