#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dbm/error.hpp"

namespace dbm {

// ---------------------------------------------------------------------------
// Random numbers.
//
// All stochastic code in the library draws through this wrapper so that a run
// is reproducible from its seed alone. Doubles are derived from the raw 64-bit
// stream by hand instead of std::uniform_real_distribution, whose output is
// not pinned down by the standard and differs across library versions.
// ---------------------------------------------------------------------------

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    // Uniform in [0,1), 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform index in [0,n). Bias from the float path is far below anything
    // observable at the population sizes used here.
    std::size_t index(std::size_t n) {
        if (n == 0) throw ContractError("Rng::index: n must be positive");
        auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
        return std::min(i, n - 1);
    }

    bool coin() { return (gen_() & 1u) != 0; }

private:
    std::mt19937_64 gen_;
};

// splitmix64 step, used to derive independent substream seeds from a master
// seed without correlated low bits.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// Number formatting. %.17g round-trips doubles exactly, which is what keeps
// re-runs byte-identical. (<format> is not available on this toolchain.)
// ---------------------------------------------------------------------------

inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmt_fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

// Strict double parse: the whole token must be consumed.
inline double parse_double(const std::string& tok, const std::string& context) {
    const char* s = tok.c_str();
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end == s || *end != '\0')
        throw ParseError(context + ": not a number: '" + tok + "'");
    return v;
}

inline long parse_long(const std::string& tok, const std::string& context) {
    const char* s = tok.c_str();
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end == s || *end != '\0')
        throw ParseError(context + ": not an integer: '" + tok + "'");
    return v;
}

// ---------------------------------------------------------------------------
// Small string helpers.
// ---------------------------------------------------------------------------

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

inline std::vector<std::string> split_char(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

// ---------------------------------------------------------------------------
// File helpers.
// ---------------------------------------------------------------------------

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path.string());
    out << text;
    if (!out) throw Error("write failed: " + path.string());
}

// ---------------------------------------------------------------------------
// Deterministic parallel map: results land in index order no matter how the
// work is scheduled, so parallel runs reproduce serial runs exactly.
// ---------------------------------------------------------------------------

inline void parallel_for(std::size_t n, int workers,
                         const std::function<void(std::size_t)>& body) {
    if (n == 0) return;
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    int k = workers > 0 ? workers : hw;
    k = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(k), n));
    if (k <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr first_error = nullptr;
    std::mutex err_mu;
    pool.reserve(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace dbm
