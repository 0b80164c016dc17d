#pragma once

#include "scalar.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <vector>

namespace symx {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

/// Deterministic generator with explicit substream derivation, so every
/// consumer (sampling, solver restarts, eigenvector combinations, ...)
/// draws from its own stream and results are reproducible per seed
/// regardless of evaluation order elsewhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ^ 0xd1b54a32d192ed03ULL) {
        detail::splitmix64(state_);  // decorrelate trivially related seeds
    }

    std::uint64_t next_u64() { return detail::splitmix64(state_); }

    /// Uniform in [0, 1).
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (platform-independent).
    double gauss() {
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Complex standard normal (independent real and imaginary parts).
    Complex cgauss() {
        double re = gauss(), im = gauss();
        return Complex(re, im);
    }

    std::vector<Complex> cgauss_vec(int n) {
        std::vector<Complex> v(n);
        for (auto& x : v) x = cgauss();
        return v;
    }

private:
    std::uint64_t state_;
};

/// Independent substream keyed by (seed, tag, index).
inline Rng derive_rng(std::uint64_t seed, std::string_view tag, std::uint64_t idx = 0) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) h = (h ^ std::uint64_t((unsigned char)c)) * 0x100000001b3ULL;
    std::uint64_t s = seed;
    s ^= h + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
    s ^= idx + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
    return Rng(s);
}

}  // namespace symx
