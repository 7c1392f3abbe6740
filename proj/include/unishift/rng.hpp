// rng.hpp — deterministic random draws and seed derivation.
//
// Every randomized routine in the library takes an explicit 64-bit seed and
// derives independent sub-streams with mix_seed, so batch work can run in
// parallel per index without changing results.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace unishift {

// splitmix64 step; good avalanche, standard constants.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derive the seed of sub-stream `stream` from a master seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    return splitmix64(s);
}

// mt19937_64 wrapper with hand-rolled double/Gaussian draws. The standard
// distributions are implementation-defined; these are pinned.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // uniform in [0, 1), 53-bit mantissa
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // uniform in (0, 1]
    double uniform_pos() { return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53; }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return eng_() % n; }

    // real N(0, 1) via Box-Muller
    double gaussian() {
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double phi = 2.0 * std::numbers::pi * uniform01();
        return r * std::cos(phi);
    }

    // standard complex Gaussian: E g = 0, E |g|^2 = 1, rotation-invariant law
    std::complex<double> complex_gaussian() {
        const double r = std::sqrt(-std::log(uniform_pos()));
        const double phi = 2.0 * std::numbers::pi * uniform01();
        return {r * std::cos(phi), r * std::sin(phi)};
    }

private:
    std::mt19937_64 eng_;
};

} // namespace unishift
