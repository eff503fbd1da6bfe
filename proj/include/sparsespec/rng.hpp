#ifndef SPARSESPEC_RNG_HPP
#define SPARSESPEC_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace sparsespec {

// Seeded, portable randomness: mt19937_64 for bits, Box-Muller for normals.
// std::normal_distribution is implementation-defined, so we do not use it;
// every draw here is reproducible across standard libraries.  Reports record
// the generator under the name "mt19937_64/box-muller".
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Derive an independent stream from (seed, salts...) via splitmix64 so
    // parallel trials stay deterministic regardless of scheduling.
    template <typename... Salts>
    static Rng stream(std::uint64_t seed, Salts... salts) {
        std::uint64_t x = seed;
        ((x = splitmix64(x ^ (static_cast<std::uint64_t>(salts) * 0x9e3779b97f4a7c15ULL))), ...);
        return Rng(splitmix64(x));
    }

    static const char* name() { return "mt19937_64/box-muller"; }

    std::uint64_t bits() { return gen_(); }

    // Uniform in [0, 1).
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) { // inclusive range
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<std::int64_t>(gen_() % span);
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01(); // (0, 1], keeps log finite
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    std::complex<double> complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re, im};
    }

private:
    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace sparsespec

#endif
