#ifndef GEOLR_RNG_HPP
#define GEOLR_RNG_HPP

#include <cstdint>
#include <random>

namespace geolr {

/// Seeded 64-bit Mersenne twister. Every randomized routine takes an explicit
/// seed and builds its own generator; there is no global RNG state.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform integer in [0, bound). Rejection sampling keeps the draw
    /// independent of the standard library's distribution implementation.
    std::uint64_t below(std::uint64_t bound)
    {
        const std::uint64_t limit = engine_.max() - engine_.max() % bound;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % bound;
    }

    /// Uniform real in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal()
    {
        std::normal_distribution<double> dist(0.0, 1.0);
        return dist(engine_);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

} // namespace geolr

#endif // GEOLR_RNG_HPP
