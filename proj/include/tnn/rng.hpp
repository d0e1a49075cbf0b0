// rng.hpp
//
//  Deterministic random source. std::mt19937_64 output is fully specified by
//  the standard; the std distributions are not, so bounded integers and
//  unit reals are derived here from raw 64-bit draws.
#ifndef TNN_RNG_HPP
#define TNN_RNG_HPP

#include <cstdint>
#include <random>

namespace tnn
{

class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [0, bound), bound > 0. Rejection sampling avoids
    // modulo bias.
    std::uint64_t below(std::uint64_t bound)
    {
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
        std::uint64_t x = engine_();
        while (x >= limit)
        {
            x = engine_();
        }
        return x % bound;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double unit()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace tnn

#endif
