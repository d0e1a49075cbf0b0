// weight.hpp
//
//  Synaptic weights are unsigned fixed-point numbers with 8 fractional bits.
//  The integer part is the "effective ramp": the number of ticks a synapse
//  drives its neuron and the load value of the synapse counter in hardware.
//  All arithmetic is saturating so weights stay inside [0, w_max].
#ifndef TNN_WEIGHT_HPP
#define TNN_WEIGHT_HPP

#include <compare>
#include <cstdint>
#include <iosfwd>

namespace tnn
{

class Weight
{
public:
    static constexpr unsigned frac_bits = 8;
    static constexpr std::uint32_t one = 1U << frac_bits;
    // w_max is limited so raw values fit 16 bits in serialized form.
    static constexpr std::uint32_t max_integer = 255;

    constexpr Weight() noexcept = default;

    [[nodiscard]] static constexpr Weight from_raw(std::uint32_t raw) noexcept
    {
        return Weight{raw};
    }
    [[nodiscard]] static constexpr Weight from_int(std::uint32_t v) noexcept
    {
        return Weight{v << frac_bits};
    }
    // Throws DomainError unless v is nonnegative and exactly representable.
    [[nodiscard]] static Weight from_double(double v);

    [[nodiscard]] constexpr std::uint32_t raw() const noexcept { return raw_; }
    [[nodiscard]] constexpr std::uint32_t effective_ramp() const noexcept
    {
        return raw_ >> frac_bits;
    }
    [[nodiscard]] double to_double() const noexcept;

    [[nodiscard]] constexpr Weight saturating_add(
            Weight delta, std::uint32_t w_max) const noexcept
    {
        const std::uint32_t cap = w_max << frac_bits;
        const std::uint32_t sum = raw_ + delta.raw_;
        return Weight{sum > cap ? cap : sum};
    }
    [[nodiscard]] constexpr Weight saturating_sub(Weight delta) const noexcept
    {
        return Weight{delta.raw_ > raw_ ? 0U : raw_ - delta.raw_};
    }

    friend constexpr auto operator<=>(Weight, Weight) noexcept = default;

private:
    constexpr explicit Weight(std::uint32_t raw) noexcept : raw_(raw) {}

    std::uint32_t raw_{0};
};

std::ostream &operator<<(std::ostream &out, Weight w);

} // namespace tnn

#endif
