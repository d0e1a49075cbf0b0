// spike_time.hpp
//
//  A single spike per value: each line carries at most one spike inside an
//  encoding window, so a line's state is either the tick at which it spiked
//  or "absent". Absent orders after every finite tick, which makes "earliest
//  spike" a plain minimum.
#ifndef TNN_SPIKE_TIME_HPP
#define TNN_SPIKE_TIME_HPP

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace tnn
{

class SpikeTime
{
public:
    using rep = std::uint32_t;

    constexpr SpikeTime() noexcept = default;

    [[nodiscard]] static constexpr SpikeTime absent() noexcept { return {}; }
    [[nodiscard]] static constexpr SpikeTime at(rep tick) noexcept
    {
        return SpikeTime{tick};
    }

    [[nodiscard]] constexpr bool finite() const noexcept
    {
        return value_ != absent_value;
    }
    [[nodiscard]] constexpr bool is_absent() const noexcept { return !finite(); }
    // Only meaningful when finite().
    [[nodiscard]] constexpr rep tick() const noexcept { return value_; }

    friend constexpr auto operator<=>(SpikeTime, SpikeTime) noexcept = default;

private:
    static constexpr rep absent_value = std::numeric_limits<rep>::max();
    constexpr explicit SpikeTime(rep v) noexcept : value_(v) {}

    rep value_{absent_value};
};

using SpikeVector = std::vector<SpikeTime>;

[[nodiscard]] std::string to_string(SpikeTime t);
std::ostream &operator<<(std::ostream &out, SpikeTime t);

} // namespace tnn

#endif
