#include "tnn/weight.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "tnn/errors.hpp"

namespace tnn
{

Weight Weight::from_double(double v)
{
    if (!std::isfinite(v) || v < 0.0)
    {
        throw DomainError("weight must be a nonnegative finite number, got " +
                std::to_string(v));
    }
    const double scaled = v * static_cast<double>(one);
    if (scaled > static_cast<double>(max_integer * one) ||
            std::floor(scaled) != scaled)
    {
        throw DomainError("weight " + std::to_string(v) +
                " is not representable with 8 fractional bits");
    }
    return Weight{static_cast<std::uint32_t>(scaled)};
}

double Weight::to_double() const noexcept
{
    return static_cast<double>(raw_) / static_cast<double>(one);
}

std::ostream &operator<<(std::ostream &out, Weight w)
{
    return out << w.to_double();
}

} // namespace tnn
