#include "tnn/spike_time.hpp"

#include <ostream>

namespace tnn
{

std::string to_string(SpikeTime t)
{
    return t.finite() ? std::to_string(t.tick()) : std::string{"ABSENT"};
}

std::ostream &operator<<(std::ostream &out, SpikeTime t)
{
    return out << to_string(t);
}

} // namespace tnn
