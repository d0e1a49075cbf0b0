// stdp.hpp
//
//  Deterministic STDP rule table. For input spike x and (post-WTA) output
//  spike y of the same neuron:
//
//     x finite, y finite, x <= y   capture   w += mu_capture
//     x finite, y finite, x >  y   backoff   w -= mu_backoff
//     x finite, y absent           search    w += mu_search
//     x absent, y finite           backoff   w -= mu_backoff
//     x absent, y absent           no change
//
//  Results saturate to [0, w_max].
#ifndef TNN_STDP_HPP
#define TNN_STDP_HPP

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "tnn/column.hpp"
#include "tnn/spike_time.hpp"
#include "tnn/weight.hpp"

namespace tnn
{

struct StdpParams
{
    Weight mu_capture{Weight::from_raw(Weight::one / 2)};
    Weight mu_backoff{Weight::from_raw(Weight::one / 2)};
    Weight mu_search{Weight::from_raw(Weight::one / 16)};
    std::uint64_t seed{0};

    // Each mu must lie in [0, w_max]. Zero disables that case.
    void validate(std::uint32_t w_max) const;
};

enum class StdpCase : std::uint8_t
{
    capture,
    backoff,
    search,
    no_change,
};

[[nodiscard]] StdpCase classify(SpikeTime x, SpikeTime y) noexcept;

[[nodiscard]] Weight stdp_delta(SpikeTime x, SpikeTime y, Weight w,
        const StdpParams &params, std::uint32_t w_max) noexcept;

// Applies stdp_delta to every synapse, using output.post_wta_times as y.
void stdp_update_column(ColumnState &state, std::span<const SpikeTime> inputs,
        const ColumnOutput &output, const StdpParams &params);

struct ConstantInit
{
    Weight value;
};
struct UniformRandomInit
{
};
using InitScheme = std::variant<ConstantInit, UniformRandomInit>;

// Neuron-major p x q matrix (see ColumnState). Uniform-random draws the
// integer part from {0..w_max} with Rng seeded from params.seed, stream
// offset by `stream` so that columns of one network get distinct matrices.
[[nodiscard]] std::vector<Weight> init_weights(std::uint32_t p, std::uint32_t q,
        std::uint32_t w_max, const InitScheme &scheme, const StdpParams &params,
        std::uint64_t stream = 0);

} // namespace tnn

#endif
