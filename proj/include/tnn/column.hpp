// column.hpp
//
//  A TNN column: q excitatory neurons reading the same p input lines through
//  a p x q synaptic crossbar, followed by 1-winner-take-all lateral
//  inhibition. Time is discrete (integer ticks) and a column evaluation is
//  complete after H ticks, because every synaptic ramp has saturated by then.
#ifndef TNN_COLUMN_HPP
#define TNN_COLUMN_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tnn/spike_time.hpp"
#include "tnn/weight.hpp"

namespace tnn
{

enum class NeuronModel : std::uint8_t
{
    // Each input spike starts a unit-slope ramp that saturates at the
    // synapse's effective ramp.
    ramp_no_leak,
    // Each input spike adds the full effective ramp at its arrival tick.
    step_no_leak,
};

[[nodiscard]] std::string_view to_string(NeuronModel model) noexcept;
[[nodiscard]] NeuronModel parse_neuron_model(std::string_view name);

struct ColumnConfig
{
    std::uint32_t p{1};
    std::uint32_t q{1};
    std::uint32_t theta{1};
    std::uint32_t T{8};
    NeuronModel model{NeuronModel::ramp_no_leak};
    std::uint32_t w_max{7};
    // Simulation horizon; defaults to T + w_max.
    std::optional<std::uint32_t> horizon{};

    [[nodiscard]] std::uint32_t H() const noexcept
    {
        return horizon.value_or(T + w_max);
    }
    // Throws DomainError on p, q, theta < 1, T < 2, w_max outside
    // [1, Weight::max_integer] or H < T.
    void validate() const;

    friend bool operator==(const ColumnConfig &, const ColumnConfig &) = default;
};

class ColumnState
{
public:
    // All weights zero.
    explicit ColumnState(ColumnConfig config);
    // weights are neuron-major: entry j * p + i is synapse (input i, neuron j).
    ColumnState(ColumnConfig config, std::vector<Weight> weights);

    [[nodiscard]] const ColumnConfig &config() const noexcept { return config_; }
    [[nodiscard]] Weight weight(std::size_t input, std::size_t neuron) const;
    // Throws DomainError when w exceeds w_max.
    void set_weight(std::size_t input, std::size_t neuron, Weight w);
    [[nodiscard]] std::span<const Weight> neuron_weights(std::size_t neuron) const;
    [[nodiscard]] std::span<const Weight> weights() const noexcept { return weights_; }
    [[nodiscard]] std::span<Weight> mutable_weights() noexcept { return weights_; }

    friend bool operator==(const ColumnState &, const ColumnState &) = default;

private:
    ColumnConfig config_;
    std::vector<Weight> weights_;
};

struct ColumnOutput
{
    SpikeVector raw_fire_times;
    std::optional<std::size_t> winner;
    SpikeVector post_wta_times;
};

struct WtaResult
{
    std::optional<std::size_t> winner;
    SpikeVector post_wta_times;
};

// First tick t in [0, H) at which the neuron body potential reaches theta.
// Finite inputs must lie in [0, T).
[[nodiscard]] SpikeTime neuron_fire_time(std::span<const SpikeTime> inputs,
        std::span<const Weight> weights, const ColumnConfig &cfg);

// Earliest finite time wins; ties go to the lowest index; losers are
// suppressed to absent.
[[nodiscard]] WtaResult wta_select(std::span<const SpikeTime> raw_fire_times);

[[nodiscard]] ColumnOutput column_forward(
        std::span<const SpikeTime> inputs, const ColumnState &state);

} // namespace tnn

#endif
