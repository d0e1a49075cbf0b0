// network.hpp
//
//  Multi-column layers and multi-layer feed-forward networks. A layer's
//  columns each read a slice of the layer input; the concatenated post-WTA
//  outputs of layer l form the input of layer l + 1.
#ifndef TNN_NETWORK_HPP
#define TNN_NETWORK_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "tnn/column.hpp"
#include "tnn/spike_time.hpp"
#include "tnn/stdp.hpp"

namespace tnn
{

struct InputSlice
{
    std::size_t offset{0};
    std::size_t length{0};

    friend bool operator==(const InputSlice &, const InputSlice &) = default;
};

struct LayerSpec
{
    std::vector<ColumnConfig> columns;
    std::vector<InputSlice> input_map;

    [[nodiscard]] std::size_t output_width() const noexcept;

    friend bool operator==(const LayerSpec &, const LayerSpec &) = default;
};

struct NetworkSpec
{
    std::size_t input_width{0};
    std::vector<LayerSpec> layers;

    // Checks every width and slice bound, p against slice length, and that
    // each layer's T covers the previous layer's horizon (upstream spike
    // times must be valid inputs downstream). Throws DomainError.
    void validate() const;
    [[nodiscard]] std::size_t output_width() const;

    friend bool operator==(const NetworkSpec &, const NetworkSpec &) = default;
};

// Per layer, one ColumnOutput per column.
using NetworkOutput = std::vector<std::vector<ColumnOutput>>;

[[nodiscard]] SpikeVector concat_post_wta(std::span<const ColumnOutput> layer);

class Network
{
public:
    // Validates spec and fills weights per scheme. Column c of layer l uses
    // init stream (l << 32) | c.
    Network(NetworkSpec spec, const InitScheme &scheme, const StdpParams &params);
    // Explicit weights; layers[l][c] must match spec.
    Network(NetworkSpec spec, std::vector<std::vector<ColumnState>> layers);

    [[nodiscard]] const NetworkSpec &spec() const noexcept { return spec_; }
    [[nodiscard]] const std::vector<std::vector<ColumnState>> &layers() const noexcept
    {
        return layers_;
    }
    [[nodiscard]] ColumnState &column(std::size_t layer, std::size_t index);

    // Feed-forward evaluation of every layer.
    [[nodiscard]] NetworkOutput forward(std::span<const SpikeTime> inputs) const;
    // Evaluates layers [0, last]; returns outputs and the input vector of
    // each evaluated layer.
    [[nodiscard]] NetworkOutput forward_until(std::span<const SpikeTime> inputs,
            std::size_t last, std::vector<SpikeVector> *layer_inputs) const;

    // Earliest spike over the concatenated final-layer post-WTA outputs,
    // lowest index on ties.
    [[nodiscard]] std::optional<std::size_t> winner(
            std::span<const SpikeTime> inputs) const;

    friend bool operator==(const Network &, const Network &) = default;

private:
    NetworkSpec spec_;
    std::vector<std::vector<ColumnState>> layers_;
};

// A labeled sample: one or more encoded windows. Single-window samples are
// images or whole series; multi-window samples are sliding windows over one
// series, and the sample's winner is the majority vote of window winners.
struct LabeledSample
{
    std::vector<SpikeVector> windows;
    int label{0};
};

struct TrainLogEntry
{
    std::size_t layer{0};
    std::uint32_t epoch{0};
    // Sum of |delta w| over the layer's weights, in weight units.
    double weight_change_l1{0.0};
};

struct TrainLog
{
    std::vector<TrainLogEntry> entries;
};

// Greedy layer-wise STDP: layer 0 trains for all epochs, then layer 1 on the
// (frozen) layer-0 outputs, and so on. Windows are presented in order.
// Throws DomainError on empty data or epochs == 0.
TrainLog train(Network &network, std::span<const SpikeVector> windows,
        const StdpParams &params, std::uint32_t epochs);

inline constexpr int reject_label = std::numeric_limits<int>::min();

// Final-layer output index -> class, or reject_label for neurons that never
// win.
using LabelMap = std::vector<int>;

// Majority vote of window winners; ties to the lowest neuron index.
[[nodiscard]] std::optional<std::size_t> sample_winner(
        const Network &network, const LabeledSample &sample);

[[nodiscard]] LabelMap label_neurons(
        const Network &network, std::span<const LabeledSample> samples);

struct EvalReport
{
    double accuracy{0.0};
    double purity{0.0};
    std::size_t samples{0};
    // Distinct labels in ascending order; rows of confusion.
    std::vector<int> classes;
    // classes.size() x output-neuron count: (true class, winning neuron).
    std::vector<std::vector<std::size_t>> confusion;
    // Per class, samples with no winner.
    std::vector<std::size_t> no_winner;
};

[[nodiscard]] EvalReport evaluate(const Network &network,
        std::span<const LabeledSample> samples, const LabelMap &labels);

// Same metrics from precomputed winners; exposed for tests and sweeps.
[[nodiscard]] EvalReport evaluate_winners(std::span<const std::optional<std::size_t>> winners,
        std::span<const int> truth, std::size_t outputs, const LabelMap &labels);

} // namespace tnn

#endif
