#include "tnn/network.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "tnn/errors.hpp"

namespace tnn
{

std::size_t LayerSpec::output_width() const noexcept
{
    std::size_t width = 0;
    for (const ColumnConfig &column : columns)
    {
        width += column.q;
    }
    return width;
}

void NetworkSpec::validate() const
{
    if (layers.empty())
    {
        throw DomainError("network needs at least one layer");
    }
    std::size_t width = input_width;
    std::uint32_t upstream_horizon = 0;
    for (std::size_t l = 0; l < layers.size(); ++l)
    {
        const LayerSpec &layer = layers[l];
        const std::string where = "layer " + std::to_string(l);
        if (layer.columns.empty())
        {
            throw DomainError(where + " has no columns");
        }
        if (layer.input_map.size() != layer.columns.size())
        {
            throw DomainError(where + ": input_map needs one slice per column");
        }
        if (width == 0)
        {
            throw DomainError(where + " has zero input width");
        }
        std::uint32_t horizon = 0;
        for (std::size_t c = 0; c < layer.columns.size(); ++c)
        {
            const ColumnConfig &cfg = layer.columns[c];
            const InputSlice &slice = layer.input_map[c];
            cfg.validate();
            if (slice.length != cfg.p)
            {
                throw DomainError(where + " column " + std::to_string(c) +
                        ": slice length " + std::to_string(slice.length) +
                        " != p " + std::to_string(cfg.p));
            }
            if (slice.offset + slice.length > width)
            {
                throw DomainError(where + " column " + std::to_string(c) +
                        ": slice exceeds layer input width " + std::to_string(width));
            }
            if (l > 0 && cfg.T < upstream_horizon)
            {
                throw DomainError(where + " column " + std::to_string(c) +
                        ": T " + std::to_string(cfg.T) +
                        " is shorter than the upstream horizon " +
                        std::to_string(upstream_horizon));
            }
            horizon = std::max(horizon, cfg.H());
        }
        width = layer.output_width();
        upstream_horizon = horizon;
    }
}

std::size_t NetworkSpec::output_width() const
{
    return layers.empty() ? 0 : layers.back().output_width();
}

SpikeVector concat_post_wta(std::span<const ColumnOutput> layer)
{
    SpikeVector out;
    for (const ColumnOutput &column : layer)
    {
        out.insert(out.end(), column.post_wta_times.begin(), column.post_wta_times.end());
    }
    return out;
}

Network::Network(NetworkSpec spec, const InitScheme &scheme, const StdpParams &params)
        : spec_(std::move(spec))
{
    spec_.validate();
    for (std::size_t l = 0; l < spec_.layers.size(); ++l)
    {
        std::vector<ColumnState> layer;
        const auto &columns = spec_.layers[l].columns;
        for (std::size_t c = 0; c < columns.size(); ++c)
        {
            const ColumnConfig &cfg = columns[c];
            params.validate(cfg.w_max);
            const std::uint64_t stream = (static_cast<std::uint64_t>(l) << 32U) | c;
            layer.emplace_back(cfg, init_weights(cfg.p, cfg.q, cfg.w_max, scheme, params, stream));
        }
        layers_.push_back(std::move(layer));
    }
}

Network::Network(NetworkSpec spec, std::vector<std::vector<ColumnState>> layers)
        : spec_(std::move(spec))
        , layers_(std::move(layers))
{
    spec_.validate();
    if (layers_.size() != spec_.layers.size())
    {
        throw DomainError("layer count does not match network spec");
    }
    for (std::size_t l = 0; l < layers_.size(); ++l)
    {
        const auto &columns = spec_.layers[l].columns;
        if (layers_[l].size() != columns.size())
        {
            throw DomainError("column count does not match network spec");
        }
        for (std::size_t c = 0; c < columns.size(); ++c)
        {
            if (!(layers_[l][c].config() == columns[c]))
            {
                throw DomainError("column config does not match network spec");
            }
        }
    }
}

ColumnState &Network::column(std::size_t layer, std::size_t index)
{
    return layers_.at(layer).at(index);
}

NetworkOutput Network::forward_until(std::span<const SpikeTime> inputs,
        std::size_t last, std::vector<SpikeVector> *layer_inputs) const
{
    if (inputs.size() != spec_.input_width)
    {
        throw DomainError("network expects " + std::to_string(spec_.input_width) +
                " inputs, got " + std::to_string(inputs.size()));
    }
    NetworkOutput out;
    SpikeVector current(inputs.begin(), inputs.end());
    const std::size_t stop = std::min(last + 1, layers_.size());
    for (std::size_t l = 0; l < stop; ++l)
    {
        const LayerSpec &spec = spec_.layers[l];
        std::vector<ColumnOutput> layer_out;
        layer_out.reserve(spec.columns.size());
        for (std::size_t c = 0; c < spec.columns.size(); ++c)
        {
            const InputSlice slice = spec.input_map[c];
            const auto view = std::span<const SpikeTime>(current).subspan(slice.offset, slice.length);
            layer_out.push_back(column_forward(view, layers_[l][c]));
        }
        SpikeVector next = concat_post_wta(layer_out);
        if (layer_inputs != nullptr)
        {
            layer_inputs->push_back(std::move(current));
        }
        current = std::move(next);
        out.push_back(std::move(layer_out));
    }
    return out;
}

NetworkOutput Network::forward(std::span<const SpikeTime> inputs) const
{
    return forward_until(inputs, layers_.size() - 1, nullptr);
}

std::optional<std::size_t> Network::winner(std::span<const SpikeTime> inputs) const
{
    const NetworkOutput out = forward(inputs);
    return wta_select(concat_post_wta(out.back())).winner;
}

namespace
{

double l1_distance(std::span<const Weight> before, std::span<const Weight> after)
{
    std::uint64_t total = 0;
    for (std::size_t k = 0; k < before.size(); ++k)
    {
        const std::uint32_t a = before[k].raw();
        const std::uint32_t b = after[k].raw();
        total += a > b ? a - b : b - a;
    }
    return static_cast<double>(total) / static_cast<double>(Weight::one);
}

} // namespace

TrainLog train(Network &network, std::span<const SpikeVector> windows,
        const StdpParams &params, std::uint32_t epochs)
{
    if (windows.empty())
    {
        throw DomainError("cannot train on an empty dataset");
    }
    if (epochs == 0)
    {
        throw DomainError("epochs must be >= 1");
    }
    const NetworkSpec &spec = network.spec();
    TrainLog log;
    for (std::size_t l = 0; l < spec.layers.size(); ++l)
    {
        const LayerSpec &layer = spec.layers[l];
        for (const ColumnConfig &cfg : layer.columns)
        {
            params.validate(cfg.w_max);
        }
        for (std::uint32_t epoch = 0; epoch < epochs; ++epoch)
        {
            std::vector<std::vector<Weight>> before;
            for (std::size_t c = 0; c < layer.columns.size(); ++c)
            {
                const auto w = network.layers()[l][c].weights();
                before.emplace_back(w.begin(), w.end());
            }
            for (const SpikeVector &window : windows)
            {
                std::vector<SpikeVector> inputs;
                const NetworkOutput out = network.forward_until(window, l, &inputs);
                for (std::size_t c = 0; c < layer.columns.size(); ++c)
                {
                    const InputSlice slice = layer.input_map[c];
                    const auto view = std::span<const SpikeTime>(inputs[l]).subspan(
                            slice.offset, slice.length);
                    stdp_update_column(network.column(l, c), view, out[l][c], params);
                }
            }
            double change = 0.0;
            for (std::size_t c = 0; c < layer.columns.size(); ++c)
            {
                change += l1_distance(before[c], network.layers()[l][c].weights());
            }
            log.entries.push_back({l, epoch, change});
        }
    }
    return log;
}

std::optional<std::size_t> sample_winner(const Network &network, const LabeledSample &sample)
{
    if (sample.windows.size() == 1)
    {
        return network.winner(sample.windows.front());
    }
    std::map<std::size_t, std::size_t> votes;
    for (const SpikeVector &window : sample.windows)
    {
        if (const auto w = network.winner(window))
        {
            ++votes[*w];
        }
    }
    std::optional<std::size_t> best;
    std::size_t best_votes = 0;
    // Ascending key order, strict comparison: ties keep the lowest index.
    for (const auto &[neuron, count] : votes)
    {
        if (count > best_votes)
        {
            best = neuron;
            best_votes = count;
        }
    }
    return best;
}

LabelMap label_neurons(const Network &network, std::span<const LabeledSample> samples)
{
    const std::size_t outputs = network.spec().output_width();
    std::vector<std::map<int, std::size_t>> wins(outputs);
    for (const LabeledSample &sample : samples)
    {
        if (const auto w = sample_winner(network, sample))
        {
            ++wins[*w][sample.label];
        }
    }
    LabelMap labels(outputs, reject_label);
    for (std::size_t j = 0; j < outputs; ++j)
    {
        std::size_t best = 0;
        for (const auto &[label, count] : wins[j])
        {
            if (count > best)
            {
                best = count;
                labels[j] = label;
            }
        }
    }
    return labels;
}

EvalReport evaluate_winners(std::span<const std::optional<std::size_t>> winners,
        std::span<const int> truth, std::size_t outputs, const LabelMap &labels)
{
    if (winners.size() != truth.size())
    {
        throw DomainError("winner and label counts differ");
    }
    EvalReport report;
    report.samples = truth.size();
    report.classes.assign(truth.begin(), truth.end());
    std::sort(report.classes.begin(), report.classes.end());
    report.classes.erase(std::unique(report.classes.begin(), report.classes.end()),
            report.classes.end());
    report.confusion.assign(report.classes.size(), std::vector<std::size_t>(outputs, 0));
    report.no_winner.assign(report.classes.size(), 0);
    if (report.samples == 0)
    {
        return report;
    }

    std::size_t correct = 0;
    for (std::size_t s = 0; s < truth.size(); ++s)
    {
        const auto row = static_cast<std::size_t>(
                std::lower_bound(report.classes.begin(), report.classes.end(), truth[s]) -
                report.classes.begin());
        const auto &w = winners[s];
        if (!w)
        {
            ++report.no_winner[row];
            continue;
        }
        if (*w >= outputs)
        {
            throw DomainError("winner index out of range");
        }
        ++report.confusion[row][*w];
        if (*w < labels.size() && labels[*w] == truth[s])
        {
            ++correct;
        }
    }
    std::size_t dominant = 0;
    for (std::size_t j = 0; j < outputs; ++j)
    {
        std::size_t best = 0;
        for (const auto &row : report.confusion)
        {
            best = std::max(best, row[j]);
        }
        dominant += best;
    }
    const auto n = static_cast<double>(report.samples);
    report.accuracy = static_cast<double>(correct) / n;
    report.purity = static_cast<double>(dominant) / n;
    return report;
}

EvalReport evaluate(const Network &network, std::span<const LabeledSample> samples,
        const LabelMap &labels)
{
    std::vector<std::optional<std::size_t>> winners;
    std::vector<int> truth;
    winners.reserve(samples.size());
    truth.reserve(samples.size());
    for (const LabeledSample &sample : samples)
    {
        winners.push_back(sample_winner(network, sample));
        truth.push_back(sample.label);
    }
    return evaluate_winners(winners, truth, network.spec().output_width(), labels);
}

} // namespace tnn
