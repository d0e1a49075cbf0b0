#include "tnn/column.hpp"

#include <algorithm>
#include <string>

#include "tnn/errors.hpp"

namespace tnn
{

std::string_view to_string(NeuronModel model) noexcept
{
    switch (model)
    {
    case NeuronModel::ramp_no_leak:
        return "ramp-no-leak";
    case NeuronModel::step_no_leak:
        return "step-no-leak";
    }
    return "?";
}

NeuronModel parse_neuron_model(std::string_view name)
{
    if (name == "ramp-no-leak")
    {
        return NeuronModel::ramp_no_leak;
    }
    if (name == "step-no-leak")
    {
        return NeuronModel::step_no_leak;
    }
    throw DomainError("unknown neuron model '" + std::string(name) + "'");
}

void ColumnConfig::validate() const
{
    if (p < 1 || q < 1)
    {
        throw DomainError("column needs p >= 1 and q >= 1");
    }
    if (theta < 1)
    {
        throw DomainError("column threshold must be >= 1");
    }
    if (T < 2)
    {
        throw DomainError("column window T must be >= 2");
    }
    if (w_max < 1 || w_max > Weight::max_integer)
    {
        throw DomainError("w_max must lie in [1, " +
                std::to_string(Weight::max_integer) + "]");
    }
    if (H() < T)
    {
        throw DomainError("horizon H must be >= T");
    }
}

ColumnState::ColumnState(ColumnConfig config)
        : config_(config)
{
    config_.validate();
    weights_.assign(static_cast<std::size_t>(config_.p) * config_.q, Weight{});
}

ColumnState::ColumnState(ColumnConfig config, std::vector<Weight> weights)
        : config_(config)
        , weights_(std::move(weights))
{
    config_.validate();
    if (weights_.size() != static_cast<std::size_t>(config_.p) * config_.q)
    {
        throw DomainError("weight matrix size does not match p x q");
    }
    const Weight cap = Weight::from_int(config_.w_max);
    if (std::any_of(weights_.begin(), weights_.end(),
                [cap](Weight w) { return w > cap; }))
    {
        throw DomainError("weight exceeds w_max");
    }
}

Weight ColumnState::weight(std::size_t input, std::size_t neuron) const
{
    if (input >= config_.p || neuron >= config_.q)
    {
        throw DomainError("synapse index out of range");
    }
    return weights_[neuron * config_.p + input];
}

void ColumnState::set_weight(std::size_t input, std::size_t neuron, Weight w)
{
    if (input >= config_.p || neuron >= config_.q)
    {
        throw DomainError("synapse index out of range");
    }
    if (w > Weight::from_int(config_.w_max))
    {
        throw DomainError("weight exceeds w_max");
    }
    weights_[neuron * config_.p + input] = w;
}

std::span<const Weight> ColumnState::neuron_weights(std::size_t neuron) const
{
    if (neuron >= config_.q)
    {
        throw DomainError("neuron index out of range");
    }
    return std::span<const Weight>(weights_).subspan(neuron * config_.p, config_.p);
}

SpikeTime neuron_fire_time(std::span<const SpikeTime> inputs,
        std::span<const Weight> weights, const ColumnConfig &cfg)
{
    if (inputs.size() != cfg.p || weights.size() != cfg.p)
    {
        throw DomainError("neuron expects " + std::to_string(cfg.p) +
                " inputs and weights, got " + std::to_string(inputs.size()) +
                " and " + std::to_string(weights.size()));
    }
    const std::uint32_t horizon = cfg.H();

    // Potential increments per tick, accumulated by a single scan. For the
    // ramp model an input at x with ramp w raises the slope by one over
    // ticks (x, x + w]; for the step model it adds w at tick x.
    std::vector<std::int64_t> slope_change(horizon + 1, 0);
    std::vector<std::int64_t> jump(horizon, 0);
    for (std::size_t i = 0; i < inputs.size(); ++i)
    {
        const SpikeTime x = inputs[i];
        if (!x.finite())
        {
            continue;
        }
        if (x.tick() >= cfg.T)
        {
            throw DomainError("input spike time " + std::to_string(x.tick()) +
                    " outside window [0, " + std::to_string(cfg.T) + ")");
        }
        const std::uint32_t ramp = weights[i].effective_ramp();
        if (ramp == 0)
        {
            continue;
        }
        if (cfg.model == NeuronModel::step_no_leak)
        {
            jump[x.tick()] += ramp;
            continue;
        }
        const std::uint64_t start = static_cast<std::uint64_t>(x.tick()) + 1;
        const std::uint64_t stop = start + ramp;
        if (start < horizon)
        {
            slope_change[start] += 1;
            if (stop < horizon)
            {
                slope_change[stop] -= 1;
            }
        }
    }

    std::int64_t slope = 0;
    std::int64_t potential = 0;
    for (std::uint32_t t = 0; t < horizon; ++t)
    {
        slope += slope_change[t];
        potential += slope + jump[t];
        if (potential >= static_cast<std::int64_t>(cfg.theta))
        {
            return SpikeTime::at(t);
        }
    }
    return SpikeTime::absent();
}

WtaResult wta_select(std::span<const SpikeTime> raw_fire_times)
{
    WtaResult result;
    result.post_wta_times.assign(raw_fire_times.size(), SpikeTime::absent());
    const auto earliest = std::min_element(raw_fire_times.begin(), raw_fire_times.end());
    if (earliest == raw_fire_times.end() || !earliest->finite())
    {
        return result;
    }
    // min_element returns the first minimum, i.e. the lowest index on ties.
    const auto winner = static_cast<std::size_t>(earliest - raw_fire_times.begin());
    result.winner = winner;
    result.post_wta_times[winner] = *earliest;
    return result;
}

ColumnOutput column_forward(std::span<const SpikeTime> inputs, const ColumnState &state)
{
    const ColumnConfig &cfg = state.config();
    if (inputs.size() != cfg.p)
    {
        throw DomainError("column expects " + std::to_string(cfg.p) +
                " inputs, got " + std::to_string(inputs.size()));
    }
    ColumnOutput out;
    out.raw_fire_times.reserve(cfg.q);
    for (std::size_t j = 0; j < cfg.q; ++j)
    {
        out.raw_fire_times.push_back(
                neuron_fire_time(inputs, state.neuron_weights(j), cfg));
    }
    WtaResult wta = wta_select(out.raw_fire_times);
    out.winner = wta.winner;
    out.post_wta_times = std::move(wta.post_wta_times);
    return out;
}

} // namespace tnn
