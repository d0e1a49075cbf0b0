#include "tnn/stdp.hpp"

#include <string>

#include "tnn/errors.hpp"
#include "tnn/rng.hpp"

namespace tnn
{

void StdpParams::validate(std::uint32_t w_max) const
{
    const Weight cap = Weight::from_int(w_max);
    if (mu_capture > cap || mu_backoff > cap || mu_search > cap)
    {
        throw DomainError("STDP step sizes must lie in [0, w_max]");
    }
}

StdpCase classify(SpikeTime x, SpikeTime y) noexcept
{
    if (x.finite())
    {
        if (!y.finite())
        {
            return StdpCase::search;
        }
        return x <= y ? StdpCase::capture : StdpCase::backoff;
    }
    return y.finite() ? StdpCase::backoff : StdpCase::no_change;
}

Weight stdp_delta(SpikeTime x, SpikeTime y, Weight w, const StdpParams &params,
        std::uint32_t w_max) noexcept
{
    switch (classify(x, y))
    {
    case StdpCase::capture:
        return w.saturating_add(params.mu_capture, w_max);
    case StdpCase::backoff:
        return w.saturating_sub(params.mu_backoff);
    case StdpCase::search:
        return w.saturating_add(params.mu_search, w_max);
    case StdpCase::no_change:
        break;
    }
    return w;
}

void stdp_update_column(ColumnState &state, std::span<const SpikeTime> inputs,
        const ColumnOutput &output, const StdpParams &params)
{
    const ColumnConfig &cfg = state.config();
    if (inputs.size() != cfg.p || output.post_wta_times.size() != cfg.q)
    {
        throw DomainError("STDP update dimensions do not match the column");
    }
    std::span<Weight> weights = state.mutable_weights();
    for (std::size_t j = 0; j < cfg.q; ++j)
    {
        const SpikeTime y = output.post_wta_times[j];
        for (std::size_t i = 0; i < cfg.p; ++i)
        {
            Weight &w = weights[j * cfg.p + i];
            w = stdp_delta(inputs[i], y, w, params, cfg.w_max);
        }
    }
}

std::vector<Weight> init_weights(std::uint32_t p, std::uint32_t q,
        std::uint32_t w_max, const InitScheme &scheme, const StdpParams &params,
        std::uint64_t stream)
{
    if (p < 1 || q < 1)
    {
        throw DomainError("init_weights needs p >= 1 and q >= 1");
    }
    const std::size_t n = static_cast<std::size_t>(p) * q;
    if (const auto *constant = std::get_if<ConstantInit>(&scheme))
    {
        if (constant->value > Weight::from_int(w_max))
        {
            throw DomainError("constant initial weight exceeds w_max");
        }
        return std::vector<Weight>(n, constant->value);
    }
    // Distinct streams for distinct columns under one seed.
    Rng rng(params.seed ^ (stream * 0x9E3779B97F4A7C15ULL));
    std::vector<Weight> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k)
    {
        out.push_back(Weight::from_int(static_cast<std::uint32_t>(rng.below(w_max + 1ULL))));
    }
    return out;
}

} // namespace tnn
