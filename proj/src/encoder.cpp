#include "tnn/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tnn/errors.hpp"

namespace tnn
{

void EncoderConfig::validate() const
{
    if (T < 2)
    {
        throw DomainError("encoder window T must be >= 2");
    }
    if (!std::isfinite(v_max) || v_max <= 0.0)
    {
        throw DomainError("encoder v_max must be positive");
    }
}

SpikeTime encode_value(double v, const EncoderConfig &cfg)
{
    if (std::isnan(v) || v < 0.0)
    {
        throw DomainError("cannot encode negative value " + std::to_string(v));
    }
    const double clamped = std::min(v, cfg.v_max);
    const double latency = (cfg.v_max - clamped) *
            static_cast<double>(cfg.T - 1) / cfg.v_max;
    // std::round rounds halfway cases away from zero.
    const auto tick = static_cast<SpikeTime::rep>(std::round(latency));
    return SpikeTime::at(std::min(tick, cfg.T - 1));
}

std::vector<double> normalize_window(
        std::span<const double> values, const EncoderConfig &cfg)
{
    if (values.empty())
    {
        throw DomainError("cannot encode an empty window");
    }
    std::vector<double> out(values.begin(), values.end());
    if (cfg.normalization == Normalization::global)
    {
        return out;
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (std::isnan(*lo) || std::isnan(*hi))
    {
        throw DomainError("cannot normalize a window containing NaN");
    }
    if (*hi == *lo)
    {
        std::fill(out.begin(), out.end(), cfg.v_max / 2.0);
        return out;
    }
    const double span = *hi - *lo;
    for (double &v : out)
    {
        v = (v - *lo) / span * cfg.v_max;
    }
    return out;
}

SpikeVector encode_window(std::span<const double> values, const EncoderConfig &cfg)
{
    const std::vector<double> normalized = normalize_window(values, cfg);
    SpikeVector out;
    out.reserve(normalized.size());
    for (const double v : normalized)
    {
        out.push_back(encode_value(v, cfg));
    }
    return out;
}

SpikeVector encode_image(std::span<const double> pixels, const EncoderConfig &cfg)
{
    const std::size_t n = pixels.size();
    SpikeVector out(n * cfg.channels());
    for (std::size_t i = 0; i < n; ++i)
    {
        out[i] = encode_value(pixels[i], cfg);
        if (cfg.mode == EncodingMode::on_off_center)
        {
            // Clamp first so the off channel of an over-range pixel is 0.
            const double v = std::min(pixels[i], cfg.v_max);
            out[n + i] = encode_value(cfg.v_max - v, cfg);
        }
    }
    return out;
}

std::string_view to_string(EncodingMode mode) noexcept
{
    switch (mode)
    {
    case EncodingMode::direct_latency:
        return "direct-latency";
    case EncodingMode::on_off_center:
        return "on-off-center";
    }
    return "?";
}

std::string_view to_string(Normalization norm) noexcept
{
    switch (norm)
    {
    case Normalization::global:
        return "global";
    case Normalization::per_window:
        return "per-window";
    }
    return "?";
}

EncodingMode parse_encoding_mode(std::string_view name)
{
    if (name == "direct-latency")
    {
        return EncodingMode::direct_latency;
    }
    if (name == "on-off-center")
    {
        return EncodingMode::on_off_center;
    }
    throw DomainError("unknown encoding mode '" + std::string(name) + "'");
}

Normalization parse_normalization(std::string_view name)
{
    if (name == "global")
    {
        return Normalization::global;
    }
    if (name == "per-window")
    {
        return Normalization::per_window;
    }
    throw DomainError("unknown normalization '" + std::string(name) + "'");
}

} // namespace tnn
