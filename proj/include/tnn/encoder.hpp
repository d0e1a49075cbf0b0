// encoder.hpp
//
//  Intensity-to-latency encoders. A value v in [0, v_max] becomes one spike
//  at tick round((v_max - v) * (T - 1) / v_max): the strongest input fires
//  first, a zero input fires last (tick T - 1). Rounding is half away from
//  zero.
#ifndef TNN_ENCODER_HPP
#define TNN_ENCODER_HPP

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "tnn/spike_time.hpp"

namespace tnn
{

enum class EncodingMode : std::uint8_t
{
    direct_latency,
    // Two channels per pixel: entry i encodes v, entry n + i encodes v_max - v.
    on_off_center,
};

enum class Normalization : std::uint8_t
{
    global,
    // Min-max rescale of each window onto [0, v_max]; a flat window maps to
    // v_max / 2.
    per_window,
};

struct EncoderConfig
{
    std::uint32_t T{8};
    double v_max{255.0};
    EncodingMode mode{EncodingMode::direct_latency};
    Normalization normalization{Normalization::global};

    // Throws DomainError when T < 2 or v_max is not a positive finite number.
    void validate() const;
    // Spike lines produced per input value (2 for on-off-center).
    [[nodiscard]] std::uint32_t channels() const noexcept
    {
        return mode == EncodingMode::on_off_center ? 2U : 1U;
    }
};

// Values above v_max clamp to v_max; negative or NaN values throw DomainError.
[[nodiscard]] SpikeTime encode_value(double v, const EncoderConfig &cfg);

// Applies cfg.normalization, returning values in [0, v_max]. Global
// normalization is the identity.
[[nodiscard]] std::vector<double> normalize_window(
        std::span<const double> values, const EncoderConfig &cfg);

// Element-wise encode_value after normalization. Empty input throws.
[[nodiscard]] SpikeVector encode_window(
        std::span<const double> values, const EncoderConfig &cfg);

// Mode-aware pixel front-end; no normalization is applied.
[[nodiscard]] SpikeVector encode_image(
        std::span<const double> pixels, const EncoderConfig &cfg);

[[nodiscard]] std::string_view to_string(EncodingMode mode) noexcept;
[[nodiscard]] std::string_view to_string(Normalization norm) noexcept;
[[nodiscard]] EncodingMode parse_encoding_mode(std::string_view name);
[[nodiscard]] Normalization parse_normalization(std::string_view name);

} // namespace tnn

#endif
