// ppa.hpp
//
//  Power/performance/area estimates from a per-gate technology model.
//
//  Calibration anchors (single published data points):
//    45 nm standard cells: a 1024 x 16 column has 1.7M gates, 1.65 mm^2 and
//      7.96 mW. Gates per synapse = 1.7e6 / 16384 ~= 103.76.
//    7 nm TNN7 macros: a 6750-synapse column uses 0.054 mm^2, 39 uW and
//      takes 28.14 ns per evaluation.
//    TNN7 vs 7 nm standard cells: 27% less area, 17% less power, 16% faster;
//      7 nm standard-cell constants are the TNN7 ones divided by 0.73, 0.83
//      and 0.84.
//  No 45 nm timing anchor exists, so 45 nm latency is reported as unmodeled.
#ifndef TNN_PPA_HPP
#define TNN_PPA_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tnn::hw
{

enum class TechNode : std::uint8_t
{
    n45_std,
    n7_std,
    n7_tnn7,
};

[[nodiscard]] std::string_view to_string(TechNode node) noexcept;
// Accepts "45nm-std", "7nm-std", "7nm-tnn7".
[[nodiscard]] TechNode parse_tech_node(std::string_view name);

inline constexpr double gates_per_synapse = 103.76;

struct TechModel
{
    TechNode node{TechNode::n45_std};
    double area_um2_per_gate{0.0};
    double power_w_per_gate{0.0};
    std::optional<double> column_latency_ns;
    std::string provenance;
};

[[nodiscard]] TechModel tech_model(TechNode node);

// round(gates_per_synapse * p * q). Throws DomainError when p or q is 0.
[[nodiscard]] std::uint64_t estimate_gates(std::uint64_t p, std::uint64_t q);

struct PpaReport
{
    std::uint64_t gates{0};
    double area_mm2{0.0};
    double power_mw{0.0};
    std::optional<double> latency_ns;
    std::string node;
    std::string mode;
};

// Throws DomainError when gate_count is 0.
[[nodiscard]] PpaReport estimate_ppa(std::uint64_t gate_count, const TechModel &tech);

} // namespace tnn::hw

#endif
