#include "tnn/ppa.hpp"

#include <cmath>
#include <string>

#include "tnn/errors.hpp"

namespace tnn::hw
{

namespace
{

// 45 nm standard-cell anchor: 1024 x 16 column.
constexpr double anchor45_gates = 1.7e6;
constexpr double anchor45_area_mm2 = 1.65;
constexpr double anchor45_power_mw = 7.96;

// 7 nm TNN7 anchor: 6750-synapse column, gate count from gates_per_synapse.
constexpr double anchor7_gates = 700380.0;
constexpr double anchor7_area_mm2 = 0.054;
constexpr double anchor7_power_mw = 0.039;
constexpr double anchor7_latency_ns = 28.14;

// TNN7 relative to 7 nm standard cells.
constexpr double tnn7_area_factor = 0.73;
constexpr double tnn7_power_factor = 0.83;
constexpr double tnn7_delay_factor = 0.84;

constexpr double um2_per_mm2 = 1e6;
constexpr double w_per_mw = 1e-3;

} // namespace

std::string_view to_string(TechNode node) noexcept
{
    switch (node)
    {
    case TechNode::n45_std:
        return "45nm-std";
    case TechNode::n7_std:
        return "7nm-std";
    case TechNode::n7_tnn7:
        return "7nm-tnn7";
    }
    return "?";
}

TechNode parse_tech_node(std::string_view name)
{
    if (name == "45nm-std")
    {
        return TechNode::n45_std;
    }
    if (name == "7nm-std")
    {
        return TechNode::n7_std;
    }
    if (name == "7nm-tnn7")
    {
        return TechNode::n7_tnn7;
    }
    throw DomainError("unknown technology '" + std::string(name) +
            "' (expected 45nm-std, 7nm-std or 7nm-tnn7)");
}

TechModel tech_model(TechNode node)
{
    TechModel model;
    model.node = node;
    const double tnn7_area = anchor7_area_mm2 * um2_per_mm2 / anchor7_gates;
    const double tnn7_power = anchor7_power_mw * w_per_mw / anchor7_gates;
    switch (node)
    {
    case TechNode::n45_std:
        model.area_um2_per_gate = anchor45_area_mm2 * um2_per_mm2 / anchor45_gates;
        model.power_w_per_gate = anchor45_power_mw * w_per_mw / anchor45_gates;
        model.provenance = "45nm post-synthesis anchor: 1.7M gates, 1.65 mm2, 7.96 mW "
                           "(1024x16 column); latency not published";
        break;
    case TechNode::n7_tnn7:
        model.area_um2_per_gate = tnn7_area;
        model.power_w_per_gate = tnn7_power;
        model.column_latency_ns = anchor7_latency_ns;
        model.provenance = "7nm TNN7 anchor: 6750 synapses, 0.054 mm2, 39 uW, 28.14 ns";
        break;
    case TechNode::n7_std:
        model.area_um2_per_gate = tnn7_area / tnn7_area_factor;
        model.power_w_per_gate = tnn7_power / tnn7_power_factor;
        model.column_latency_ns = anchor7_latency_ns / tnn7_delay_factor;
        model.provenance = "7nm TNN7 anchor scaled by TNN7 gains: area/0.73, power/0.83, "
                           "delay/0.84";
        break;
    }
    return model;
}

std::uint64_t estimate_gates(std::uint64_t p, std::uint64_t q)
{
    if (p == 0 || q == 0)
    {
        throw DomainError("gate estimate needs p >= 1 and q >= 1");
    }
    return static_cast<std::uint64_t>(
            std::llround(gates_per_synapse * static_cast<double>(p) * static_cast<double>(q)));
}

PpaReport estimate_ppa(std::uint64_t gate_count, const TechModel &tech)
{
    if (gate_count == 0)
    {
        throw DomainError("PPA estimate needs at least one gate");
    }
    const auto gates = static_cast<double>(gate_count);
    PpaReport report;
    report.gates = gate_count;
    report.area_mm2 = gates * tech.area_um2_per_gate / um2_per_mm2;
    report.power_mw = gates * tech.power_w_per_gate / w_per_mw;
    report.latency_ns = tech.column_latency_ns;
    switch (tech.node)
    {
    case TechNode::n45_std:
        report.node = "45nm";
        report.mode = "std";
        break;
    case TechNode::n7_std:
        report.node = "7nm";
        report.mode = "std";
        break;
    case TechNode::n7_tnn7:
        report.node = "7nm";
        report.mode = "tnn7";
        break;
    }
    return report;
}

} // namespace tnn::hw
