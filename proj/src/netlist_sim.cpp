#include <string>

#include "netlist_builder.hpp"
#include "tnn/errors.hpp"
#include "tnn/netlist.hpp"

namespace tnn::hw
{

NetlistSimulator::NetlistSimulator(const Netlist &netlist)
        : netlist_(netlist)
{
    lint(netlist_);
    comb_order_ = detail::combinational_order(netlist_);
    for (std::size_t g = 0; g < netlist_.gates.size(); ++g)
    {
        if (netlist_.gates[g].kind == GateKind::dff)
        {
            registers_.push_back(g);
        }
    }
    values_.assign(netlist_.nets.size(), 0);
}

SpikeVector NetlistSimulator::run(std::span<const SpikeTime> inputs, std::uint32_t cycles)
{
    if (inputs.size() != netlist_.spike_inputs.size())
    {
        throw DomainError("netlist expects " + std::to_string(netlist_.spike_inputs.size()) +
                " input lines, got " + std::to_string(inputs.size()));
    }
    std::fill(values_.begin(), values_.end(), 0);
    SpikeVector first_high(netlist_.spike_outputs.size(), SpikeTime::absent());
    std::vector<std::uint8_t> next(registers_.size(), 0);

    for (std::uint32_t cycle = 0; cycle < cycles; ++cycle)
    {
        values_[netlist_.reset] = 0;
        for (std::size_t i = 0; i < inputs.size(); ++i)
        {
            const SpikeTime x = inputs[i];
            values_[netlist_.spike_inputs[i]] = x.finite() && x.tick() == cycle ? 1 : 0;
        }
        for (const std::size_t g : comb_order_)
        {
            const Gate &gate = netlist_.gates[g];
            const auto pin = [&](std::size_t k) { return values_[gate.inputs[k]]; };
            std::uint8_t y = 0;
            switch (gate.kind)
            {
            case GateKind::not_gate:
                y = pin(0) ^ 1U;
                break;
            case GateKind::and2:
                y = pin(0) & pin(1);
                break;
            case GateKind::or2:
                y = pin(0) | pin(1);
                break;
            case GateKind::xor2:
                y = pin(0) ^ pin(1);
                break;
            case GateKind::mux2:
                y = pin(2) != 0 ? pin(1) : pin(0);
                break;
            case GateKind::dff:
                break;
            }
            values_[gate.output] = y;
        }
        for (std::size_t j = 0; j < first_high.size(); ++j)
        {
            if (!first_high[j].finite() && values_[netlist_.spike_outputs[j]] != 0)
            {
                first_high[j] = SpikeTime::at(cycle);
            }
        }
        for (std::size_t r = 0; r < registers_.size(); ++r)
        {
            next[r] = values_[netlist_.gates[registers_[r]].inputs[0]];
        }
        for (std::size_t r = 0; r < registers_.size(); ++r)
        {
            values_[netlist_.gates[registers_[r]].output] = next[r];
        }
    }
    return first_high;
}

SpikeVector simulate_netlist(
        const Netlist &netlist, std::span<const SpikeTime> inputs, std::uint32_t cycles)
{
    if (cycles < netlist.metadata.config.H())
    {
        throw DomainError("simulation must cover the column horizon of " +
                std::to_string(netlist.metadata.config.H()) + " cycles");
    }
    NetlistSimulator sim(netlist);
    return sim.run(inputs, cycles);
}

} // namespace tnn::hw
