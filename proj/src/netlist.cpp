#include "tnn/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <queue>
#include <set>
#include <string>

#include "netlist_builder.hpp"
#include "tnn/errors.hpp"

namespace tnn::hw
{

std::string_view to_string(GateKind kind) noexcept
{
    switch (kind)
    {
    case GateKind::not_gate:
        return "NOT";
    case GateKind::and2:
        return "AND2";
    case GateKind::or2:
        return "OR2";
    case GateKind::xor2:
        return "XOR2";
    case GateKind::mux2:
        return "MUX2";
    case GateKind::dff:
        return "DFF";
    }
    return "?";
}

std::size_t pin_count(GateKind kind) noexcept
{
    switch (kind)
    {
    case GateKind::not_gate:
        return 1;
    case GateKind::mux2:
        return 3;
    case GateKind::and2:
    case GateKind::or2:
    case GateKind::xor2:
    case GateKind::dff:
        return 2;
    }
    return 0;
}

std::array<std::size_t, gate_kind_count> Netlist::gate_counts() const
{
    std::array<std::size_t, gate_kind_count> counts{};
    for (const Gate &g : gates)
    {
        ++counts[static_cast<std::size_t>(g.kind)];
    }
    return counts;
}

namespace detail
{

std::vector<std::size_t> combinational_order(const Netlist &netlist)
{
    const std::size_t n_nets = netlist.nets.size();
    // Combinational driver of each net, if any.
    std::vector<std::size_t> comb_driver(n_nets, SIZE_MAX);
    for (std::size_t g = 0; g < netlist.gates.size(); ++g)
    {
        if (netlist.gates[g].kind != GateKind::dff)
        {
            comb_driver[netlist.gates[g].output] = g;
        }
    }
    std::vector<std::size_t> pending(netlist.gates.size(), 0);
    std::vector<std::vector<std::size_t>> fanout(netlist.gates.size());
    std::queue<std::size_t> ready;
    std::size_t comb_count = 0;
    for (std::size_t g = 0; g < netlist.gates.size(); ++g)
    {
        const Gate &gate = netlist.gates[g];
        if (gate.kind == GateKind::dff)
        {
            continue;
        }
        ++comb_count;
        for (const NetId in : gate.inputs)
        {
            const std::size_t src = comb_driver[in];
            if (src != SIZE_MAX)
            {
                ++pending[g];
                fanout[src].push_back(g);
            }
        }
        if (pending[g] == 0)
        {
            ready.push(g);
        }
    }
    std::vector<std::size_t> order;
    order.reserve(comb_count);
    while (!ready.empty())
    {
        const std::size_t g = ready.front();
        ready.pop();
        order.push_back(g);
        for (const std::size_t next : fanout[g])
        {
            if (--pending[next] == 0)
            {
                ready.push(next);
            }
        }
    }
    if (order.size() != comb_count)
    {
        for (std::size_t g = 0; g < netlist.gates.size(); ++g)
        {
            if (netlist.gates[g].kind != GateKind::dff && pending[g] != 0)
            {
                throw StructuralError("combinational cycle through gate " +
                        netlist.gates[g].name);
            }
        }
    }
    return order;
}

} // namespace detail

namespace
{

bool valid_identifier(const std::string &name)
{
    if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
    {
        return false;
    }
    return std::all_of(name.begin(), name.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

} // namespace

void lint(const Netlist &netlist)
{
    const std::size_t n_nets = netlist.nets.size();
    const auto in_range = [n_nets](NetId id) { return id < n_nets; };

    std::set<std::string> names;
    for (const std::string &name : netlist.nets)
    {
        if (!valid_identifier(name))
        {
            throw StructuralError("invalid net name '" + name + "'");
        }
        if (!names.insert(name).second)
        {
            throw StructuralError("duplicate net name '" + name + "'");
        }
    }

    std::vector<std::size_t> drivers(n_nets, 0);
    std::vector<NetId> primary{netlist.clock, netlist.reset};
    primary.insert(primary.end(), netlist.spike_inputs.begin(), netlist.spike_inputs.end());
    for (const NetId id : primary)
    {
        if (!in_range(id))
        {
            throw StructuralError("primary input out of range");
        }
        ++drivers[id];
    }

    std::set<std::string> gate_names;
    for (const Gate &gate : netlist.gates)
    {
        if (!valid_identifier(gate.name) || !gate_names.insert(gate.name).second)
        {
            throw StructuralError("invalid or duplicate instance name '" + gate.name + "'");
        }
        if (gate.inputs.size() != pin_count(gate.kind))
        {
            throw StructuralError("gate " + gate.name + " has wrong pin count");
        }
        if (!in_range(gate.output) ||
                !std::all_of(gate.inputs.begin(), gate.inputs.end(), in_range))
        {
            throw StructuralError("gate " + gate.name + " references an unknown net");
        }
        ++drivers[gate.output];
        for (std::size_t pin = 0; pin < gate.inputs.size(); ++pin)
        {
            const bool clock_pin = gate.kind == GateKind::dff && pin == 1;
            if (clock_pin != (gate.inputs[pin] == netlist.clock))
            {
                throw StructuralError("gate " + gate.name +
                        (clock_pin ? ": DFF not clocked by the column clock"
                                   : ": clock used as a data signal"));
            }
        }
    }
    for (std::size_t id = 0; id < n_nets; ++id)
    {
        if (drivers[id] != 1)
        {
            throw StructuralError("net " + netlist.nets[id] + " has " +
                    std::to_string(drivers[id]) + " drivers");
        }
    }
    for (const NetId id : netlist.spike_outputs)
    {
        if (!in_range(id))
        {
            throw StructuralError("output port out of range");
        }
    }
    const ColumnConfig &cfg = netlist.metadata.config;
    if (netlist.spike_inputs.size() != cfg.p || netlist.spike_outputs.size() != cfg.q)
    {
        throw StructuralError("port counts do not match column metadata");
    }
    (void)detail::combinational_order(netlist);
}

} // namespace tnn::hw
