#include "netlist_builder.hpp"

#include <algorithm>
#include <bit>

#include "tnn/errors.hpp"

namespace tnn::hw::detail
{

NetlistBuilder::NetlistBuilder(std::string module_name)
{
    netlist_.name = std::move(module_name);
    netlist_.clock = new_net("clk");
    netlist_.reset = new_net("rst");
}

NetId NetlistBuilder::new_net(std::string name)
{
    if (name.empty())
    {
        name = "n" + std::to_string(next_internal_++);
    }
    netlist_.nets.push_back(std::move(name));
    return static_cast<NetId>(netlist_.nets.size() - 1);
}

Sig NetlistBuilder::add_spike_input(const std::string &name)
{
    const NetId id = new_net(name);
    netlist_.spike_inputs.push_back(id);
    return Sig::net(id);
}

std::optional<Sig> NetlistBuilder::inverse_of(Sig s) const
{
    if (s.is_const())
    {
        return Sig::constant(!s.value());
    }
    const auto it = driver_.find(s.id());
    if (it == driver_.end())
    {
        return std::nullopt;
    }
    const Gate &g = netlist_.gates[it->second];
    if (g.kind == GateKind::not_gate)
    {
        return Sig::net(g.inputs[0]);
    }
    return std::nullopt;
}

Sig NetlistBuilder::emit(GateKind kind, std::vector<Sig> inputs)
{
    std::vector<std::int64_t> key;
    key.reserve(inputs.size());
    for (const Sig s : inputs)
    {
        key.push_back(s.is_const() ? -1 : static_cast<std::int64_t>(s.id()));
    }
    if (kind == GateKind::and2 || kind == GateKind::or2 || kind == GateKind::xor2)
    {
        std::sort(key.begin(), key.end());
        std::sort(inputs.begin(), inputs.end(),
                [](Sig a, Sig b) { return a.id() < b.id(); });
    }
    auto found = hashed_.find({kind, key});
    if (found != hashed_.end())
    {
        return Sig::net(found->second);
    }
    Gate gate;
    gate.kind = kind;
    gate.name = "g" + std::to_string(netlist_.gates.size());
    gate.output = new_net();
    for (const Sig s : inputs)
    {
        gate.inputs.push_back(s.id());
    }
    const NetId out = gate.output;
    driver_[out] = netlist_.gates.size();
    netlist_.gates.push_back(std::move(gate));
    hashed_.emplace(std::make_pair(kind, std::move(key)), out);
    return Sig::net(out);
}

Sig NetlistBuilder::inv(Sig a)
{
    if (auto direct = inverse_of(a))
    {
        return *direct;
    }
    return emit(GateKind::not_gate, {a});
}

Sig NetlistBuilder::and2(Sig a, Sig b)
{
    if (a.is_zero() || b.is_zero())
    {
        return Sig::constant(false);
    }
    if (a.is_one() || a == b)
    {
        return b;
    }
    if (b.is_one())
    {
        return a;
    }
    if (inverse_of(a) == b)
    {
        return Sig::constant(false);
    }
    return emit(GateKind::and2, {a, b});
}

Sig NetlistBuilder::or2(Sig a, Sig b)
{
    if (a.is_one() || b.is_one())
    {
        return Sig::constant(true);
    }
    if (a.is_zero() || a == b)
    {
        return b;
    }
    if (b.is_zero())
    {
        return a;
    }
    if (inverse_of(a) == b)
    {
        return Sig::constant(true);
    }
    return emit(GateKind::or2, {a, b});
}

Sig NetlistBuilder::xor2(Sig a, Sig b)
{
    if (a.is_const())
    {
        return a.value() ? inv(b) : b;
    }
    if (b.is_const())
    {
        return b.value() ? inv(a) : a;
    }
    if (a == b)
    {
        return Sig::constant(false);
    }
    if (inverse_of(a) == b)
    {
        return Sig::constant(true);
    }
    return emit(GateKind::xor2, {a, b});
}

Sig NetlistBuilder::mux2(Sig sel, Sig a, Sig b)
{
    if (sel.is_const())
    {
        return sel.value() ? b : a;
    }
    if (a == b)
    {
        return a;
    }
    if (a.is_zero())
    {
        return b.is_one() ? sel : and2(sel, b);
    }
    if (a.is_one())
    {
        return b.is_zero() ? inv(sel) : or2(inv(sel), b);
    }
    if (b.is_zero())
    {
        return and2(inv(sel), a);
    }
    if (b.is_one())
    {
        return or2(sel, a);
    }
    return emit(GateKind::mux2, {a, b, sel});
}

Sig NetlistBuilder::reg()
{
    Gate gate;
    gate.kind = GateKind::dff;
    gate.name = "g" + std::to_string(netlist_.gates.size());
    gate.output = new_net();
    // D is filled in by connect(); CK is the single clock.
    gate.inputs = {gate.output, netlist_.clock};
    const NetId out = gate.output;
    driver_[out] = netlist_.gates.size();
    pending_regs_[out] = netlist_.gates.size();
    netlist_.gates.push_back(std::move(gate));
    return Sig::net(out);
}

NetId NetlistBuilder::materialize(Sig s)
{
    if (!s.is_const())
    {
        return s.id();
    }
    // Tie cells are built from reset without folding: rst ^ rst == 0.
    if (!tie0_)
    {
        Gate gate{GateKind::xor2, "g" + std::to_string(netlist_.gates.size()),
                new_net(), {netlist_.reset, netlist_.reset}};
        tie0_ = gate.output;
        driver_[gate.output] = netlist_.gates.size();
        netlist_.gates.push_back(std::move(gate));
    }
    if (!s.value())
    {
        return *tie0_;
    }
    if (!tie1_)
    {
        Gate gate{GateKind::not_gate, "g" + std::to_string(netlist_.gates.size()),
                new_net(), {*tie0_}};
        tie1_ = gate.output;
        driver_[gate.output] = netlist_.gates.size();
        netlist_.gates.push_back(std::move(gate));
    }
    return *tie1_;
}

void NetlistBuilder::connect(Sig q, Sig d)
{
    const auto it = pending_regs_.find(q.id());
    if (q.is_const() || it == pending_regs_.end())
    {
        throw StructuralError("connect() target is not an unconnected register");
    }
    const std::size_t index = it->second;
    pending_regs_.erase(it);
    netlist_.gates[index].inputs[0] = materialize(d);
}

void NetlistBuilder::add_spike_output(const std::string &name, Sig value)
{
    const NetId source = materialize(value);
    const bool is_port = source == netlist_.clock || source == netlist_.reset ||
            std::find(netlist_.spike_inputs.begin(), netlist_.spike_inputs.end(), source) !=
                    netlist_.spike_inputs.end() ||
            std::find(netlist_.spike_outputs.begin(), netlist_.spike_outputs.end(), source) !=
                    netlist_.spike_outputs.end();
    const bool is_tie = source == tie0_ || source == tie1_;
    if (!is_port && !is_tie)
    {
        netlist_.nets[source] = name;
        netlist_.spike_outputs.push_back(source);
        return;
    }
    // Shared or port-driven value: buffer it through AND2(x, x).
    Gate gate{GateKind::and2, "g" + std::to_string(netlist_.gates.size()),
            new_net(name), {source, source}};
    driver_[gate.output] = netlist_.gates.size();
    netlist_.spike_outputs.push_back(gate.output);
    netlist_.gates.push_back(std::move(gate));
}

Netlist NetlistBuilder::finish(NetlistMetadata metadata)
{
    if (!pending_regs_.empty())
    {
        throw StructuralError("register left without a D input");
    }
    netlist_.metadata = std::move(metadata);
    return std::move(netlist_);
}

std::size_t bit_width(std::uint64_t v) noexcept
{
    return static_cast<std::size_t>(std::bit_width(v));
}

Bus constant_bus(std::uint64_t value, std::size_t width)
{
    Bus out;
    out.reserve(width);
    for (std::size_t k = 0; k < width; ++k)
    {
        out.push_back(Sig::constant(k < 64 && ((value >> k) & 1U) != 0));
    }
    return out;
}

Bus add(NetlistBuilder &b, const Bus &x, const Bus &y)
{
    const std::size_t width = std::max(x.size(), y.size());
    Bus out;
    out.reserve(width + 1);
    Sig carry = Sig::constant(false);
    for (std::size_t k = 0; k < width; ++k)
    {
        const Sig xk = k < x.size() ? x[k] : Sig::constant(false);
        const Sig yk = k < y.size() ? y[k] : Sig::constant(false);
        const Sig half = b.xor2(xk, yk);
        out.push_back(b.xor2(half, carry));
        carry = b.or2(b.and2(xk, yk), b.and2(carry, half));
    }
    out.push_back(carry);
    while (out.size() > 1 && out.back().is_zero())
    {
        out.pop_back();
    }
    return out;
}

Bus add_tree(NetlistBuilder &b, std::vector<Bus> terms)
{
    if (terms.empty())
    {
        return {Sig::constant(false)};
    }
    while (terms.size() > 1)
    {
        std::vector<Bus> next;
        next.reserve((terms.size() + 1) / 2);
        for (std::size_t k = 0; k + 1 < terms.size(); k += 2)
        {
            next.push_back(add(b, terms[k], terms[k + 1]));
        }
        if (terms.size() % 2 == 1)
        {
            next.push_back(std::move(terms.back()));
        }
        terms = std::move(next);
    }
    return std::move(terms.front());
}

Sig ge_const(NetlistBuilder &b, const Bus &x, std::uint64_t k)
{
    if (k == 0)
    {
        return Sig::constant(true);
    }
    if (bit_width(k) > x.size())
    {
        return Sig::constant(false);
    }
    // LSB to MSB: ge(x[n:0], k[n:0]) = k_n ? x_n & ge(lower) : x_n | ge(lower)
    Sig result = Sig::constant(true);
    for (std::size_t bit = 0; bit < x.size(); ++bit)
    {
        const bool k_bit = bit < 64 && ((k >> bit) & 1U) != 0;
        result = k_bit ? b.and2(x[bit], result) : b.or2(x[bit], result);
    }
    return result;
}

Sig or_reduce(NetlistBuilder &b, const Bus &x)
{
    Sig out = Sig::constant(false);
    for (const Sig s : x)
    {
        out = b.or2(out, s);
    }
    return out;
}

} // namespace tnn::hw::detail
