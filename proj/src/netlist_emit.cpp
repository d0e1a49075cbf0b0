// Column compiler.
//
//  Per synapse (ramp model): a down-counter loaded with the effective ramp
//  when its input pulses; it asserts "active" while nonzero, so a synapse
//  loaded at cycle x is active on cycles x+1 .. x+w. Per neuron: a popcount
//  adder tree over active bits, an accumulator register, and a comparator
//  against theta on (accumulator + popcount). The step model replaces the
//  counters with the weight constant gated by the input pulse.
//
//  A per-neuron first-spike latch turns the (monotone) threshold crossing
//  into a one-cycle spike; a priority chain plus a column "done" latch lets
//  only the earliest, lowest-index spike through.
#include <algorithm>
#include <numeric>
#include <string>

#include "netlist_builder.hpp"
#include "tnn/errors.hpp"
#include "tnn/netlist.hpp"

namespace tnn::hw
{

using detail::Bus;
using detail::NetlistBuilder;
using detail::Sig;

namespace
{

// Adds a register bus whose next value is `next` (cleared by reset).
void clocked(NetlistBuilder &b, const Bus &regs, const Bus &next, Sig not_reset)
{
    for (std::size_t k = 0; k < regs.size(); ++k)
    {
        const Sig d = k < next.size() ? next[k] : Sig::constant(false);
        b.connect(regs[k], b.and2(not_reset, d));
    }
}

Bus make_regs(NetlistBuilder &b, std::size_t width)
{
    Bus regs;
    regs.reserve(width);
    for (std::size_t k = 0; k < width; ++k)
    {
        regs.push_back(b.reg());
    }
    return regs;
}

// One-hot "synapse active" bit for a ramp synapse.
Sig ramp_synapse(NetlistBuilder &b, Sig pulse, std::uint32_t ramp, Sig not_reset)
{
    const std::size_t width = detail::bit_width(ramp);
    const Bus count = make_regs(b, width);
    const Sig active = detail::or_reduce(b, count);

    Bus next;
    Sig borrow = Sig::constant(true);
    for (std::size_t k = 0; k < width; ++k)
    {
        const Sig decremented = b.xor2(count[k], borrow);
        borrow = b.and2(borrow, b.inv(count[k]));
        const Sig held = b.and2(active, decremented);
        const Sig load = Sig::constant(((ramp >> k) & 1U) != 0);
        next.push_back(b.mux2(pulse, held, load));
    }
    clocked(b, count, next, not_reset);
    return active;
}

// Signal high while tick < horizon; only needed when the horizon cuts off
// ramps that are still rising.
Sig horizon_window(NetlistBuilder &b, std::uint32_t horizon, Sig not_reset)
{
    const Bus count = make_regs(b, detail::bit_width(horizon));
    const Sig inside = b.inv(detail::ge_const(b, count, horizon));
    const Bus incremented = detail::add(b, count, detail::constant_bus(1, 1));
    Bus next;
    for (std::size_t k = 0; k < count.size(); ++k)
    {
        next.push_back(b.mux2(inside, count[k], incremented[k]));
    }
    clocked(b, count, next, not_reset);
    return inside;
}

} // namespace

Netlist emit_netlist(const ColumnState &state, const EmitOptions &options)
{
    const ColumnConfig &cfg = state.config();
    const std::size_t synapses = static_cast<std::size_t>(cfg.p) * cfg.q;
    if (synapses > options.max_synapses)
    {
        throw EmissionError("column has " + std::to_string(synapses) +
                " synapses, emission cap is " + std::to_string(options.max_synapses));
    }

    NetlistBuilder b(options.module_name);
    std::vector<Sig> pulses;
    for (std::uint32_t i = 0; i < cfg.p; ++i)
    {
        pulses.push_back(b.add_spike_input("in_" + std::to_string(i)));
    }
    const Sig not_reset = b.inv(b.reset());

    std::uint32_t max_ramp = 0;
    for (const Weight w : state.weights())
    {
        max_ramp = std::max(max_ramp, w.effective_ramp());
    }
    // Potentials stop changing after tick T - 1 + max_ramp.
    Sig window = Sig::constant(true);
    if (cfg.model == NeuronModel::ramp_no_leak &&
            static_cast<std::uint64_t>(cfg.H()) < static_cast<std::uint64_t>(cfg.T) + max_ramp)
    {
        window = horizon_window(b, cfg.H(), not_reset);
    }

    std::vector<Sig> spikes;
    for (std::uint32_t j = 0; j < cfg.q; ++j)
    {
        const auto weights = state.neuron_weights(j);
        std::vector<Bus> terms;
        std::uint64_t reachable = 0;
        for (std::uint32_t i = 0; i < cfg.p; ++i)
        {
            const std::uint32_t ramp = weights[i].effective_ramp();
            if (ramp == 0)
            {
                continue;
            }
            reachable += ramp;
            if (cfg.model == NeuronModel::ramp_no_leak)
            {
                terms.push_back({ramp_synapse(b, pulses[i], ramp, not_reset)});
            }
            else
            {
                Bus gated;
                for (std::size_t k = 0; k < detail::bit_width(ramp); ++k)
                {
                    gated.push_back(((ramp >> k) & 1U) != 0 ? pulses[i] : Sig::constant(false));
                }
                terms.push_back(std::move(gated));
            }
        }
        if (reachable < cfg.theta)
        {
            spikes.push_back(Sig::constant(false));
            continue;
        }

        const Bus increment = detail::add_tree(b, std::move(terms));
        const Bus accumulator = make_regs(b, detail::bit_width(reachable));
        Bus potential = detail::add(b, accumulator, increment);
        potential.resize(accumulator.size(), Sig::constant(false));
        clocked(b, accumulator, potential, not_reset);

        const Sig crossed = b.and2(window, detail::ge_const(b, potential, cfg.theta));
        const Sig fired = b.reg();
        const Sig spike = b.and2(crossed, b.inv(fired));
        b.connect(fired, b.and2(not_reset, b.or2(fired, spike)));
        spikes.push_back(spike);
    }

    // Priority encoder: the lowest-index spike in the first spiking cycle wins.
    const Sig done = b.reg();
    const Sig open = b.inv(done);
    Sig earlier = Sig::constant(false);
    std::vector<Sig> outputs;
    for (const Sig spike : spikes)
    {
        outputs.push_back(b.and2(spike, b.and2(open, b.inv(earlier))));
        earlier = b.or2(earlier, spike);
    }
    b.connect(done, b.and2(not_reset, b.or2(done, earlier)));
    for (std::uint32_t j = 0; j < cfg.q; ++j)
    {
        b.add_spike_output("out_" + std::to_string(j), outputs[j]);
    }

    NetlistMetadata metadata{cfg, std::vector<Weight>(state.weights().begin(), state.weights().end())};
    return b.finish(std::move(metadata));
}

} // namespace tnn::hw
