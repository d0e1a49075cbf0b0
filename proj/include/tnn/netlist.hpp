// netlist.hpp
//
//  Gate-level netlists for frozen TNN columns.
//
//  A netlist is a flat synchronous design over six primitives (NOT, AND2,
//  OR2, XOR2, MUX2, DFF) with one clock. One clock cycle is one encoding
//  tick: input line i carries a one-cycle pulse at cycle x_i, and output
//  line j carries a one-cycle pulse at the winner's fire cycle. Every net has
//  exactly one driver (a gate output or a primary input) and the
//  combinational subgraph is acyclic.
//
//  Pin order in Gate::inputs:
//     NOT   A            Y = !A
//     AND2  A B          Y = A & B
//     OR2   A B          Y = A | B
//     XOR2  A B          Y = A ^ B
//     MUX2  A B S        Y = S ? B : A
//     DFF   D CK         Q <= D on every clock edge, power-on value 0
#ifndef TNN_NETLIST_HPP
#define TNN_NETLIST_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tnn/column.hpp"
#include "tnn/spike_time.hpp"
#include "tnn/weight.hpp"

namespace tnn::hw
{

enum class GateKind : std::uint8_t
{
    not_gate,
    and2,
    or2,
    xor2,
    mux2,
    dff,
};

inline constexpr std::size_t gate_kind_count = 6;

[[nodiscard]] std::string_view to_string(GateKind kind) noexcept;
[[nodiscard]] std::size_t pin_count(GateKind kind) noexcept;

using NetId = std::uint32_t;

struct Gate
{
    GateKind kind{GateKind::not_gate};
    std::string name;
    NetId output{0};
    std::vector<NetId> inputs;

    friend bool operator==(const Gate &, const Gate &) = default;
};

// The column a netlist was compiled from.
struct NetlistMetadata
{
    ColumnConfig config;
    std::vector<Weight> weights; // neuron-major, as ColumnState

    friend bool operator==(const NetlistMetadata &, const NetlistMetadata &) = default;
};

struct Netlist
{
    std::string name;
    std::vector<std::string> nets;
    NetId clock{0};
    NetId reset{0};
    std::vector<NetId> spike_inputs;
    std::vector<NetId> spike_outputs;
    std::vector<Gate> gates;
    NetlistMetadata metadata;

    [[nodiscard]] std::array<std::size_t, gate_kind_count> gate_counts() const;

    friend bool operator==(const Netlist &, const Netlist &) = default;
};

struct EmitOptions
{
    // Largest p * q accepted.
    std::size_t max_synapses{4096};
    std::string module_name{"tnn_column"};
};

// Compiles the integer parts of the weights into counter load constants.
// Throws EmissionError when p * q exceeds the cap.
[[nodiscard]] Netlist emit_netlist(const ColumnState &state, const EmitOptions &options = {});

// Throws StructuralError on a violated invariant.
void lint(const Netlist &netlist);

// Structural HDL text (module, port and wire declarations, primitive
// instances with named pins). Deterministic, LF line endings.
[[nodiscard]] std::string serialize(const Netlist &netlist);
// Parses the subset written by serialize. Throws StructuralError.
[[nodiscard]] Netlist parse_netlist(std::string_view text);

// Cycle-based two-phase interpreter: settle combinational logic in
// topological order, then clock every DFF. Construction lints the netlist.
class NetlistSimulator
{
public:
    explicit NetlistSimulator(const Netlist &netlist);

    // Registers start at 0 and reset is held low. Returns, per output line,
    // the first cycle in [0, cycles) at which it is high.
    [[nodiscard]] SpikeVector run(std::span<const SpikeTime> inputs, std::uint32_t cycles);

private:
    const Netlist &netlist_;
    std::vector<std::size_t> comb_order_;
    std::vector<std::size_t> registers_;
    std::vector<std::uint8_t> values_;
};

[[nodiscard]] SpikeVector simulate_netlist(
        const Netlist &netlist, std::span<const SpikeTime> inputs, std::uint32_t cycles);

} // namespace tnn::hw

#endif
