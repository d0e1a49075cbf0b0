// netlist_builder.hpp
//
//  Incremental construction of a Netlist with constant folding and
//  structural hashing. Signals may be constants; constants are only turned
//  into tie cells when they must drive a register or a port.
#ifndef TNN_NETLIST_BUILDER_HPP
#define TNN_NETLIST_BUILDER_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tnn/netlist.hpp"

namespace tnn::hw::detail
{

class Sig
{
public:
    [[nodiscard]] static constexpr Sig constant(bool v) noexcept { return Sig{v ? one_id : zero_id}; }
    [[nodiscard]] static constexpr Sig net(NetId id) noexcept { return Sig{static_cast<std::int64_t>(id)}; }

    [[nodiscard]] constexpr bool is_const() const noexcept { return id_ < 0; }
    [[nodiscard]] constexpr bool value() const noexcept { return id_ == one_id; }
    [[nodiscard]] constexpr bool is_zero() const noexcept { return id_ == zero_id; }
    [[nodiscard]] constexpr bool is_one() const noexcept { return id_ == one_id; }
    [[nodiscard]] constexpr NetId id() const noexcept { return static_cast<NetId>(id_); }

    friend constexpr auto operator<=>(Sig, Sig) noexcept = default;

private:
    static constexpr std::int64_t zero_id = -1;
    static constexpr std::int64_t one_id = -2;
    constexpr explicit Sig(std::int64_t id) noexcept : id_(id) {}
    std::int64_t id_;
};

// Little-endian bit vector.
using Bus = std::vector<Sig>;

class NetlistBuilder
{
public:
    explicit NetlistBuilder(std::string module_name);

    [[nodiscard]] Sig clock() const noexcept { return Sig::net(netlist_.clock); }
    [[nodiscard]] Sig reset() const noexcept { return Sig::net(netlist_.reset); }
    Sig add_spike_input(const std::string &name);
    void add_spike_output(const std::string &name, Sig value);

    Sig inv(Sig a);
    Sig and2(Sig a, Sig b);
    Sig or2(Sig a, Sig b);
    Sig xor2(Sig a, Sig b);
    // sel ? b : a
    Sig mux2(Sig sel, Sig a, Sig b);

    // A DFF whose D pin is connected later with connect().
    Sig reg();
    void connect(Sig q, Sig d);

    Netlist finish(NetlistMetadata metadata);

private:
    NetId new_net(std::string name = {});
    Sig emit(GateKind kind, std::vector<Sig> inputs);
    NetId materialize(Sig s);
    [[nodiscard]] std::optional<Sig> inverse_of(Sig s) const;

    Netlist netlist_;
    std::map<std::pair<GateKind, std::vector<std::int64_t>>, NetId> hashed_;
    std::map<NetId, std::size_t> driver_;
    std::map<NetId, std::size_t> pending_regs_;
    std::optional<NetId> tie0_;
    std::optional<NetId> tie1_;
    std::size_t next_internal_{0};
};

// Arithmetic helpers over buses.
[[nodiscard]] Bus constant_bus(std::uint64_t value, std::size_t width);
[[nodiscard]] Bus add(NetlistBuilder &b, const Bus &x, const Bus &y);
[[nodiscard]] Bus add_tree(NetlistBuilder &b, std::vector<Bus> terms);
// x >= k, unsigned.
[[nodiscard]] Sig ge_const(NetlistBuilder &b, const Bus &x, std::uint64_t k);
[[nodiscard]] Sig or_reduce(NetlistBuilder &b, const Bus &x);
[[nodiscard]] std::size_t bit_width(std::uint64_t v) noexcept;

// Combinational gates in evaluation order. Throws StructuralError on a
// combinational cycle. Assumes pin indices are in range (see lint()).
[[nodiscard]] std::vector<std::size_t> combinational_order(const Netlist &netlist);

} // namespace tnn::hw::detail

#endif
