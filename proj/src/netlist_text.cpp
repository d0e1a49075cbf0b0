// Netlist text format.
//
//   // @tnn p=<p> q=<q> theta=<theta> T=<T> w_max=<w_max> model=<model> [H=<H>]
//   // @weights <neuron> <raw_0> ... <raw_{p-1}>        (one line per neuron)
//   module <name> (clk, rst, in_0, ..., out_0, ...);
//     input <net>;                 primary inputs, net ids 0..
//     output <net>; | wire <net>;  every other net, in net-id order
//     <KIND> <inst> (.<PIN>(<net>), ...);
//   endmodule
//
// Weights are raw fixed-point values (units of 1/256). Other `//` comment
// lines are ignored by the parser.
#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <sstream>
#include <string>

#include "tnn/errors.hpp"
#include "tnn/netlist.hpp"

namespace tnn::hw
{

namespace
{

constexpr std::string_view output_pin_name(GateKind kind) noexcept
{
    return kind == GateKind::dff ? "Q" : "Y";
}

std::vector<std::string_view> input_pin_names(GateKind kind)
{
    switch (kind)
    {
    case GateKind::not_gate:
        return {"A"};
    case GateKind::and2:
    case GateKind::or2:
    case GateKind::xor2:
        return {"A", "B"};
    case GateKind::mux2:
        return {"A", "B", "S"};
    case GateKind::dff:
        return {"D", "CK"};
    }
    return {};
}

} // namespace

std::string serialize(const Netlist &netlist)
{
    const ColumnConfig &cfg = netlist.metadata.config;
    std::ostringstream out;
    out << "// TNN column netlist: " << cfg.p << " inputs, " << cfg.q
        << " neurons, one clock cycle per tick\n";
    out << "// @tnn p=" << cfg.p << " q=" << cfg.q << " theta=" << cfg.theta
        << " T=" << cfg.T << " w_max=" << cfg.w_max << " model=" << to_string(cfg.model);
    if (cfg.horizon)
    {
        out << " H=" << *cfg.horizon;
    }
    out << '\n';
    for (std::uint32_t j = 0; j < cfg.q; ++j)
    {
        out << "// @weights " << j;
        for (std::uint32_t i = 0; i < cfg.p; ++i)
        {
            const std::size_t k = static_cast<std::size_t>(j) * cfg.p + i;
            out << ' ' << (k < netlist.metadata.weights.size() ? netlist.metadata.weights[k].raw() : 0U);
        }
        out << '\n';
    }

    std::vector<NetId> inputs{netlist.clock, netlist.reset};
    inputs.insert(inputs.end(), netlist.spike_inputs.begin(), netlist.spike_inputs.end());

    out << "module " << netlist.name << " (";
    bool first = true;
    const auto port = [&](NetId id) {
        out << (first ? "" : ", ") << netlist.nets[id];
        first = false;
    };
    for (const NetId id : inputs)
    {
        port(id);
    }
    for (const NetId id : netlist.spike_outputs)
    {
        port(id);
    }
    out << ");\n";

    std::vector<std::uint8_t> is_input(netlist.nets.size(), 0);
    std::vector<std::uint8_t> is_output(netlist.nets.size(), 0);
    for (const NetId id : inputs)
    {
        is_input[id] = 1;
        out << "  input " << netlist.nets[id] << ";\n";
    }
    for (const NetId id : netlist.spike_outputs)
    {
        is_output[id] = 1;
    }
    for (std::size_t id = 0; id < netlist.nets.size(); ++id)
    {
        if (is_input[id] == 0)
        {
            out << (is_output[id] != 0 ? "  output " : "  wire ") << netlist.nets[id] << ";\n";
        }
    }
    for (const Gate &gate : netlist.gates)
    {
        out << "  " << to_string(gate.kind) << ' ' << gate.name << " (."
            << output_pin_name(gate.kind) << '(' << netlist.nets[gate.output] << ')';
        const auto pins = input_pin_names(gate.kind);
        for (std::size_t k = 0; k < gate.inputs.size() && k < pins.size(); ++k)
        {
            out << ", ." << pins[k] << '(' << netlist.nets[gate.inputs[k]] << ')';
        }
        out << ");\n";
    }
    out << "endmodule\n";
    return out.str();
}

namespace
{

class Lexer
{
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    struct Token
    {
        std::string_view text;
        std::size_t line;
    };

    // Comment lines (//...) are collected separately.
    std::vector<Token> tokens;
    std::vector<Token> comments;

    void run()
    {
        std::size_t line = 1;
        std::size_t k = 0;
        while (k < text_.size())
        {
            const char c = text_[k];
            if (c == '\n')
            {
                ++line;
                ++k;
            }
            else if (std::isspace(static_cast<unsigned char>(c)))
            {
                ++k;
            }
            else if (c == '/' && k + 1 < text_.size() && text_[k + 1] == '/')
            {
                const std::size_t end = std::min(text_.find('\n', k), text_.size());
                comments.push_back({text_.substr(k + 2, end - k - 2), line});
                k = end;
            }
            else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_')
            {
                const std::size_t start = k;
                while (k < text_.size() &&
                        (std::isalnum(static_cast<unsigned char>(text_[k])) || text_[k] == '_'))
                {
                    ++k;
                }
                tokens.push_back({text_.substr(start, k - start), line});
            }
            else if (std::string_view("(),;.").find(c) != std::string_view::npos)
            {
                tokens.push_back({text_.substr(k, 1), line});
                ++k;
            }
            else
            {
                throw StructuralError("line " + std::to_string(line) +
                        ": unexpected character '" + std::string(1, c) + "'");
            }
        }
    }

private:
    std::string_view text_;
};

std::uint64_t parse_uint(std::string_view text, std::size_t line)
{
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
    {
        throw StructuralError("line " + std::to_string(line) + ": expected an integer, got '" +
                std::string(text) + "'");
    }
    return value;
}

std::vector<std::string_view> split_words(std::string_view text)
{
    std::vector<std::string_view> words;
    std::size_t k = 0;
    while (k < text.size())
    {
        while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k])))
        {
            ++k;
        }
        const std::size_t start = k;
        while (k < text.size() && !std::isspace(static_cast<unsigned char>(text[k])))
        {
            ++k;
        }
        if (k > start)
        {
            words.push_back(text.substr(start, k - start));
        }
    }
    return words;
}

NetlistMetadata parse_metadata(const std::vector<Lexer::Token> &comments)
{
    NetlistMetadata meta;
    bool have_header = false;
    std::map<std::uint64_t, std::vector<Weight>> rows;
    for (const auto &comment : comments)
    {
        const auto words = split_words(comment.text);
        if (words.empty())
        {
            continue;
        }
        if (words[0] == "@tnn")
        {
            have_header = true;
            for (std::size_t k = 1; k < words.size(); ++k)
            {
                const auto eq = words[k].find('=');
                if (eq == std::string_view::npos)
                {
                    throw StructuralError("line " + std::to_string(comment.line) +
                            ": malformed @tnn field");
                }
                const auto key = words[k].substr(0, eq);
                const auto value = words[k].substr(eq + 1);
                ColumnConfig &cfg = meta.config;
                const auto number = [&] {
                    return static_cast<std::uint32_t>(parse_uint(value, comment.line));
                };
                if (key == "p")
                    cfg.p = number();
                else if (key == "q")
                    cfg.q = number();
                else if (key == "theta")
                    cfg.theta = number();
                else if (key == "T")
                    cfg.T = number();
                else if (key == "w_max")
                    cfg.w_max = number();
                else if (key == "H")
                    cfg.horizon = number();
                else if (key == "model")
                {
                    try
                    {
                        cfg.model = parse_neuron_model(value);
                    }
                    catch (const DomainError &e)
                    {
                        throw StructuralError("line " + std::to_string(comment.line) + ": " + e.what());
                    }
                }
                else
                    throw StructuralError("line " + std::to_string(comment.line) +
                            ": unknown @tnn field '" + std::string(key) + "'");
            }
        }
        else if (words[0] == "@weights")
        {
            if (words.size() < 2)
            {
                throw StructuralError("line " + std::to_string(comment.line) + ": malformed @weights");
            }
            std::vector<Weight> row;
            for (std::size_t k = 2; k < words.size(); ++k)
            {
                row.push_back(Weight::from_raw(
                        static_cast<std::uint32_t>(parse_uint(words[k], comment.line))));
            }
            rows[parse_uint(words[1], comment.line)] = std::move(row);
        }
    }
    if (!have_header)
    {
        throw StructuralError("missing '// @tnn' metadata line");
    }
    try
    {
        meta.config.validate();
    }
    catch (const DomainError &e)
    {
        throw StructuralError(std::string("invalid column metadata: ") + e.what());
    }
    if (rows.size() != meta.config.q)
    {
        throw StructuralError("expected " + std::to_string(meta.config.q) + " @weights lines");
    }
    for (std::uint32_t j = 0; j < meta.config.q; ++j)
    {
        const auto it = rows.find(j);
        if (it == rows.end() || it->second.size() != meta.config.p)
        {
            throw StructuralError("@weights line for neuron " + std::to_string(j) +
                    " missing or of wrong length");
        }
        meta.weights.insert(meta.weights.end(), it->second.begin(), it->second.end());
    }
    return meta;
}

class Parser
{
public:
    explicit Parser(const std::vector<Lexer::Token> &tokens) : tokens_(tokens) {}

    Netlist parse()
    {
        Netlist netlist;
        expect("module");
        netlist.name = std::string(identifier());
        expect("(");
        std::vector<std::string_view> ports;
        if (peek() != ")")
        {
            ports.push_back(identifier());
            while (peek() == ",")
            {
                ++pos_;
                ports.push_back(identifier());
            }
        }
        expect(")");
        expect(";");

        std::map<std::string, NetId, std::less<>> ids;
        std::vector<std::string_view> inputs;
        std::vector<std::string_view> outputs;
        const auto declare = [&](std::string_view name) {
            if (!ids.emplace(std::string(name), static_cast<NetId>(netlist.nets.size())).second)
            {
                fail("net '" + std::string(name) + "' declared twice");
            }
            netlist.nets.emplace_back(name);
        };

        while (peek() != "endmodule")
        {
            const std::string_view word = identifier();
            if (word == "input" || word == "output" || word == "wire")
            {
                const std::string_view name = identifier();
                expect(";");
                if (word == "input" && netlist.nets.size() != inputs.size())
                {
                    fail("input declarations must precede other nets");
                }
                declare(name);
                if (word == "input")
                    inputs.push_back(name);
                else if (word == "output")
                    outputs.push_back(name);
                continue;
            }
            parse_instance(word, netlist, ids);
        }
        expect("endmodule");
        if (pos_ != tokens_.size())
        {
            fail("trailing tokens after endmodule");
        }

        // Inputs appear in port order; outputs may be declared in any order
        // and take their order from the port list.
        std::vector<std::string_view> port_outputs;
        if (ports.size() >= inputs.size())
        {
            port_outputs.assign(ports.begin() + static_cast<std::ptrdiff_t>(inputs.size()), ports.end());
        }
        std::vector<std::string_view> sorted_decl = outputs;
        std::vector<std::string_view> sorted_port = port_outputs;
        std::sort(sorted_decl.begin(), sorted_decl.end());
        std::sort(sorted_port.begin(), sorted_port.end());
        if (ports.size() < inputs.size() ||
                !std::equal(inputs.begin(), inputs.end(), ports.begin()) || sorted_decl != sorted_port)
        {
            fail("port list does not match input/output declarations");
        }
        bool have_clock = false;
        bool have_reset = false;
        for (const std::string_view name : inputs)
        {
            const NetId id = ids.find(name)->second;
            if (name == "clk")
            {
                netlist.clock = id;
                have_clock = true;
            }
            else if (name == "rst")
            {
                netlist.reset = id;
                have_reset = true;
            }
            else
            {
                netlist.spike_inputs.push_back(id);
            }
        }
        if (!have_clock || !have_reset)
        {
            fail("module needs 'clk' and 'rst' inputs");
        }
        for (const std::string_view name : port_outputs)
        {
            netlist.spike_outputs.push_back(ids.find(name)->second);
        }
        return netlist;
    }

private:
    void parse_instance(std::string_view kind_name, Netlist &netlist,
            const std::map<std::string, NetId, std::less<>> &ids)
    {
        static const std::map<std::string_view, GateKind> kinds{
                {"NOT", GateKind::not_gate}, {"AND2", GateKind::and2},
                {"OR2", GateKind::or2}, {"XOR2", GateKind::xor2},
                {"MUX2", GateKind::mux2}, {"DFF", GateKind::dff}};
        const auto kind_it = kinds.find(kind_name);
        if (kind_it == kinds.end())
        {
            fail("unknown primitive '" + std::string(kind_name) + "'");
        }
        Gate gate;
        gate.kind = kind_it->second;
        gate.name = std::string(identifier());
        const auto pins = input_pin_names(gate.kind);
        std::map<std::string_view, NetId> bound;
        expect("(");
        do
        {
            if (peek() == ",")
            {
                ++pos_;
            }
            expect(".");
            const std::string_view pin = identifier();
            expect("(");
            const std::string_view net = identifier();
            expect(")");
            const auto net_it = ids.find(net);
            if (net_it == ids.end())
            {
                fail("undeclared net '" + std::string(net) + "'");
            }
            if (!bound.emplace(pin, net_it->second).second)
            {
                fail("pin ." + std::string(pin) + " bound twice");
            }
        } while (peek() == ",");
        expect(")");
        expect(";");

        const std::string_view out_pin = output_pin_name(gate.kind);
        if (bound.size() != pins.size() + 1 || bound.count(out_pin) == 0)
        {
            fail("instance " + gate.name + " has wrong pins for " + std::string(kind_name));
        }
        gate.output = bound[out_pin];
        for (const std::string_view pin : pins)
        {
            const auto it = bound.find(pin);
            if (it == bound.end())
            {
                fail("instance " + gate.name + " is missing pin ." + std::string(pin));
            }
            gate.inputs.push_back(it->second);
        }
        netlist.gates.push_back(std::move(gate));
    }

    [[nodiscard]] std::string_view peek() const
    {
        return pos_ < tokens_.size() ? tokens_[pos_].text : std::string_view{};
    }

    std::string_view identifier()
    {
        const std::string_view t = peek();
        if (t.empty() || !(std::isalpha(static_cast<unsigned char>(t[0])) || t[0] == '_'))
        {
            fail("expected an identifier, got '" + std::string(t) + "'");
        }
        ++pos_;
        return t;
    }

    void expect(std::string_view what)
    {
        if (peek() != what)
        {
            fail("expected '" + std::string(what) + "', got '" + std::string(peek()) + "'");
        }
        ++pos_;
    }

    [[noreturn]] void fail(const std::string &message) const
    {
        const std::size_t line = pos_ < tokens_.size() ? tokens_[pos_].line
                : (tokens_.empty() ? 0 : tokens_.back().line);
        throw StructuralError("line " + std::to_string(line) + ": " + message);
    }

    const std::vector<Lexer::Token> &tokens_;
    std::size_t pos_{0};
};

} // namespace

Netlist parse_netlist(std::string_view text)
{
    Lexer lexer(text);
    lexer.run();
    Netlist netlist = Parser(lexer.tokens).parse();
    netlist.metadata = parse_metadata(lexer.comments);
    lint(netlist);
    return netlist;
}

} // namespace tnn::hw
