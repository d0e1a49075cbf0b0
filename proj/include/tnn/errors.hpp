// errors.hpp
//
// Exception types shared across the toolchain. The CLI maps each of these to
// a distinct process exit code.
#ifndef TNN_ERRORS_HPP
#define TNN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tnn
{

// Argument outside an operation's domain (negative intensity, length
// mismatch, out-of-range spike time, ...).
class DomainError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Bad run configuration or sweep description.
class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Dataset parse failure. Messages name the offending line.
class DataError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Netlist violates a structural rule (multiple drivers, combinational loop,
// undriven net, malformed text).
class StructuralError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Column cannot be compiled (emission cap exceeded).
class EmissionError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// A pipeline stage failed; what() is prefixed with "[stage] ".
class StageError : public std::runtime_error
{
public:
    StageError(std::string stage, const std::string &message)
            : std::runtime_error("[" + stage + "] " + message)
            , stage_(std::move(stage))
    {
    }
    [[nodiscard]] const std::string &stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

} // namespace tnn

#endif
