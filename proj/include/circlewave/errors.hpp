#ifndef CIRCLEWAVE_ERRORS_HPP
#define CIRCLEWAVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace circlewave {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Expression-language syntax error; `offset` is the byte offset into the
// source string where the problem was detected.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : Error(msg + " (at offset " + std::to_string(offset) + ")"),
          offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Evaluation left the domain of an operation (division by zero).
class DomainError : public Error {
public:
    using Error::Error;
};

// Grid sizes of two operands do not match, or a field fails construction
// invariants (non-finite values, bad N).
class FieldError : public Error {
public:
    using Error::Error;
};

// Max-norm exceeded the configured blow-up threshold.  `last_time` is the
// last time at which the state was still valid.
class BlowupError : public Error {
public:
    BlowupError(const std::string& msg, double last_time)
        : Error(msg), last_time_(last_time) {}
    double last_time() const { return last_time_; }

private:
    double last_time_;
};

// NaN/Inf appeared during stepping without crossing the blow-up threshold.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Bad experiment configuration (missing keys, unparsable nonlinearity, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace circlewave

#endif
