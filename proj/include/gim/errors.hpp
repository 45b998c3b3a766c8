#pragma once

#include <stdexcept>
#include <string>

namespace gim {

/// Malformed input text or file. Carries a 1-based line/column when the
/// source location is known (0 means "not applicable").
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line = 0, int column = 0)
        : std::runtime_error(format(msg, line, column)), line_(line), column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    static std::string format(const std::string& msg, int line, int column) {
        if (line <= 0) return msg;
        return msg + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")";
    }
    int line_;
    int column_;
};

/// The requested set fails the finiteness test, so its measure does not
/// converge and no number is reported.
class DivergentMeasure : public std::runtime_error {
public:
    explicit DivergentMeasure(const std::string& msg) : std::runtime_error(msg) {}
};

/// An outcome-count guard was exceeded (construction guard or the
/// exact-evaluation guard, which is overridable).
class OmegaGuardExceeded : public std::runtime_error {
public:
    explicit OmegaGuardExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace gim
