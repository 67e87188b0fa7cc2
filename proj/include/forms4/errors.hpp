#pragma once

#include <stdexcept>
#include <string>

namespace forms4 {

/// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exact backend asked to produce an irrational value (e.g. exp of a
/// non-zero rational constant term), or incompatible coefficient modes.
struct backend_error : error {
    using error::error;
};

/// A derivative or pullback ran out of jet order.  Carries the name of
/// the operation that exhausted the budget.
struct order_error : error {
    explicit order_error(const std::string& op)
        : error("order budget exhausted in " + op), operation(op) {}
    std::string operation;
};

/// Division by zero, ln of a non-positive value, singular Jacobian.
struct singular_error : error {
    using error::error;
};

/// A 2-form of rank < 4 where maximal rank is required.
struct degenerate_error : error {
    using error::error;
};

/// The attached frame fails to be a frame (J = 0 or volume 0).
struct frame_error : error {
    using error::error;
};

/// DSL syntax error with position information.
struct parse_error : error {
    parse_error(const std::string& what, int line_, int column_)
        : error(what + " at line " + std::to_string(line_) + ", column " +
                std::to_string(column_)),
          line(line_), column(column_) {}
    int line;
    int column;
};

} // namespace forms4
