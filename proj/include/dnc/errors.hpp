#pragma once

#include <stdexcept>
#include <string>

namespace dnc {

//! Result would have no finite bound (slope/stability condition violated).
struct UnboundedResult : std::runtime_error {
    explicit UnboundedResult(const std::string& what) : std::runtime_error(what) {}
};

//! Operand shapes outside the supported concave/convex piecewise-linear classes.
struct UnsupportedShape : std::runtime_error {
    explicit UnsupportedShape(const std::string& what) : std::runtime_error(what) {}
};

//! Text input could not be parsed; carries a 1-based line number when known.
struct ParseError : std::runtime_error {
    ParseError(const std::string& what, int line_no = 0)
        : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + what : what),
          line(line_no) {}
    int line;
};

//! A structural invariant does not hold; the message names the invariant.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

//! Enumeration would exceed the configured budget.
struct TooLarge : std::runtime_error {
    explicit TooLarge(const std::string& what) : std::runtime_error(what) {}
};

//! No device pair is connected by any server path.
struct NoRoutableFlows : std::runtime_error {
    explicit NoRoutableFlows(const std::string& what) : std::runtime_error(what) {}
};

//! Feed-forwardization lost reachability; indicates a bug, never expected.
struct ConnectivityLost : std::runtime_error {
    explicit ConnectivityLost(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dnc
