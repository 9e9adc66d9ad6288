#pragma once

#include <stdexcept>
#include <string>

namespace fiskit {

/// Base class for all library errors. Everything thrown by fiskit derives
/// from this so callers (CLI, tests) can catch one type.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ChartMismatch : public Error {
public:
    explicit ChartMismatch(const std::string& what)
        : Error("chart mismatch: " + what) {}
};

class FrameDegenerate : public Error {
public:
    FrameDegenerate(std::size_t point, double sigma_min)
        : Error("frame degenerate at grid point " + std::to_string(point) +
                " (smallest singular value " + std::to_string(sigma_min) + ")"),
          point(point), sigma_min(sigma_min) {}
    std::size_t point;
    double sigma_min;
};

class InvalidTwist : public Error {
public:
    explicit InvalidTwist(double residual)
        : Error("1-form fails the twist condition (residual " +
                std::to_string(residual) + ")"),
          residual(residual) {}
    double residual;
};

class InfeasibleDecomposition : public Error {
public:
    InfeasibleDecomposition(std::size_t point, double residual)
        : Error("commutator does not decompose over the frame at point " +
                std::to_string(point) + " (residual " + std::to_string(residual) + ")"),
          point(point), residual(residual) {}
    std::size_t point;
    double residual;
};

class NotClosed : public Error {
public:
    explicit NotClosed(double residual)
        : Error("input form is not closed (residual " + std::to_string(residual) + ")"),
          residual(residual) {}
    double residual;
};

class NotDivisible : public Error {
public:
    explicit NotDivisible(const std::string& witness)
        : Error("not divisible; witness monomial " + witness), witness(witness) {}
    std::string witness;
};

class NoRealDirection : public Error {
public:
    explicit NoRealDirection(std::size_t point)
        : Error("no real direction in the intersection bundle moves the weight at point " +
                std::to_string(point)),
          point(point) {}
    std::size_t point;
};

class IllConditioned : public Error {
public:
    explicit IllConditioned(double cond_estimate)
        : Error("iterative solve stalled (condition estimate " +
                std::to_string(cond_estimate) + ")"),
          cond_estimate(cond_estimate) {}
    double cond_estimate;
};

class DomainError : public Error {
public:
    DomainError(std::size_t point, const std::string& fn)
        : Error("domain violation in " + fn + " at grid point " + std::to_string(point)),
          point(point), fn(fn) {}
    std::size_t point;
    std::string fn;
};

class ParseError : public Error {
public:
    ParseError(int line, int col, const std::string& msg)
        : Error("parse error at " + std::to_string(line) + ":" + std::to_string(col) +
                ": " + msg),
          line(line), col(col) {}
    int line, col;
};

} // namespace fiskit
