#pragma once

#include <map>
#include <memory>
#include <string>

#include "fiskit/field.hpp"

namespace fiskit {

/// Expression AST for scenario field definitions. Identifiers resolve to
/// chart coordinates or declared parameters; "i" is the imaginary unit.
struct Expr {
    enum class Kind { Number, ImagUnit, Ident, Unary, Binary, Call };
    Kind kind = Kind::Number;
    double number = 0.0;
    std::string name; // identifier or function name
    char op = 0;      // + - * / ^
    std::vector<std::shared_ptr<const Expr>> args;
    int line = 1, col = 1;
};
using ExprPtr = std::shared_ptr<const Expr>;

/// Recursive descent with standard precedence: ^ above unary minus above
/// * / above + -; left associative except ^.
ExprPtr parse_expr(const std::string& text);

/// Canonical fully parenthesized printer; parse(print(parse(t))) == parse(t).
std::string print_expr(const ExprPtr& e);
bool expr_equal(const ExprPtr& a, const ExprPtr& b);

/// Pointwise evaluation. log and sqrt reject zero and negative-real inputs
/// at any grid point; ^ takes constant integer exponents.
ScalarField evaluate(const ExprPtr& e, const ChartPtr& chart,
                     const std::map<std::string, double>& params);

/// Constant fold without a chart (for exponents and parameter expressions).
cplx evaluate_constant(const ExprPtr& e, const std::map<std::string, double>& params);

} // namespace fiskit
