#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fiskit/expr.hpp"

using namespace fiskit;
const double PI = std::numbers::pi;

namespace {

ChartPtr t2(int res = 8) {
    return Chart::make({{"x1", 2 * PI, res}, {"x2", 2 * PI, res}});
}

cplx eval_at(const std::string& text, const std::vector<double>& x,
             std::map<std::string, double> params = {}) {
    auto chart = t2();
    auto f = evaluate(parse_expr(text), chart, params);
    // find nearest grid point (tests use exact grid coordinates)
    std::vector<int> idx;
    for (int a = 0; a < 2; ++a)
        idx.push_back(int(std::lround(x[a] * 8 / (2 * PI))) % 8);
    return f(chart->flatten(idx));
}

} // namespace

#include "golden_expr.hpp"

TEST_CASE("golden precedence and associativity table") {
    for (const auto& c : golden::kCases) {
        CAPTURE(c.text);
        cplx got = eval_at(c.text, {c.x1, c.x2});
        CHECK(std::abs(got - c.expect) < 1e-12);
    }
    // the documented associativity example: x1 ^ 2 ^ 3 = x1^8
    {
        cplx got = eval_at("x1 ^ 2 ^ 3", {PI / 2, 0});
        CHECK(std::abs(got - std::pow(PI / 2, 8.0)) < 1e-9);
    }
}

TEST_CASE("AST structure") {
    auto e = parse_expr("sin(x1) + i*cos(x2)");
    REQUIRE(e->kind == Expr::Kind::Binary);
    CHECK(e->op == '+');
    CHECK(e->args[0]->kind == Expr::Kind::Call);
    CHECK(e->args[0]->name == "sin");
    CHECK(e->args[1]->kind == Expr::Kind::Binary);
    CHECK(e->args[1]->op == '*');
    CHECK(e->args[1]->args[0]->kind == Expr::Kind::ImagUnit);
    CHECK(e->args[1]->args[1]->name == "cos");
}

TEST_CASE("printer round trip") {
    for (const char* text :
         {"sin(x1) + i*cos(x2)", "2+sin(x1)", "x1 ^ 2 ^ 3", "-x1^2 + 3*(x2 - 1)/4",
          "abs2(exp(i*x1) - 1)", "1e-3 * x1 - 2.5E2", "sqrt(abs2(x1) + 1)"}) {
        auto e1 = parse_expr(text);
        auto e2 = parse_expr(print_expr(e1));
        CAPTURE(text);
        CHECK(expr_equal(e1, e2));
        CHECK(print_expr(e1) == print_expr(e2));
    }
}

TEST_CASE("errors carry positions") {
    try {
        parse_expr("sin(x1");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.line == 1);
        CHECK(e.col >= 6);
    }
    CHECK_THROWS_AS(parse_expr("2 +* 3"), ParseError);
    CHECK_THROWS_AS(parse_expr("foo$bar"), ParseError);

    auto chart = t2();
    CHECK_THROWS_AS(evaluate(parse_expr("nope(1)"), chart, {}), ParseError);
    // unknown identifier reported at resolve time
    try {
        evaluate(parse_expr("x1 + bogus"), chart, {});
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("bogus") != std::string::npos);
    }
}

TEST_CASE("domain violations") {
    auto chart = t2();
    CHECK_THROWS_AS(evaluate(parse_expr("log(sin(x1))"), chart, {}), DomainError);
    CHECK_THROWS_AS(evaluate(parse_expr("log(0)"), chart, {}), DomainError);
    CHECK_THROWS_AS(evaluate(parse_expr("sqrt(0 - 1)"), chart, {}), DomainError);
    CHECK_THROWS_AS(evaluate(parse_expr("1/sin(x1)"), chart, {}), DomainError);
    CHECK_THROWS_AS(evaluate(parse_expr("x1 ^ x2"), chart, {}), ParseError);
    // valid: log of a strictly positive field
    CHECK_NOTHROW(evaluate(parse_expr("log(2 + sin(x1))"), chart, {}));
}

TEST_CASE("parameters and determinism") {
    auto chart = t2();
    std::map<std::string, double> params{{"eps", 0.5}};
    auto f = evaluate(parse_expr("eps^2 - abs2(exp(i*x1) - 1)"), chart, params);
    CHECK(std::abs(f(0) - cplx(0.25)) < 1e-12);

    // grid-resolution covariance: coarse evaluation equals the restriction
    // of the fine evaluation at shared points, exactly
    auto fine = Chart::make({{"x1", 2 * PI, 16}, {"x2", 2 * PI, 16}});
    auto e = parse_expr("sin(x1) * cos(x2) + i*x1");
    auto fc = evaluate(e, chart, {});
    auto ff = evaluate(e, fine, {});
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            CHECK(fc(chart->flatten({i, j})) == ff(fine->flatten({2 * i, 2 * j})));
}
