#include "doctest.h"

#include <cmath>

#include "medialkit/expr.hpp"

using namespace medialkit;

namespace {

double eval1(const std::string& src, double x) {
    return parse_expression(src).evaluate(Vec{x});
}

double eval3(const std::string& src, double x, double y, double z) {
    return parse_expression(src).evaluate(Vec{x, y, z});
}

}  // namespace

TEST_SUITE("expr") {

TEST_CASE("precedence and associativity") {
    CHECK(eval1("2+3*4", 0) == 14.0);
    CHECK(eval1("(2+3)*4", 0) == 20.0);
    CHECK(eval1("2*3^2", 0) == 18.0);
    CHECK(eval1("2^3^2", 0) == 512.0);  // right-associative
    CHECK(eval1("6/3/2", 0) == 1.0);    // left-associative
    CHECK(eval1("1-2-3", 0) == -4.0);
    CHECK(eval1("-2^2", 0) == 4.0);  // unary minus binds to the atom
    CHECK(eval1("0-2^2", 0) == -4.0);
    CHECK(eval1("--3", 0) == 3.0);
}

TEST_CASE("variables and aliases") {
    CHECK(eval3("x + 2*y + 3*z", 1, 10, 100) == 321.0);
    CHECK(eval3("x1 + 2*x2 + 3*x3", 1, 10, 100) == 321.0);
    CHECK(eval1("t*t", 7) == 49.0);  // t aliases x1

    CHECK(parse_expression("x*x").min_dimension() == 1);
    CHECK(parse_expression("y").min_dimension() == 2);
    CHECK(parse_expression("x1*y + z^2").min_dimension() == 3);
    CHECK(parse_expression("3.5").min_dimension() == 0);
}

TEST_CASE("functions") {
    CHECK(eval1("abs(0-3)", 0) == 3.0);
    CHECK(eval1("sign(0)", 0) == 0.0);
    CHECK(eval1("sign(-2.5)", 0) == -1.0);
    CHECK(eval1("sign(0.001)", 0) == 1.0);
    CHECK(eval1("cbrt(-8)", 0) == -2.0);  // real odd cube root
    CHECK(eval1("cbrt(27)", 0) == doctest::Approx(3.0));
    CHECK(eval1("min(2, -1)", 0) == -1.0);
    CHECK(eval1("max(2, -1)", 0) == 2.0);
    CHECK(eval1("sqrt(2)", 0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(eval1("pow(2, 0.5)", 0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(eval1("abs(x)^1.5", -4) == 8.0);
}

TEST_CASE("evaluation throws on domain errors, never returns NaN") {
    CHECK_THROWS_AS(eval1("1/0", 0), EvalError);
    CHECK_THROWS_AS(eval1("1/x", 0), EvalError);
    CHECK_THROWS_AS(eval1("sqrt(0-1)", 0), EvalError);
    CHECK_THROWS_AS(eval1("(0-1)^0.5", 0), EvalError);
    CHECK_THROWS_AS(eval1("pow(-1, 0.5)", 0), EvalError);
    CHECK_THROWS_AS(eval1("10^9^9", 0), EvalError);  // overflow is a domain error
}

TEST_CASE("parse errors carry the source offset") {
    try {
        parse_expression("1+");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.pos == 2);
    }
    try {
        parse_expression("(1+2");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.pos == 4);
    }
    CHECK_THROWS_AS(parse_expression("foo(1)"), ParseError);
    CHECK_THROWS_AS(parse_expression("abs(1, 2)"), ParseError);  // arity
    CHECK_THROWS_AS(parse_expression("min(1)"), ParseError);
    CHECK_THROWS_AS(parse_expression("x9"), ParseError);  // beyond capacity
    CHECK_THROWS_AS(parse_expression(""), ParseError);
    CHECK_THROWS_AS(parse_expression("2 3"), ParseError);  // no implicit product
}

TEST_CASE("print round-trips structurally") {
    const char* sources[] = {
        "x^2 + y^2 - 1",
        "abs(x)^1.5",
        "-x * (y - 2)^3 / (z + 1)",
        "min(max(x, y), sign(z))",
        "2^3^x",
        "1 - 2 - 3",
        "x/(y/z)",
        "-(x + y)",
        "cbrt(x)*sqrt(abs(y))",
        "pow(x, 2) - pow(y, 0.5)",
    };
    for (const char* src : sources) {
        CAPTURE(src);
        ExpressionAst a = parse_expression(src);
        ExpressionAst b = parse_expression(a.print());
        CHECK(struct_equal(a, b));
        // And printing is a fixed point after one round.
        CHECK(b.print() == a.print());
    }
}

TEST_CASE("struct_equal ignores spans and spacing") {
    CHECK(struct_equal(parse_expression("x+1"), parse_expression("  x + 1  ")));
    CHECK_FALSE(struct_equal(parse_expression("x+1"), parse_expression("1+x")));
    CHECK_FALSE(struct_equal(parse_expression("x+1"), parse_expression("x+2")));
}

}  // TEST_SUITE
