#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "medialkit/vec.hpp"

namespace medialkit {

// Arithmetic expression AST over variables x1..x8 (aliases: x,y,z -> x1,x2,x3
// and t -> x1). Grammar (no implicit multiplication, ^ right-associative):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' factor)?
//   atom   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')' | '-' atom
// Functions: abs, sqrt, cbrt, sign, min, max, pow. sign(0) = 0; cbrt is the
// real odd cube root. Evaluation throws EvalError on any domain error
// (division by zero, sqrt of a negative, non-finite result); it never returns
// NaN silently.

struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;
};

enum class NodeKind { Constant, Variable, Binary, Negate, Call };
enum class BinOp { Add, Sub, Mul, Div, Pow };
enum class Func { Abs, Sqrt, Cbrt, Sign, Min, Max, Pow };

struct ExprNode {
    NodeKind kind = NodeKind::Constant;
    double value = 0.0;        // Constant
    std::size_t var_index = 0; // Variable, 0-based
    BinOp op = BinOp::Add;     // Binary
    Func func = Func::Abs;     // Call
    int a = -1;                // first child index
    int b = -1;                // second child index
    Span span;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t position)
        : std::runtime_error(msg + " at offset " + std::to_string(position)), pos(position) {}
    std::size_t pos;
};

class EvalError : public std::runtime_error {
public:
    EvalError(const std::string& msg, Span where)
        : std::runtime_error(msg + " at offsets [" + std::to_string(where.begin) + "," +
                             std::to_string(where.end) + ")"),
          span(where) {}
    Span span;
};

class ExpressionAst {
public:
    // Children precede parents; the root is the last node.
    std::vector<ExprNode> nodes;
    std::string source;

    // Minimum point dimension this expression requires.
    std::size_t min_dimension() const;

    double evaluate(const Vec& point) const;

    // Precedence-aware serialization; parse(print()) is structurally
    // identical to the original.
    std::string print() const;
};

ExpressionAst parse_expression(const std::string& source);

// Structural equality ignoring spans and source text.
bool struct_equal(const ExpressionAst& a, const ExpressionAst& b);

}  // namespace medialkit
