#include "medialkit/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace medialkit {

namespace {

struct FuncInfo {
    const char* name;
    Func func;
    int arity;
};

constexpr FuncInfo kFuncs[] = {
    {"abs", Func::Abs, 1},  {"sqrt", Func::Sqrt, 1}, {"cbrt", Func::Cbrt, 1},
    {"sign", Func::Sign, 1}, {"min", Func::Min, 2},  {"max", Func::Max, 2},
    {"pow", Func::Pow, 2},
};

const FuncInfo* find_func(const std::string& name) {
    for (const auto& f : kFuncs)
        if (name == f.name) return &f;
    return nullptr;
}

class Parser {
public:
    explicit Parser(const std::string& src) : src_(src) {}

    ExpressionAst run() {
        ExpressionAst ast;
        ast.source = src_;
        root_ = &ast;
        int r = parse_expr();
        skip_ws();
        if (pos_ != src_.size()) throw ParseError("unexpected trailing input", pos_);
        (void)r;
        return ast;
    }

private:
    const std::string& src_;
    std::size_t pos_ = 0;
    ExpressionAst* root_ = nullptr;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    bool at_end() {
        skip_ws();
        return pos_ >= src_.size();
    }
    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c, const char* what) {
        if (!accept(c)) throw ParseError(std::string("expected '") + c + "' " + what, pos_);
    }

    int add_node(ExprNode n) {
        root_->nodes.push_back(n);
        return static_cast<int>(root_->nodes.size()) - 1;
    }
    Span node_span(int i) const { return root_->nodes[static_cast<std::size_t>(i)].span; }

    int parse_expr() {
        int lhs = parse_term();
        for (;;) {
            skip_ws();
            char c = peek();
            if (c != '+' && c != '-') break;
            ++pos_;
            int rhs = parse_term();
            ExprNode n;
            n.kind = NodeKind::Binary;
            n.op = (c == '+') ? BinOp::Add : BinOp::Sub;
            n.a = lhs;
            n.b = rhs;
            n.span = {node_span(lhs).begin, node_span(rhs).end};
            lhs = add_node(n);
        }
        return lhs;
    }

    int parse_term() {
        int lhs = parse_factor();
        for (;;) {
            char c = peek();
            if (c != '*' && c != '/') break;
            ++pos_;
            int rhs = parse_factor();
            ExprNode n;
            n.kind = NodeKind::Binary;
            n.op = (c == '*') ? BinOp::Mul : BinOp::Div;
            n.a = lhs;
            n.b = rhs;
            n.span = {node_span(lhs).begin, node_span(rhs).end};
            lhs = add_node(n);
        }
        return lhs;
    }

    int parse_factor() {
        int base = parse_atom();
        if (peek() == '^') {
            ++pos_;
            int exp = parse_factor();  // right-associative
            ExprNode n;
            n.kind = NodeKind::Binary;
            n.op = BinOp::Pow;
            n.a = base;
            n.b = exp;
            n.span = {node_span(base).begin, node_span(exp).end};
            base = add_node(n);
        }
        return base;
    }

    int parse_atom() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
        std::size_t start = pos_;
        char c = src_[pos_];
        if (c == '-') {
            ++pos_;
            int child = parse_atom();
            ExprNode n;
            n.kind = NodeKind::Negate;
            n.a = child;
            n.span = {start, node_span(child).end};
            return add_node(n);
        }
        if (c == '(') {
            ++pos_;
            int inner = parse_expr();
            expect(')', "to close group");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    int parse_number() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    ++pos_;
            } else {
                pos_ = mark;  // 'e' belongs to a following identifier, not this number
            }
        }
        std::string text = src_.substr(start, pos_ - start);
        if (text == ".") throw ParseError("malformed number", start);
        char* endp = nullptr;
        double v = std::strtod(text.c_str(), &endp);
        if (endp == text.c_str() || *endp != '\0') throw ParseError("malformed number", start);
        ExprNode n;
        n.kind = NodeKind::Constant;
        n.value = v;
        n.span = {start, pos_};
        return add_node(n);
    }

    int parse_ident() {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        std::string name = src_.substr(start, pos_ - start);
        if (const FuncInfo* f = find_func(name)) {
            skip_ws();
            if (pos_ >= src_.size() || src_[pos_] != '(')
                throw ParseError("function '" + name + "' requires an argument list", pos_);
            ++pos_;
            std::vector<int> args;
            args.push_back(parse_expr());
            while (accept(',')) args.push_back(parse_expr());
            expect(')', "to close argument list");
            if (static_cast<int>(args.size()) != f->arity)
                throw ParseError("function '" + name + "' expects " + std::to_string(f->arity) +
                                     " argument(s), got " + std::to_string(args.size()),
                                 start);
            ExprNode n;
            n.kind = NodeKind::Call;
            n.func = f->func;
            n.a = args[0];
            n.b = args.size() > 1 ? args[1] : -1;
            n.span = {start, pos_};
            return add_node(n);
        }
        std::size_t index = 0;
        bool known = false;
        if (name == "x" || name == "t" || name == "x1") {
            index = 0;
            known = true;
        } else if (name == "y" || name == "x2") {
            index = 1;
            known = true;
        } else if (name == "z" || name == "x3") {
            index = 2;
            known = true;
        } else if (name.size() >= 2 && name[0] == 'x') {
            bool digits = true;
            for (std::size_t i = 1; i < name.size(); ++i)
                if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
            if (digits) {
                long k = std::strtol(name.c_str() + 1, nullptr, 10);
                if (k >= 1 && k <= static_cast<long>(Vec::kMaxDim)) {
                    index = static_cast<std::size_t>(k - 1);
                    known = true;
                }
            }
        }
        if (!known) throw ParseError("unknown identifier '" + name + "'", start);
        ExprNode n;
        n.kind = NodeKind::Variable;
        n.var_index = index;
        n.span = {start, pos_};
        return add_node(n);
    }
};

double apply_call(const ExprNode& n, double a, double b) {
    switch (n.func) {
        case Func::Abs: return std::fabs(a);
        case Func::Sqrt:
            if (a < 0) throw EvalError("sqrt of a negative value", n.span);
            return std::sqrt(a);
        case Func::Cbrt: return std::cbrt(a);
        case Func::Sign: return a > 0 ? 1.0 : (a < 0 ? -1.0 : 0.0);
        case Func::Min: return std::fmin(a, b);
        case Func::Max: return std::fmax(a, b);
        case Func::Pow: {
            double r = std::pow(a, b);
            if (!std::isfinite(r)) throw EvalError("pow out of domain", n.span);
            return r;
        }
    }
    throw EvalError("unknown function", n.span);
}

int precedence(const ExprNode& n) {
    if (n.kind == NodeKind::Binary) {
        switch (n.op) {
            case BinOp::Add:
            case BinOp::Sub: return 1;
            case BinOp::Mul:
            case BinOp::Div: return 2;
            case BinOp::Pow: return 4;
        }
    }
    if (n.kind == NodeKind::Negate) return 3;
    return 5;  // atoms
}

void print_node(const ExpressionAst& ast, int idx, std::string& out);

// Wraps the child in parens when its top-level construct binds looser than
// the context requires.
void print_child(const ExpressionAst& ast, int idx, int min_prec, std::string& out) {
    const ExprNode& n = ast.nodes[static_cast<std::size_t>(idx)];
    if (precedence(n) < min_prec) {
        out += '(';
        print_node(ast, idx, out);
        out += ')';
    } else {
        print_node(ast, idx, out);
    }
}

void print_node(const ExpressionAst& ast, int idx, std::string& out) {
    const ExprNode& n = ast.nodes[static_cast<std::size_t>(idx)];
    switch (n.kind) {
        case NodeKind::Constant: {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", n.value);
            if (n.value < 0) {
                // A negative literal re-parses as Negate(Constant); keep the
                // printed form structurally faithful.
                out += "(";
                out += buf;
                out += ")";
            } else {
                out += buf;
            }
            break;
        }
        case NodeKind::Variable:
            out += "x" + std::to_string(n.var_index + 1);
            break;
        case NodeKind::Negate:
            out += '-';
            print_child(ast, n.a, 5, out);  // grammar: '-' applies to an atom
            break;
        case NodeKind::Binary: {
            const char* sym = nullptr;
            switch (n.op) {
                case BinOp::Add: sym = "+"; break;
                case BinOp::Sub: sym = "-"; break;
                case BinOp::Mul: sym = "*"; break;
                case BinOp::Div: sym = "/"; break;
                case BinOp::Pow: sym = "^"; break;
            }
            int p = precedence(n);
            if (n.op == BinOp::Pow) {
                // Left operand of ^ must be an atom; right is a factor.
                print_child(ast, n.a, 5, out);
                out += sym;
                print_child(ast, n.b, 4, out);
            } else {
                print_child(ast, n.a, p, out);
                out += sym;
                // - and / are left-associative: the right operand needs a
                // strictly tighter construct.
                print_child(ast, n.b, (n.op == BinOp::Sub || n.op == BinOp::Div) ? p + 1 : p, out);
            }
            break;
        }
        case NodeKind::Call: {
            const char* name = nullptr;
            for (const auto& f : kFuncs)
                if (f.func == n.func) name = f.name;
            out += name;
            out += '(';
            print_node(ast, n.a, out);
            if (n.b >= 0) {
                out += ',';
                print_node(ast, n.b, out);
            }
            out += ')';
            break;
        }
    }
}

bool node_equal(const ExpressionAst& x, int i, const ExpressionAst& y, int j) {
    const ExprNode& a = x.nodes[static_cast<std::size_t>(i)];
    const ExprNode& b = y.nodes[static_cast<std::size_t>(j)];
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case NodeKind::Constant: return a.value == b.value;
        case NodeKind::Variable: return a.var_index == b.var_index;
        case NodeKind::Negate: return node_equal(x, a.a, y, b.a);
        case NodeKind::Binary:
            return a.op == b.op && node_equal(x, a.a, y, b.a) && node_equal(x, a.b, y, b.b);
        case NodeKind::Call:
            if (a.func != b.func) return false;
            if (!node_equal(x, a.a, y, b.a)) return false;
            if ((a.b >= 0) != (b.b >= 0)) return false;
            return a.b < 0 || node_equal(x, a.b, y, b.b);
    }
    return false;
}

}  // namespace

std::size_t ExpressionAst::min_dimension() const {
    std::size_t d = 0;
    for (const auto& n : nodes)
        if (n.kind == NodeKind::Variable) d = std::max(d, n.var_index + 1);
    return d;
}

double ExpressionAst::evaluate(const Vec& point) const {
    if (nodes.empty()) throw std::invalid_argument("evaluate: empty expression");
    if (min_dimension() > point.size())
        throw std::invalid_argument("evaluate: point dimension below variable index");
    double stack_vals[128];
    std::vector<double> heap_vals;
    double* vals = stack_vals;
    if (nodes.size() > 128) {
        heap_vals.resize(nodes.size());
        vals = heap_vals.data();
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const ExprNode& n = nodes[i];
        double r = 0;
        switch (n.kind) {
            case NodeKind::Constant: r = n.value; break;
            case NodeKind::Variable: r = point[n.var_index]; break;
            case NodeKind::Negate: r = -vals[n.a]; break;
            case NodeKind::Binary: {
                double a = vals[n.a], b = vals[n.b];
                switch (n.op) {
                    case BinOp::Add: r = a + b; break;
                    case BinOp::Sub: r = a - b; break;
                    case BinOp::Mul: r = a * b; break;
                    case BinOp::Div:
                        if (b == 0) throw EvalError("division by zero", n.span);
                        r = a / b;
                        break;
                    case BinOp::Pow:
                        r = std::pow(a, b);
                        if (!std::isfinite(r)) throw EvalError("pow out of domain", n.span);
                        break;
                }
                break;
            }
            case NodeKind::Call: r = apply_call(n, vals[n.a], n.b >= 0 ? vals[n.b] : 0.0); break;
        }
        if (!std::isfinite(r)) throw EvalError("non-finite result", n.span);
        vals[i] = r;
    }
    return vals[nodes.size() - 1];
}

std::string ExpressionAst::print() const {
    if (nodes.empty()) return "";
    std::string out;
    print_node(*this, static_cast<int>(nodes.size()) - 1, out);
    return out;
}

ExpressionAst parse_expression(const std::string& source) {
    Parser p(source);
    return p.run();
}

bool struct_equal(const ExpressionAst& a, const ExpressionAst& b) {
    if (a.nodes.empty() || b.nodes.empty()) return a.nodes.empty() == b.nodes.empty();
    return node_equal(a, static_cast<int>(a.nodes.size()) - 1, b,
                      static_cast<int>(b.nodes.size()) - 1);
}

}  // namespace medialkit
