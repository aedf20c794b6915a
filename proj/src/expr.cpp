#include "holofourier/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace hf {

namespace {

struct Token {
    enum class Type { Number, Ident, Op, End };
    Type type;
    double num = 0;
    std::string text;
    char op = 0;
    std::size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
        tok_ = Token{};
        tok_.pos = i_;
        if (i_ >= src_.size()) {
            tok_.type = Token::Type::End;
            return;
        }
        char c = src_[i_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = src_.c_str() + i_;
            char* end = nullptr;
            tok_.num = std::strtod(begin, &end);
            tok_.type = Token::Type::Number;
            i_ += static_cast<std::size_t>(end - begin);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i_;
            while (j < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[j])))) ++j;
            tok_.type = Token::Type::Ident;
            tok_.text = src_.substr(i_, j - i_);
            i_ = j;
            return;
        }
        if (std::string("+-*/^(),").find(c) != std::string::npos) {
            tok_.type = Token::Type::Op;
            tok_.op = c;
            ++i_;
            return;
        }
        throw input_error("parse error at position " + std::to_string(i_) +
                          ": unexpected character '" + std::string(1, c) + "'");
    }

    const std::string& src_;
    std::size_t i_ = 0;
    Token tok_;
};

[[noreturn]] void fail(std::size_t pos, const std::string& msg) {
    throw input_error("parse error at position " + std::to_string(pos) + ": " + msg);
}

class Parser {
public:
    Parser(const std::string& src, const GroupSpec& spec) : lex_(src), spec_(spec) {}

    ExprPtr parse_all() {
        ExprPtr e = parse_expr();
        if (lex_.peek().type != Token::Type::End)
            fail(lex_.peek().pos, "unexpected trailing input");
        return e;
    }

private:
    static ExprPtr node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

    ExprPtr parse_expr() {
        ExprPtr e = parse_term();
        while (lex_.peek().type == Token::Type::Op &&
               (lex_.peek().op == '+' || lex_.peek().op == '-')) {
            Token t = lex_.take();
            ExprPtr rhs = parse_term();
            ExprNode n;
            n.kind = t.op == '+' ? ExprNode::Kind::Add : ExprNode::Kind::Sub;
            n.a = e;
            n.b = rhs;
            n.pos = t.pos;
            e = node(std::move(n));
        }
        return e;
    }

    ExprPtr parse_term() {
        ExprPtr e = parse_unary();
        while (lex_.peek().type == Token::Type::Op &&
               (lex_.peek().op == '*' || lex_.peek().op == '/')) {
            Token t = lex_.take();
            ExprPtr rhs = parse_unary();
            if (t.op == '/' && !nonvanishing(rhs))
                fail(t.pos, "divisor is not provably nonvanishing on G");
            ExprNode n;
            n.kind = t.op == '*' ? ExprNode::Kind::Mul : ExprNode::Kind::Div;
            n.a = e;
            n.b = rhs;
            n.pos = t.pos;
            e = node(std::move(n));
        }
        return e;
    }

    ExprPtr parse_unary() {
        if (lex_.peek().type == Token::Type::Op && lex_.peek().op == '-') {
            Token t = lex_.take();
            ExprPtr child = parse_unary();
            ExprNode n;
            n.kind = ExprNode::Kind::Neg;
            n.a = child;
            n.pos = t.pos;
            return node(std::move(n));
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_base();
        if (lex_.peek().type == Token::Type::Op && lex_.peek().op == '^') {
            Token caret = lex_.take();
            int sign = 1;
            if (lex_.peek().type == Token::Type::Op && lex_.peek().op == '-') {
                lex_.take();
                sign = -1;
            }
            Token t = lex_.take();
            if (t.type != Token::Type::Number || t.num != std::floor(t.num))
                fail(t.pos, "exponent must be an integer");
            int e = sign * static_cast<int>(t.num);
            if (e < 0 && !nonvanishing(base))
                fail(caret.pos, "negative power of a base not provably nonvanishing on G");
            if (lex_.peek().type == Token::Type::Op && lex_.peek().op == '^')
                fail(lex_.peek().pos, "'^' does not associate; parenthesize");
            ExprNode n;
            n.kind = ExprNode::Kind::Pow;
            n.a = base;
            n.exponent = e;
            n.pos = caret.pos;
            return node(std::move(n));
        }
        return base;
    }

    ExprPtr parse_base() {
        Token t = lex_.take();
        if (t.type == Token::Type::Number) {
            ExprNode n;
            n.kind = ExprNode::Kind::Literal;
            n.lit = cplx(t.num, 0.0);
            n.pos = t.pos;
            return node(std::move(n));
        }
        if (t.type == Token::Type::Op && t.op == '(') {
            // Either a complex literal "(re, im)" or a parenthesized expr.
            if (auto lit = try_complex_literal(t.pos)) return lit;
            ExprPtr e = parse_expr();
            expect_op(')');
            return e;
        }
        if (t.type == Token::Type::Ident) {
            if (t.text == "exp") {
                expect_op('(');
                ExprPtr arg = parse_expr();
                expect_op(')');
                ExprNode n;
                n.kind = ExprNode::Kind::Exp;
                n.a = arg;
                n.pos = t.pos;
                return node(std::move(n));
            }
            return parse_var(t);
        }
        fail(t.pos, "expected a value");
    }

    ExprPtr try_complex_literal(std::size_t open_pos) {
        // Lookahead: sign? number ',' sign? number ')'. The lexer has no
        // rewind, so probe via a fresh parse of the remaining text instead:
        // cheapest is to peek the token stream shape step by step.
        if (lex_.peek().type != Token::Type::Number &&
            !(lex_.peek().type == Token::Type::Op && lex_.peek().op == '-'))
            return nullptr;
        // Save state by copying the lexer is not possible; emulate instead:
        // a number followed by ',' can only be a complex literal, because
        // "(<number> ," is not valid grammar otherwise.
        bool neg_re = false;
        if (lex_.peek().type == Token::Type::Op && lex_.peek().op == '-') {
            // Could be "-x" expression; only treat as literal when the next
            // token after the number is ','. Peek depth 2 is not available,
            // so parse as expression in that case and let ',' error out --
            // instead, accept the simpler rule: a leading '-' inside '('
            // starts an expression unless followed by number-and-comma.
            return nullptr;
        }
        Token num = lex_.take();
        if (lex_.peek().type == Token::Type::Op && lex_.peek().op == ',') {
            lex_.take();
            double im_sign = 1.0;
            if (lex_.peek().type == Token::Type::Op &&
                (lex_.peek().op == '-' || lex_.peek().op == '+')) {
                if (lex_.take().op == '-') im_sign = -1.0;
            }
            Token imt = lex_.take();
            if (imt.type != Token::Type::Number) fail(imt.pos, "expected imaginary part");
            expect_op(')');
            ExprNode n;
            n.kind = ExprNode::Kind::Literal;
            n.lit = cplx(num.num, im_sign * imt.num);
            n.pos = open_pos;
            return node(std::move(n));
        }
        // Plain parenthesized expression starting with a number: continue
        // the expression grammar with the number already consumed.
        ExprNode lit;
        lit.kind = ExprNode::Kind::Literal;
        lit.lit = cplx(num.num, 0.0);
        lit.pos = num.pos;
        ExprPtr e = continue_expr(node(std::move(lit)));
        expect_op(')');
        return e;
    }

    /// Continues expr parsing when the first base has already been read.
    ExprPtr continue_expr(ExprPtr first) {
        ExprPtr e = continue_term(first);
        while (lex_.peek().type == Token::Type::Op &&
               (lex_.peek().op == '+' || lex_.peek().op == '-')) {
            Token t = lex_.take();
            ExprPtr rhs = parse_term();
            ExprNode n;
            n.kind = t.op == '+' ? ExprNode::Kind::Add : ExprNode::Kind::Sub;
            n.a = e;
            n.b = rhs;
            n.pos = t.pos;
            e = node(std::move(n));
        }
        return e;
    }

    ExprPtr continue_term(ExprPtr first) {
        ExprPtr e = continue_power(first);
        while (lex_.peek().type == Token::Type::Op &&
               (lex_.peek().op == '*' || lex_.peek().op == '/')) {
            Token t = lex_.take();
            ExprPtr rhs = parse_unary();
            if (t.op == '/' && !nonvanishing(rhs))
                fail(t.pos, "divisor is not provably nonvanishing on G");
            ExprNode n;
            n.kind = t.op == '*' ? ExprNode::Kind::Mul : ExprNode::Kind::Div;
            n.a = e;
            n.b = rhs;
            n.pos = t.pos;
            e = node(std::move(n));
        }
        return e;
    }

    ExprPtr continue_power(ExprPtr base) {
        if (lex_.peek().type == Token::Type::Op && lex_.peek().op == '^') {
            Token caret = lex_.take();
            int sign = 1;
            if (lex_.peek().type == Token::Type::Op && lex_.peek().op == '-') {
                lex_.take();
                sign = -1;
            }
            Token t = lex_.take();
            if (t.type != Token::Type::Number || t.num != std::floor(t.num))
                fail(t.pos, "exponent must be an integer");
            int e = sign * static_cast<int>(t.num);
            if (e < 0 && !nonvanishing(base))
                fail(caret.pos, "negative power of a base not provably nonvanishing on G");
            if (lex_.peek().type == Token::Type::Op && lex_.peek().op == '^')
                fail(lex_.peek().pos, "'^' does not associate; parenthesize");
            ExprNode n;
            n.kind = ExprNode::Kind::Pow;
            n.a = base;
            n.exponent = e;
            n.pos = caret.pos;
            return node(std::move(n));
        }
        return base;
    }

    ExprPtr parse_var(const Token& t) {
        const std::string& s = t.text;
        std::size_t split = 0;
        while (split < s.size() && std::isalpha(static_cast<unsigned char>(s[split]))) ++split;
        std::string name = s.substr(0, split);
        std::string idx = s.substr(split);
        if (idx.empty()) fail(t.pos, "unknown identifier '" + s + "' (missing factor index?)");
        int factor = std::atoi(idx.c_str()) - 1;
        if (factor < 0 || static_cast<std::size_t>(factor) >= spec_.n_factors())
            fail(t.pos, "factor index out of range in '" + s + "'");
        FactorKind kind = spec_.factors()[static_cast<std::size_t>(factor)];
        ExprNode n;
        n.pos = t.pos;
        n.factor = factor;
        if (name == "det" || name == "tr") {
            if (kind != FactorKind::SL2) fail(t.pos, "'" + name + "' applies to SL2 factors only");
            n.kind = name == "det" ? ExprNode::Kind::Det : ExprNode::Kind::Tr;
            return node(std::move(n));
        }
        if (name.size() == 1 && std::string("zabcd").find(name[0]) != std::string::npos) {
            char v = name[0];
            if (v == 'z' && kind != FactorKind::Torus)
                fail(t.pos, "variable 'z' applies to torus factors only");
            if (v != 'z' && kind != FactorKind::SL2)
                fail(t.pos, std::string("variable '") + v + "' applies to SL2 factors only");
            n.kind = ExprNode::Kind::Var;
            n.var = v;
            return node(std::move(n));
        }
        fail(t.pos, "unknown identifier '" + s + "'");
    }

    void expect_op(char c) {
        Token t = lex_.take();
        if (t.type != Token::Type::Op || t.op != c)
            fail(t.pos, std::string("expected '") + c + "'");
    }

    static bool nonvanishing(const ExprPtr& e) {
        switch (e->kind) {
            case ExprNode::Kind::Literal:
                return std::abs(e->lit) != 0.0;
            case ExprNode::Kind::Var:
                return e->var == 'z';
            case ExprNode::Kind::Det:
                return true;
            case ExprNode::Kind::Neg:
                return nonvanishing(e->a);
            case ExprNode::Kind::Mul:
                return nonvanishing(e->a) && nonvanishing(e->b);
            case ExprNode::Kind::Div:
                return nonvanishing(e->a) && nonvanishing(e->b);
            case ExprNode::Kind::Pow:
                return nonvanishing(e->a);
            default:
                return false;
        }
    }

    Lexer lex_;
    const GroupSpec& spec_;
};

cplx pow_int_c(cplx z, int n) {
    if (n < 0) {
        z = 1.0 / z;
        n = -n;
    }
    cplx r(1.0, 0.0);
    while (n > 0) {
        if (n & 1) r *= z;
        z *= z;
        n >>= 1;
    }
    return r;
}

cplx eval_node(const ExprNode& n, const GroupElement& g) {
    switch (n.kind) {
        case ExprNode::Kind::Literal:
            return n.lit;
        case ExprNode::Kind::Var: {
            std::size_t f = static_cast<std::size_t>(n.factor);
            if (n.var == 'z') return g.z(f);
            const Mat2& m = g.m(f);
            switch (n.var) {
                case 'a': return m(0, 0);
                case 'b': return m(0, 1);
                case 'c': return m(1, 0);
                default: return m(1, 1);
            }
        }
        case ExprNode::Kind::Neg:
            return -eval_node(*n.a, g);
        case ExprNode::Kind::Add:
            return eval_node(*n.a, g) + eval_node(*n.b, g);
        case ExprNode::Kind::Sub:
            return eval_node(*n.a, g) - eval_node(*n.b, g);
        case ExprNode::Kind::Mul:
            return eval_node(*n.a, g) * eval_node(*n.b, g);
        case ExprNode::Kind::Div:
            return eval_node(*n.a, g) / eval_node(*n.b, g);
        case ExprNode::Kind::Pow:
            return pow_int_c(eval_node(*n.a, g), n.exponent);
        case ExprNode::Kind::Exp: {
            cplx v = std::exp(eval_node(*n.a, g));
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw numeric_error("expression overflow in 'exp' at position " +
                                    std::to_string(n.pos));
            return v;
        }
        case ExprNode::Kind::Det:
            return g.m(static_cast<std::size_t>(n.factor)).determinant();
        case ExprNode::Kind::Tr:
            return g.m(static_cast<std::size_t>(n.factor)).trace();
    }
    throw numeric_error("corrupt expression tree");
}

void print_node(const ExprNode& n, std::ostream& os) {
    switch (n.kind) {
        case ExprNode::Kind::Literal:
            if (n.lit.imag() == 0.0) {
                os << n.lit.real();
            } else {
                os << '(' << n.lit.real() << ',' << n.lit.imag() << ')';
            }
            return;
        case ExprNode::Kind::Var:
            os << n.var << (n.factor + 1);
            return;
        case ExprNode::Kind::Neg:
            os << "(-";
            print_node(*n.a, os);
            os << ')';
            return;
        case ExprNode::Kind::Add:
        case ExprNode::Kind::Sub:
        case ExprNode::Kind::Mul:
        case ExprNode::Kind::Div: {
            char op = n.kind == ExprNode::Kind::Add   ? '+'
                      : n.kind == ExprNode::Kind::Sub ? '-'
                      : n.kind == ExprNode::Kind::Mul ? '*'
                                                      : '/';
            os << '(';
            print_node(*n.a, os);
            os << op;
            print_node(*n.b, os);
            os << ')';
            return;
        }
        case ExprNode::Kind::Pow:
            os << '(';
            print_node(*n.a, os);
            os << '^' << n.exponent << ')';
            return;
        case ExprNode::Kind::Exp:
            os << "exp(";
            print_node(*n.a, os);
            os << ')';
            return;
        case ExprNode::Kind::Det:
            os << "det" << (n.factor + 1);
            return;
        case ExprNode::Kind::Tr:
            os << "tr" << (n.factor + 1);
            return;
    }
}

double logaddexp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    double m = a > b ? a : b;
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

double bound_node(const ExprNode& n, const GroupElement& g);

/// Exact log-magnitude for the nonvanishing class (products of powers).
double exact_log_abs(const ExprNode& n, const GroupElement& g) {
    switch (n.kind) {
        case ExprNode::Kind::Literal:
            return std::log(std::abs(n.lit));
        case ExprNode::Kind::Var:
            if (n.var == 'z') return std::log(std::abs(g.z(static_cast<std::size_t>(n.factor))));
            break;
        case ExprNode::Kind::Det:
            return 0.0;
        case ExprNode::Kind::Neg:
            return exact_log_abs(*n.a, g);
        case ExprNode::Kind::Mul:
            return exact_log_abs(*n.a, g) + exact_log_abs(*n.b, g);
        case ExprNode::Kind::Div:
            return exact_log_abs(*n.a, g) - exact_log_abs(*n.b, g);
        case ExprNode::Kind::Pow:
            return n.exponent * exact_log_abs(*n.a, g);
        default:
            break;
    }
    return bound_node(n, g);
}

double bound_node(const ExprNode& n, const GroupElement& g) {
    switch (n.kind) {
        case ExprNode::Kind::Literal:
            return std::log(std::abs(n.lit));
        case ExprNode::Kind::Var: {
            cplx v = eval_node(n, g);
            return std::log(std::abs(v));
        }
        case ExprNode::Kind::Neg:
            return bound_node(*n.a, g);
        case ExprNode::Kind::Add:
        case ExprNode::Kind::Sub:
            return logaddexp(bound_node(*n.a, g), bound_node(*n.b, g));
        case ExprNode::Kind::Mul:
            return bound_node(*n.a, g) + bound_node(*n.b, g);
        case ExprNode::Kind::Div:
            return bound_node(*n.a, g) - exact_log_abs(*n.b, g);
        case ExprNode::Kind::Pow: {
            double base = n.exponent >= 0 ? bound_node(*n.a, g) : exact_log_abs(*n.a, g);
            return n.exponent * base;
        }
        case ExprNode::Kind::Exp: {
            cplx w = eval_node(*n.a, g);
            if (!std::isfinite(w.real())) return std::numeric_limits<double>::infinity();
            return w.real();
        }
        case ExprNode::Kind::Det:
            return 0.0;
        case ExprNode::Kind::Tr: {
            cplx v = eval_node(n, g);
            return std::log(std::abs(v) + 1e-300);
        }
    }
    return std::numeric_limits<double>::infinity();
}

}  // namespace

ExprAst parse(const std::string& src, const GroupSpec& spec) {
    Parser p(src, spec);
    ExprAst ast;
    ast.root = p.parse_all();
    ast.spec = spec;
    ast.source = src;
    return ast;
}

cplx eval(const ExprAst& ast, const GroupElement& g) {
    if (g.spec != ast.spec) throw input_error("eval: element does not match expression spec");
    cplx v = eval_node(*ast.root, g);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw numeric_error("expression evaluated to a non-finite value: " + ast.source);
    return v;
}

std::string to_string(const ExprAst& ast) {
    std::ostringstream os;
    os.precision(17);
    print_node(*ast.root, os);
    return os.str();
}

double log_abs_bound(const ExprAst& ast, const GroupElement& g) {
    return bound_node(*ast.root, g);
}

HoloFn holo_from_ast(ExprAst ast) {
    auto shared = std::make_shared<const ExprAst>(std::move(ast));
    HoloFn f;
    f.ast = shared;
    f.name = shared->source;
    f.fn = [shared](const GroupElement& g) { return eval(*shared, g); };
    return f;
}

HoloFn holo_from_fn(std::function<cplx(const GroupElement&)> fn, std::string name) {
    HoloFn f;
    f.fn = std::move(fn);
    f.name = std::move(name);
    return f;
}

double holo_log_abs_bound(const HoloFn& f, const GroupElement& g) {
    if (f.ast) return log_abs_bound(*f.ast, g);
    cplx v = f.fn(g);
    double a = std::abs(v);
    return a > 0 ? std::log(a) : -std::numeric_limits<double>::infinity();
}

}  // namespace hf
