#include "fiskit/expr.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>

namespace fiskit {

namespace {

struct Token {
    enum class Kind { Number, Ident, Op, LParen, RParen, Comma, End } kind;
    std::string text;
    double number = 0.0;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }
    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace((unsigned char)text_[pos_])) bump();
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= text_.size()) {
            tok_.kind = Token::Kind::End;
            return;
        }
        char ch = text_[pos_];
        if (std::isdigit((unsigned char)ch) || ch == '.') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isdigit((unsigned char)text_[pos_]) || text_[pos_] == '.'))
                bump();
            if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
                std::size_t save_pos = pos_;
                int save_line = line_, save_col = col_;
                bump();
                if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) bump();
                if (pos_ < text_.size() && std::isdigit((unsigned char)text_[pos_])) {
                    while (pos_ < text_.size() && std::isdigit((unsigned char)text_[pos_])) bump();
                } else {
                    pos_ = save_pos;
                    line_ = save_line;
                    col_ = save_col;
                }
            }
            tok_.kind = Token::Kind::Number;
            tok_.text = text_.substr(start, pos_ - start);
            try {
                tok_.number = std::stod(tok_.text);
            } catch (...) {
                throw ParseError(tok_.line, tok_.col, "malformed number '" + tok_.text + "'");
            }
            return;
        }
        if (std::isalpha((unsigned char)ch) || ch == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum((unsigned char)text_[pos_]) || text_[pos_] == '_'))
                bump();
            tok_.kind = Token::Kind::Ident;
            tok_.text = text_.substr(start, pos_ - start);
            return;
        }
        switch (ch) {
            case '(': tok_.kind = Token::Kind::LParen; break;
            case ')': tok_.kind = Token::Kind::RParen; break;
            case ',': tok_.kind = Token::Kind::Comma; break;
            case '+': case '-': case '*': case '/': case '^':
                tok_.kind = Token::Kind::Op;
                break;
            default:
                throw ParseError(line_, col_, std::string("unexpected character '") + ch + "'");
        }
        tok_.text = std::string(1, ch);
        bump();
    }
    void bump() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

const char* kFunctions[] = {"sin", "cos", "exp", "log", "sqrt", "abs2"};

bool is_function(const std::string& s) {
    for (const char* f : kFunctions)
        if (s == f) return true;
    return false;
}

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) {}

    ExprPtr parse() {
        ExprPtr e = sum();
        const Token& t = lex_.peek();
        if (t.kind != Token::Kind::End)
            throw ParseError(t.line, t.col, "trailing input '" + t.text + "'");
        return e;
    }

private:
    ExprPtr sum() {
        ExprPtr e = product();
        while (lex_.peek().kind == Token::Kind::Op &&
               (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            Token t = lex_.take();
            e = binary(t.text[0], e, product(), t);
        }
        return e;
    }
    ExprPtr product() {
        ExprPtr e = unary();
        while (lex_.peek().kind == Token::Kind::Op &&
               (lex_.peek().text == "*" || lex_.peek().text == "/")) {
            Token t = lex_.take();
            e = binary(t.text[0], e, unary(), t);
        }
        return e;
    }
    ExprPtr unary() {
        if (lex_.peek().kind == Token::Kind::Op && lex_.peek().text == "-") {
            Token t = lex_.take();
            auto node = std::make_shared<Expr>();
            node->kind = Expr::Kind::Unary;
            node->op = '-';
            node->args = {unary()};
            node->line = t.line;
            node->col = t.col;
            return node;
        }
        return power();
    }
    ExprPtr power() {
        ExprPtr base = atom();
        if (lex_.peek().kind == Token::Kind::Op && lex_.peek().text == "^") {
            Token t = lex_.take();
            // right associative; unary minus admitted in the exponent
            return binary('^', base, unary(), t);
        }
        return base;
    }
    ExprPtr atom() {
        Token t = lex_.take();
        auto node = std::make_shared<Expr>();
        node->line = t.line;
        node->col = t.col;
        switch (t.kind) {
            case Token::Kind::Number:
                node->kind = Expr::Kind::Number;
                node->number = t.number;
                return node;
            case Token::Kind::Ident: {
                if (t.text == "i") {
                    node->kind = Expr::Kind::ImagUnit;
                    return node;
                }
                if (is_function(t.text)) {
                    Token open = lex_.take();
                    if (open.kind != Token::Kind::LParen)
                        throw ParseError(open.line, open.col, "expected '(' after " + t.text);
                    node->kind = Expr::Kind::Call;
                    node->name = t.text;
                    node->args.push_back(sum());
                    Token close = lex_.take();
                    if (close.kind != Token::Kind::RParen)
                        throw ParseError(close.line, close.col, "expected ')'");
                    return node;
                }
                node->kind = Expr::Kind::Ident;
                node->name = t.text;
                return node;
            }
            case Token::Kind::LParen: {
                ExprPtr inner = sum();
                Token close = lex_.take();
                if (close.kind != Token::Kind::RParen)
                    throw ParseError(close.line, close.col, "expected ')'");
                return inner;
            }
            default:
                throw ParseError(t.line, t.col, "unexpected token '" + t.text + "'");
        }
    }
    ExprPtr binary(char op, ExprPtr a, ExprPtr b, const Token& t) {
        auto node = std::make_shared<Expr>();
        node->kind = Expr::Kind::Binary;
        node->op = op;
        node->args = {std::move(a), std::move(b)};
        node->line = t.line;
        node->col = t.col;
        return node;
    }
    Lexer lex_;
};

cplx apply_call(const std::string& fn, cplx v, std::size_t point) {
    if (fn == "sin") return std::sin(v);
    if (fn == "cos") return std::cos(v);
    if (fn == "exp") return std::exp(v);
    if (fn == "abs2") return cplx(std::norm(v), 0.0);
    if (fn == "log") {
        if (std::abs(v) < 1e-300 ||
            (v.real() < 0.0 && std::abs(v.imag()) <= 1e-14 * std::abs(v)))
            throw DomainError(point, "log");
        return std::log(v);
    }
    if (fn == "sqrt") {
        if (v.real() < 0.0 && std::abs(v.imag()) <= 1e-14 * std::abs(v))
            throw DomainError(point, "sqrt");
        return std::sqrt(v);
    }
    throw Error("unknown function " + fn);
}

cplx int_pow(cplx base, long long e, std::size_t point) {
    if (e < 0) {
        if (std::abs(base) < 1e-300) throw DomainError(point, "negative power of zero");
        return 1.0 / int_pow(base, -e, point);
    }
    cplx acc = 1.0;
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

long long constant_integer(const ExprPtr& e, const std::map<std::string, double>& params) {
    cplx v = evaluate_constant(e, params);
    double r = v.real();
    long long n = std::llround(r);
    if (std::abs(v.imag()) > 1e-9 || std::abs(r - double(n)) > 1e-9)
        throw ParseError(e->line, e->col, "exponent must be a constant integer");
    return n;
}

} // namespace

ExprPtr parse_expr(const std::string& text) { return Parser(text).parse(); }

std::string print_expr(const ExprPtr& e) {
    char buf[64];
    switch (e->kind) {
        case Expr::Kind::Number:
            std::snprintf(buf, sizeof buf, "%.17g", e->number);
            return buf;
        case Expr::Kind::ImagUnit:
            return "i";
        case Expr::Kind::Ident:
            return e->name;
        case Expr::Kind::Unary:
            return "(-" + print_expr(e->args[0]) + ")";
        case Expr::Kind::Binary:
            return "(" + print_expr(e->args[0]) + " " + std::string(1, e->op) + " " +
                   print_expr(e->args[1]) + ")";
        case Expr::Kind::Call:
            return e->name + "(" + print_expr(e->args[0]) + ")";
    }
    return "";
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Expr::Kind::Number: return a->number == b->number;
        case Expr::Kind::ImagUnit: return true;
        case Expr::Kind::Ident: return a->name == b->name;
        case Expr::Kind::Unary: return expr_equal(a->args[0], b->args[0]);
        case Expr::Kind::Binary:
            return a->op == b->op && expr_equal(a->args[0], b->args[0]) &&
                   expr_equal(a->args[1], b->args[1]);
        case Expr::Kind::Call:
            return a->name == b->name && expr_equal(a->args[0], b->args[0]);
    }
    return false;
}

cplx evaluate_constant(const ExprPtr& e, const std::map<std::string, double>& params) {
    switch (e->kind) {
        case Expr::Kind::Number: return e->number;
        case Expr::Kind::ImagUnit: return cplx(0.0, 1.0);
        case Expr::Kind::Ident: {
            auto it = params.find(e->name);
            if (it == params.end())
                throw ParseError(e->line, e->col, "unknown identifier '" + e->name + "'");
            return it->second;
        }
        case Expr::Kind::Unary: return -evaluate_constant(e->args[0], params);
        case Expr::Kind::Binary: {
            cplx a = evaluate_constant(e->args[0], params);
            if (e->op == '^') return int_pow(a, constant_integer(e->args[1], params), 0);
            cplx b = evaluate_constant(e->args[1], params);
            switch (e->op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/':
                    if (std::abs(b) < 1e-300) throw DomainError(0, "division");
                    return a / b;
            }
            return 0.0;
        }
        case Expr::Kind::Call:
            return apply_call(e->name, evaluate_constant(e->args[0], params), 0);
    }
    return 0.0;
}

ScalarField evaluate(const ExprPtr& e, const ChartPtr& chart,
                     const std::map<std::string, double>& params) {
    switch (e->kind) {
        case Expr::Kind::Number: return ScalarField::constant(chart, e->number);
        case Expr::Kind::ImagUnit: return ScalarField::constant(chart, cplx(0.0, 1.0));
        case Expr::Kind::Ident: {
            int axis = chart->axis_index(e->name);
            if (axis >= 0) return ScalarField::coordinate(chart, axis);
            auto it = params.find(e->name);
            if (it != params.end()) return ScalarField::constant(chart, it->second);
            throw ParseError(e->line, e->col, "unknown identifier '" + e->name + "'");
        }
        case Expr::Kind::Unary: return -evaluate(e->args[0], chart, params);
        case Expr::Kind::Binary: {
            ScalarField a = evaluate(e->args[0], chart, params);
            if (e->op == '^') {
                long long n = constant_integer(e->args[1], params);
                Eigen::VectorXcd v(a.data().size());
                for (std::size_t p = 0; p < a.size(); ++p)
                    v(Eigen::Index(p)) = int_pow(a(p), n, p);
                return {chart, std::move(v)};
            }
            ScalarField b = evaluate(e->args[1], chart, params);
            switch (e->op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/': {
                    Eigen::VectorXcd v(a.data().size());
                    for (std::size_t p = 0; p < a.size(); ++p) {
                        if (std::abs(b(p)) < 1e-300) throw DomainError(p, "division");
                        v(Eigen::Index(p)) = a(p) / b(p);
                    }
                    return {chart, std::move(v)};
                }
            }
            return a;
        }
        case Expr::Kind::Call: {
            ScalarField a = evaluate(e->args[0], chart, params);
            Eigen::VectorXcd v(a.data().size());
            for (std::size_t p = 0; p < a.size(); ++p)
                v(Eigen::Index(p)) = apply_call(e->name, a(p), p);
            return {chart, std::move(v)};
        }
    }
    throw Error("unreachable expression kind");
}

} // namespace fiskit
