#include "lich/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>

namespace lich {

namespace {

std::shared_ptr<FieldExpr> make_number(double v) {
    auto e = std::make_shared<FieldExpr>();
    e->kind = FieldExpr::Kind::number;
    e->number = v;
    return e;
}

std::shared_ptr<FieldExpr> make_node(FieldExpr::Kind k) {
    auto e = std::make_shared<FieldExpr>();
    e->kind = k;
    return e;
}

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    ExprPtr run() {
        ExprPtr e = expr();
        skip_ws();
        if (pos_ != s_.size())
            fail("unexpected trailing input", pos_);
        return e;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
        throw ExprError("syntax error: " + msg, static_cast<long>(at));
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    ExprPtr expr() {
        ExprPtr e = term();
        for (;;) {
            skip_ws();
            if (eat('+')) {
                auto n = make_node(FieldExpr::Kind::binary);
                n->op = '+';
                n->lhs = e;
                n->rhs = term();
                e = n;
            } else if (eat('-')) {
                auto n = make_node(FieldExpr::Kind::binary);
                n->op = '-';
                n->lhs = e;
                n->rhs = term();
                e = n;
            } else {
                return e;
            }
        }
    }

    ExprPtr term() {
        ExprPtr e = unary();
        for (;;) {
            skip_ws();
            if (eat('*')) {
                auto n = make_node(FieldExpr::Kind::binary);
                n->op = '*';
                n->lhs = e;
                n->rhs = unary();
                e = n;
            } else if (eat('/')) {
                auto n = make_node(FieldExpr::Kind::binary);
                n->op = '/';
                n->lhs = e;
                n->rhs = unary();
                e = n;
            } else {
                return e;
            }
        }
    }

    ExprPtr unary() {
        if (eat('-')) {
            auto n = make_node(FieldExpr::Kind::neg);
            n->lhs = unary();
            return n;
        }
        return power();
    }

    ExprPtr power() {
        ExprPtr base = atom();
        skip_ws();
        if (eat('^')) {
            auto n = make_node(FieldExpr::Kind::binary);
            n->op = '^';
            n->lhs = base;
            n->rhs = unary();  // right-associative, exponent may carry a sign
            return n;
        }
        return base;
    }

    ExprPtr atom() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input", pos_);
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = expr();
            if (!eat(')')) fail("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail(std::string("unexpected character '") + c + "'", pos_);
    }

    ExprPtr number() {
        const char* begin = s_.data() + pos_;
        const char* end = s_.data() + s_.size();
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc()) fail("malformed number", pos_);
        pos_ += static_cast<std::size_t>(ptr - begin);
        return make_number(v);
    }

    ExprPtr identifier() {
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        std::string name = s_.substr(start, pos_ - start);
        if (name == "pi") return make_node(FieldExpr::Kind::pi);
        if (name.size() >= 2 && name[0] == 'x') {
            bool digits = true;
            for (std::size_t i = 1; i < name.size(); ++i)
                digits = digits && std::isdigit(static_cast<unsigned char>(name[i]));
            if (digits) {
                auto n = make_node(FieldExpr::Kind::var);
                n->var_index = std::atoi(name.c_str() + 1);
                if (n->var_index < 1)
                    throw ExprError("unknown identifier '" + name + "'",
                                    static_cast<long>(start));
                return n;
            }
        }
        if (name == "sin" || name == "cos" || name == "exp" || name == "abs" ||
            name == "sqrt") {
            if (!eat('(')) fail("expected '(' after function name", pos_);
            auto n = make_node(FieldExpr::Kind::call1);
            n->func = name;
            n->lhs = expr();
            if (peek() == ',')
                throw ExprError("arity mismatch: " + name + " takes one argument",
                                static_cast<long>(pos_));
            if (!eat(')')) fail("expected ')'", pos_);
            return n;
        }
        if (name == "min" || name == "max") {
            if (!eat('(')) fail("expected '(' after function name", pos_);
            auto n = make_node(FieldExpr::Kind::call2);
            n->func = name;
            n->lhs = expr();
            if (!eat(','))
                throw ExprError("arity mismatch: " + name + " takes two arguments",
                                static_cast<long>(pos_));
            n->rhs = expr();
            if (!eat(')')) fail("expected ')'", pos_);
            return n;
        }
        throw ExprError("unknown identifier '" + name + "'", static_cast<long>(start));
    }
};

int precedence(const FieldExpr& e) {
    switch (e.kind) {
        case FieldExpr::Kind::binary:
            if (e.op == '+' || e.op == '-') return 1;
            if (e.op == '*' || e.op == '/') return 2;
            return 4;  // ^
        case FieldExpr::Kind::neg:
            return 3;
        default:
            return 5;
    }
}

void print_rec(const FieldExpr& e, std::string& out) {
    auto child = [&out](const FieldExpr& c, bool need_parens) {
        if (need_parens) out += '(';
        print_rec(c, out);
        if (need_parens) out += ')';
    };
    switch (e.kind) {
        case FieldExpr::Kind::number: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", e.number);
            out += buf;
            break;
        }
        case FieldExpr::Kind::pi:
            out += "pi";
            break;
        case FieldExpr::Kind::var:
            out += 'x';
            out += std::to_string(e.var_index);
            break;
        case FieldExpr::Kind::neg:
            out += '-';
            child(*e.lhs, precedence(*e.lhs) < 3);
            break;
        case FieldExpr::Kind::call1:
            out += e.func;
            out += '(';
            print_rec(*e.lhs, out);
            out += ')';
            break;
        case FieldExpr::Kind::call2:
            out += e.func;
            out += '(';
            print_rec(*e.lhs, out);
            out += ", ";
            print_rec(*e.rhs, out);
            out += ')';
            break;
        case FieldExpr::Kind::binary: {
            int p = precedence(e);
            if (e.op == '^') {
                child(*e.lhs, precedence(*e.lhs) <= p);
                out += '^';
                child(*e.rhs, precedence(*e.rhs) < p);
            } else {
                child(*e.lhs, precedence(*e.lhs) < p);
                out += ' ';
                out += e.op;
                out += ' ';
                child(*e.rhs, precedence(*e.rhs) <= p);
            }
            break;
        }
    }
}

}  // namespace

bool FieldExpr::equals(const FieldExpr& other) const {
    if (kind != other.kind) return false;
    switch (kind) {
        case Kind::number:
            return number == other.number;
        case Kind::pi:
            return true;
        case Kind::var:
            return var_index == other.var_index;
        case Kind::neg:
            return lhs->equals(*other.lhs);
        case Kind::call1:
            return func == other.func && lhs->equals(*other.lhs);
        case Kind::call2:
            return func == other.func && lhs->equals(*other.lhs) && rhs->equals(*other.rhs);
        case Kind::binary:
            return op == other.op && lhs->equals(*other.lhs) && rhs->equals(*other.rhs);
    }
    return false;
}

ExprPtr parse_expr(const std::string& text) { return Parser(text).run(); }

std::string print_expr(const ExprPtr& e) {
    std::string out;
    print_rec(*e, out);
    return out;
}

double eval_expr_at(const FieldExpr& e, std::span<const double> coords) {
    switch (e.kind) {
        case FieldExpr::Kind::number:
            return e.number;
        case FieldExpr::Kind::pi:
            return M_PI;
        case FieldExpr::Kind::var: {
            if (e.var_index > static_cast<int>(coords.size()))
                throw ExprError("variable x" + std::to_string(e.var_index) +
                                " beyond dimension " + std::to_string(coords.size()));
            return coords[e.var_index - 1];
        }
        case FieldExpr::Kind::neg:
            return -eval_expr_at(*e.lhs, coords);
        case FieldExpr::Kind::call1: {
            double a = eval_expr_at(*e.lhs, coords);
            if (e.func == "sin") return std::sin(a);
            if (e.func == "cos") return std::cos(a);
            if (e.func == "exp") return std::exp(a);
            if (e.func == "abs") return std::abs(a);
            if (a < 0.0) throw ExprError("evaluation error: sqrt of negative value");
            return std::sqrt(a);
        }
        case FieldExpr::Kind::call2: {
            double a = eval_expr_at(*e.lhs, coords);
            double b = eval_expr_at(*e.rhs, coords);
            return e.func == "min" ? std::min(a, b) : std::max(a, b);
        }
        case FieldExpr::Kind::binary: {
            double a = eval_expr_at(*e.lhs, coords);
            double b = eval_expr_at(*e.rhs, coords);
            double r = 0.0;
            switch (e.op) {
                case '+': r = a + b; break;
                case '-': r = a - b; break;
                case '*': r = a * b; break;
                case '/': r = a / b; break;
                default: r = std::pow(a, b); break;
            }
            if (!std::isfinite(r))
                throw ExprError("evaluation error: non-finite value");
            return r;
        }
    }
    return 0.0;
}

GridEval eval_on_grid(const ExprPtr& e, const TorusGrid& grid) {
    GridEval out{ScalarField(grid), false};
    double coords[3] = {0, 0, 0};
    for (std::int64_t i = 0; i < grid.size(); ++i) {
        auto c = grid.coords(i);
        for (int d = 0; d < grid.dim(); ++d) coords[d] = grid.coord(c[d]);
        out.field[i] = eval_expr_at(*e, std::span<const double>(coords, grid.dim()));
    }

    double range = out.field.max_value() - out.field.min_value();
    double scale = range > 0.0 ? range : std::max(1.0, std::abs(out.field.max_value()));

    // Seam check: the continuation one cell past the last layer must agree
    // with the first layer's periodic image.
    for (int d = 0; d < grid.dim() && !out.periodic_warning; ++d) {
        for (std::int64_t i = 0; i < grid.size(); ++i) {
            auto c = grid.coords(i);
            if (c[d] != 0) continue;
            for (int dd = 0; dd < grid.dim(); ++dd) coords[dd] = grid.coord(c[dd]);
            coords[d] = 1.0 + grid.coord(0);
            double continued;
            try {
                continued = eval_expr_at(*e, std::span<const double>(coords, grid.dim()));
            } catch (const ExprError&) {
                out.periodic_warning = true;
                break;
            }
            if (std::abs(continued - out.field[i]) > 1e-6 * scale) {
                out.periodic_warning = true;
                break;
            }
        }
    }
    return out;
}

}  // namespace lich
