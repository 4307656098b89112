#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "lich/grid.hpp"

namespace lich {

/// Parse or evaluation failure, annotated with a byte offset into the source
/// text (offset < 0 when the error is not tied to a position).
class ExprError : public std::runtime_error {
public:
    ExprError(std::string msg, long offset = -1)
        : std::runtime_error(std::move(msg)), offset_(offset) {}
    long offset() const { return offset_; }

private:
    long offset_;
};

/// Expression tree over torus coordinates x1..xn, constants (pi), unary
/// sin/cos/exp/abs/sqrt and negation, binary + - * / ^ and min/max.
class FieldExpr {
public:
    enum class Kind { number, pi, var, neg, call1, binary, call2 };

    Kind kind = Kind::number;
    double number = 0.0;
    int var_index = 0;            // 1-based for Kind::var
    char op = 0;                  // + - * / ^ for Kind::binary
    std::string func;             // sin cos exp abs sqrt min max
    std::shared_ptr<const FieldExpr> lhs, rhs;

    bool equals(const FieldExpr& other) const;
};

using ExprPtr = std::shared_ptr<const FieldExpr>;

/// Parse with standard precedence (^ over unary minus over * / over + -),
/// left associativity except ^. Whitespace-insensitive.
ExprPtr parse_expr(const std::string& text);

/// Canonical printer; parse(print_expr(e)) reproduces e structurally.
std::string print_expr(const ExprPtr& e);

/// Scalar evaluation at a point (coords are torus coordinates per axis).
double eval_expr_at(const FieldExpr& e, std::span<const double> coords);

struct GridEval {
    ScalarField field;
    /// Set when values at a periodic seam differ from the expression's
    /// continuation past the seam by more than 1e-6 of the value range.
    bool periodic_warning = false;
};

/// Evaluate onto cell centers ((i + 0.5) / N per axis).
GridEval eval_on_grid(const ExprPtr& e, const TorusGrid& grid);

}  // namespace lich
