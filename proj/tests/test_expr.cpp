#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lich/expr.hpp"
#include "lich/operators.hpp"

using namespace lich;

namespace {
double eval_at(const std::string& s, std::vector<double> x) {
    return eval_expr_at(*parse_expr(s), x);
}
}  // namespace

TEST_CASE("precedence and associativity") {
    CHECK(eval_at("2+3*4", {0}) == 14.0);
    CHECK(eval_at("2*3+4", {0}) == 10.0);
    CHECK(eval_at("2^3^2", {0}) == 512.0);  // right-associative
    CHECK(eval_at("8/4/2", {0}) == 1.0);    // left-associative
    CHECK(eval_at("8-4-2", {0}) == 2.0);
    CHECK(eval_at("-2^2", {0}) == -4.0);    // ^ binds tighter than unary minus
    CHECK(eval_at("2^-1", {0}) == 0.5);
    CHECK(eval_at("min(3, max(1, 2))", {0}) == 2.0);
    CHECK(eval_at("abs(-3)+sqrt(9)", {0}) == 6.0);
    CHECK(eval_at("pi", {0}) == doctest::Approx(M_PI));
}

TEST_CASE("variables index torus coordinates") {
    CHECK(eval_at("x1 + 10*x2", {0.25, 0.5}) == doctest::Approx(5.25));
    CHECK(eval_at("sin(2*pi*x1)", {0.25}) == doctest::Approx(1.0));
}

TEST_CASE("syntax errors carry byte offsets") {
    CHECK_THROWS_AS(parse_expr("2+"), ExprError);
    CHECK_THROWS_AS(parse_expr("2+*3"), ExprError);
    CHECK_THROWS_AS(parse_expr("sin(1,2)"), ExprError);   // arity
    CHECK_THROWS_AS(parse_expr("min(1)"), ExprError);     // arity
    CHECK_THROWS_AS(parse_expr("foo(1)"), ExprError);     // unknown identifier
    CHECK_THROWS_AS(parse_expr("(1+2"), ExprError);
    try {
        parse_expr("1 + @");
    } catch (const ExprError& e) {
        CHECK(e.offset() == 4);
    }
}

TEST_CASE("variable beyond dimension is an evaluation-time error") {
    ExprPtr e = parse_expr("x3");
    TorusGrid g(2, 4);
    CHECK_THROWS_WITH_AS(eval_on_grid(e, g), doctest::Contains("beyond dimension"), ExprError);
}

TEST_CASE("sqrt of a negative value is a domain error") {
    TorusGrid g(2, 4);
    CHECK_THROWS_AS(eval_on_grid(parse_expr("sqrt(x1 - 10)"), g), ExprError);
    CHECK_THROWS_AS(eval_on_grid(parse_expr("1/(x1 - x1)"), g), ExprError);
}

TEST_CASE("grid evaluation at cell centers") {
    TorusGrid g(2, 16);
    GridEval one = eval_on_grid(parse_expr("1"), g);
    for (std::int64_t i = 0; i < g.size(); ++i) CHECK(one.field[i] == 1.0);
    CHECK_FALSE(one.periodic_warning);

    GridEval cosx = eval_on_grid(parse_expr("cos(2*pi*x1)"), g);
    CHECK(std::abs(integrate(cosx.field)) < 1e-12);
    CHECK_FALSE(cosx.periodic_warning);
}

TEST_CASE("non-periodic expressions trigger the seam warning") {
    TorusGrid g(2, 8);
    CHECK(eval_on_grid(parse_expr("x1"), g).periodic_warning);
    CHECK(eval_on_grid(parse_expr("x2^2"), g).periodic_warning);
    CHECK_FALSE(eval_on_grid(parse_expr("sin(2*pi*x2)"), g).periodic_warning);
    CHECK_FALSE(eval_on_grid(parse_expr("0.1 - max(0, 0.5 - cos(2*pi*x1))^2"), g)
                    .periodic_warning);
}

TEST_CASE("printer round-trips structurally") {
    const char* cases[] = {
        "2+3*4",
        "sin(2*pi*x1)",
        "-x1^2",
        "(x1+x2)*(x1-x2)",
        "2^3^2",
        "1 - 2 - 3",
        "8/4/2",
        "min(x1, max(0, 0.5 - cos(2*pi*x2)))^2",
        "-(x1+1)",
        "exp(-abs(x1))/(1+x2)",
        "0.002 - max(0, 0.5 - cos(2*pi*x1))^2",
    };
    for (const char* s : cases) {
        ExprPtr a = parse_expr(s);
        ExprPtr b = parse_expr(print_expr(a));
        CHECK_MESSAGE(a->equals(*b), "round trip failed for: ", s, " -> ", print_expr(a));
    }
}

TEST_CASE("round-tripped expressions evaluate identically") {
    TorusGrid g(2, 8);
    const char* cases[] = {"x1*x2 - 3/(1+x1)", "2^-x1", "-x1-(-x2)", "cos(2*pi*x1)^3"};
    for (const char* s : cases) {
        ExprPtr a = parse_expr(s);
        ExprPtr b = parse_expr(print_expr(a));
        GridEval va = eval_on_grid(a, g);
        GridEval vb = eval_on_grid(b, g);
        for (std::int64_t i = 0; i < g.size(); ++i) CHECK(va.field[i] == vb.field[i]);
    }
}
