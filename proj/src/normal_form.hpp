// Internal canonical-form machinery behind normalize(): multivariate
// polynomials over the rationals in generators that are either variables or
// opaque atoms (function applications, fractional powers), ordered graded
// lexicographically with generator names compared bytewise. Denominators are
// kept factored so that quotient-rule chains stay small; rendering expands
// them into a single polynomial.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hypeq/expr.hpp"
#include "hypeq/rational.hpp"

namespace hypeq::nf {

// process-wide interned generator names; ordering always uses the string
using Sym = std::uint32_t;
Sym intern(const std::string& name);
const std::string& sym_name(Sym s);
// bytewise comparison of the underlying names
bool sym_less(Sym a, Sym b);

struct Mono {
    // sorted by generator name, exponents > 0
    std::vector<std::pair<Sym, int>> factors;
    int degree = 0;

    bool operator==(const Mono& o) const { return factors == o.factors; }
};

// strict "greater in graded lex" so map iteration yields leading terms first
struct MonoGreater {
    bool operator()(const Mono& a, const Mono& b) const;
};

using Poly = std::map<Mono, Rational, MonoGreater>;

struct PolyLess {
    bool operator()(const Poly& a, const Poly& b) const;
};
using DenMap = std::map<Poly, int, PolyLess>;

Poly poly_const(const Rational& c);
Poly poly_generator(Sym key);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_pow(const Poly& a, long long k);  // k >= 0
Poly poly_scale(const Poly& a, const Rational& c);
bool poly_is_zero(const Poly& p);
bool poly_is_one(const Poly& p);
std::optional<Rational> poly_as_constant(const Poly& p);
// exact multivariate division, nullopt when b does not divide a
std::optional<Poly> poly_try_divide(const Poly& a, const Poly& b);

struct Context {
    std::map<std::string, Expr> atoms;       // generator name -> atom expression
    std::map<std::string, Expr> conditions;  // rendered expr -> expression != 0
    Expr generator_expr(Sym key) const;
    void add_condition(const Expr& e);
};

struct RatNF {
    Poly num;
    DenMap den;  // monic factor -> exponent; empty means denominator one
};

RatNF to_ratnf(const Expr& e, Context& ctx);
Expr poly_to_expr(const Poly& p, const Context& ctx);
Poly den_expand(const DenMap& den);
Expr to_expr(const RatNF& nf, const Context& ctx);

RatNF nf_add(const RatNF& a, const RatNF& b, Context& ctx);
RatNF nf_sub(const RatNF& a, const RatNF& b, Context& ctx);
RatNF nf_mul(const RatNF& a, const RatNF& b, Context& ctx);
RatNF nf_div(const RatNF& a, const RatNF& b, Context& ctx);
void reduce(RatNF& nf, Context& ctx);

// Coefficient lists [c0, c1, ...] of numerator and denominator of e viewed
// as polynomials in `var`; fails when any opaque atom depends on var.
std::optional<std::pair<std::vector<Expr>, std::vector<Expr>>>
rational_coefficients(const Expr& e, const std::string& var);

}  // namespace hypeq::nf
