#include "hypeq/integrate.hpp"

#include <cmath>

#include "normal_form.hpp"

namespace hypeq {

namespace {

Expr V(const std::string& n) { return Expr::variable(n); }

// slope of an argument affine in var (var-free nonzero derivative)
std::optional<Expr> affine_slope(const Expr& arg, const std::string& var,
                                 const VariableSpace& space) {
    Expr d = normalize(differentiate(arg, var, space));
    if (depends_on(d, var) || is_normalized_zero(d)) return std::nullopt;
    return d;
}

// antiderivative of one numerator monomial; the caller divides by the
// var-free denominator afterwards
std::optional<Expr> integrate_monomial(const Rational& coeff,
                                       const nf::Mono& mono,
                                       const nf::Context& ctx,
                                       const std::string& var,
                                       const VariableSpace& space) {
    int var_power = 0;
    Expr rest = Expr::number(coeff);
    nf::Sym var_sym = nf::intern(var);
    std::vector<std::pair<Expr, int>> dependent;
    for (const auto& [key, exp] : mono.factors) {
        Expr gen = ctx.generator_expr(key);
        if (key == var_sym) {
            var_power = exp;
        } else if (depends_on(gen, var)) {
            dependent.emplace_back(gen, exp);
        } else {
            rest = rest * Expr::pow(gen, Rational(exp));
        }
    }

    if (dependent.empty()) {
        Rational kp1(var_power + 1);
        return rest * Expr::div(Expr::pow(V(var), kp1), Expr::number(kp1));
    }
    if (dependent.size() != 1) return std::nullopt;
    const auto& [atom, apow] = dependent[0];
    if (atom.kind() != NodeKind::Call) return std::nullopt;

    if (atom.builtin() == Builtin::Exp && var_power == 0) {
        auto slope = affine_slope(atom.kid(0), var, space);
        if (!slope) return std::nullopt;
        // power rule for exponentials: int rest*exp(L)^k = rest*exp(L)^k/(k L')
        return Expr::div(rest * Expr::pow(atom, Rational(apow)),
                         Expr::integer(apow) * *slope);
    }
    if ((atom.builtin() == Builtin::Sin || atom.builtin() == Builtin::Cos) &&
        var_power == 0 && apow == 1) {
        auto slope = affine_slope(atom.kid(0), var, space);
        if (!slope) return std::nullopt;
        if (atom.builtin() == Builtin::Sin)
            return Expr::div(
                Expr::integer(-1) * rest * Expr::call(Builtin::Cos, atom.kid(0)),
                *slope);
        return Expr::div(rest * Expr::call(Builtin::Sin, atom.kid(0)), *slope);
    }
    if (atom.builtin() == Builtin::Ln && var_power == 0 && apow == 1) {
        auto slope = affine_slope(atom.kid(0), var, space);
        if (!slope) return std::nullopt;
        const Expr& arg = atom.kid(0);
        return rest * Expr::div(arg * atom - arg, *slope);
    }
    return std::nullopt;
}

}  // namespace

std::optional<Expr> integrate_table(const Expr& e, const std::string& var,
                                    const VariableSpace& space) {
    nf::Context ctx;
    nf::RatNF f;
    try {
        f = nf::to_ratnf(e, ctx);
    } catch (const DivisionByZeroError&) {
        return std::nullopt;
    }
    Expr den_expr = nf::poly_to_expr(nf::den_expand(f.den), ctx);

    if (depends_on(den_expr, var)) {
        // rational in var with a linear denominator: polynomial part plus
        // remainder/(a t + b)
        auto coeffs = nf::rational_coefficients(e, var);
        if (!coeffs) return std::nullopt;
        auto& [num, den] = *coeffs;
        if (den.size() != 2) return std::nullopt;
        Expr b = den[0], a = den[1];
        if (is_normalized_zero(a)) return std::nullopt;
        std::vector<Expr> quot(num.size() > 0 ? num.size() - 1 : 0, Expr::zero());
        Expr rem = Expr::zero();
        Expr carry = Expr::zero();
        for (size_t i = num.size(); i-- > 0;) {
            Expr cur = normalize(num[i] + carry);
            if (i == 0) {
                rem = cur;
            } else {
                quot[i - 1] = normalize(Expr::div(cur, a));
                carry = Expr::integer(-1) * quot[i - 1] * b;
            }
        }
        Expr result = Expr::zero();
        for (size_t i = 0; i < quot.size(); ++i) {
            Rational kp1(static_cast<long long>(i) + 1);
            result = result +
                     quot[i] * Expr::div(Expr::pow(V(var), kp1), Expr::number(kp1));
        }
        if (!is_normalized_zero(rem)) {
            result = result + Expr::div(rem, a) * Expr::call(Builtin::Ln,
                                                             normalize(a * V(var) + b));
        }
        return normalize(result);
    }

    Expr total = Expr::zero();
    for (const auto& [mono, coeff] : f.num) {
        auto term = integrate_monomial(coeff, mono, ctx, var, space);
        if (!term) return std::nullopt;
        total = total + *term;
    }
    return normalize(Expr::div(total, den_expr));
}

std::optional<Expr> integrate_definite(const Expr& e, const std::string& var,
                                       const Expr& lo, const Expr& hi,
                                       const VariableSpace& space) {
    auto F = integrate_table(e, var, space);
    if (!F) return std::nullopt;
    try {
        Expr at_hi = substitute(*F, {{var, hi}}, space);
        Expr at_lo = substitute(*F, {{var, lo}}, space);
        return normalize(at_hi - at_lo);
    } catch (const DivisionByZeroError&) {
        return std::nullopt;
    }
}

Expr exp_of(const Expr& w, const VariableSpace& space) {
    (void)space;
    nf::Context ctx;
    nf::RatNF f;
    try {
        f = nf::to_ratnf(w, ctx);
    } catch (const DivisionByZeroError&) {
        return Expr::call(Builtin::Exp, w);
    }
    if (!f.den.empty()) return Expr::call(Builtin::Exp, normalize(w));

    Expr powers = Expr::one();
    nf::Poly residual;
    for (const auto& [mono, coeff] : f.num) {
        if (mono.factors.size() == 1 && mono.factors[0].second == 1) {
            Expr gen = ctx.generator_expr(mono.factors[0].first);
            if (gen.kind() == NodeKind::Call && gen.builtin() == Builtin::Ln) {
                powers = powers * Expr::pow(gen.kid(0), coeff);
                continue;
            }
        }
        residual[mono] = coeff;
    }
    Expr rest = nf::poly_to_expr(residual, ctx);
    if (is_normalized_zero(rest)) return normalize(powers);
    return normalize(powers * Expr::call(Builtin::Exp, rest));
}

double simpson_adaptive(const std::function<double(double)>& g, double a, double b,
                        double tol) {
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, double whole,
            int depth) -> double {
        double mid = 0.5 * (lo + hi);
        double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        double flm = g(lm), frm = g(rm);
        double left = (mid - lo) / 6.0 * (flo + 4 * flm + fmid);
        double right = (hi - mid) / 6.0 * (fmid + 4 * frm + fhi);
        if (depth <= 0 || std::abs(left + right - whole) < 15 * tol)
            return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, flo, flm, fmid, left, depth - 1) +
               rec(mid, hi, fmid, frm, fhi, right, depth - 1);
    };
    if (a == b) return 0.0;
    double fa = g(a), fb = g(b), fm = g(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    return rec(a, b, fa, fm, fb, whole, 30);
}

}  // namespace hypeq
