#include "normal_form.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace hypeq::nf {

// ---------------------------------------------------------------------------
// symbol interner

namespace {
std::mutex& intern_mutex() {
    static std::mutex m;
    return m;
}
std::deque<std::string>& intern_pool() {
    static std::deque<std::string> pool;
    return pool;
}
std::unordered_map<std::string, Sym>& intern_index() {
    static std::unordered_map<std::string, Sym> index;
    return index;
}
}  // namespace

Sym intern(const std::string& name) {
    std::lock_guard<std::mutex> lock(intern_mutex());
    auto& index = intern_index();
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    Sym id = static_cast<Sym>(intern_pool().size());
    intern_pool().push_back(name);
    index.emplace(name, id);
    return id;
}

// deque entries are stable and immutable once inserted; symbolic work is
// single-threaded, so reads go unlocked
const std::string& sym_name(Sym s) { return intern_pool()[s]; }

bool sym_less(Sym a, Sym b) {
    return a != b && intern_pool()[a] < intern_pool()[b];
}

namespace {
const std::string& name_nolock(Sym s) { return intern_pool()[s]; }
}  // namespace

// ---------------------------------------------------------------------------
// monomials

bool MonoGreater::operator()(const Mono& a, const Mono& b) const {
    if (a.degree != b.degree) return a.degree > b.degree;
    size_t i = 0, j = 0;
    while (i < a.factors.size() && j < b.factors.size()) {
        const auto& [as, ae] = a.factors[i];
        const auto& [bs, be] = b.factors[j];
        if (as != bs)
            return name_nolock(as) < name_nolock(bs);  // earlier generator wins
        if (ae != be) return ae > be;
        ++i;
        ++j;
    }
    return i < a.factors.size();
}

bool PolyLess::operator()(const Poly& a, const Poly& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    auto ia = a.begin(), ib = b.begin();
    MonoGreater gt;
    for (; ia != a.end(); ++ia, ++ib) {
        if (gt(ia->first, ib->first)) return false;
        if (gt(ib->first, ia->first)) return true;
        int c = Rational::compare(ia->second, ib->second);
        if (c != 0) return c < 0;
    }
    return false;
}

Poly poly_const(const Rational& c) {
    Poly p;
    if (!c.is_zero()) p[Mono{}] = c;
    return p;
}

Poly poly_generator(Sym key) {
    Poly p;
    Mono m;
    m.factors = {{key, 1}};
    m.degree = 1;
    p[m] = Rational(1);
    return p;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly r = a;
    for (const auto& [m, c] : b) {
        auto it = r.find(m);
        if (it == r.end()) {
            r[m] = c;
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) r.erase(it);
        }
    }
    return r;
}

Poly poly_scale(const Poly& a, const Rational& c) {
    Poly r;
    if (c.is_zero()) return r;
    for (const auto& [m, k] : a) r[m] = k * c;
    return r;
}

Poly poly_sub(const Poly& a, const Poly& b) {
    return poly_add(a, poly_scale(b, Rational(-1)));
}

namespace {

Mono mono_mul(const Mono& a, const Mono& b) {
    Mono r;
    r.degree = a.degree + b.degree;
    r.factors.reserve(a.factors.size() + b.factors.size());
    size_t i = 0, j = 0;
    while (i < a.factors.size() || j < b.factors.size()) {
        if (j == b.factors.size()) {
            r.factors.push_back(a.factors[i++]);
        } else if (i == a.factors.size()) {
            r.factors.push_back(b.factors[j++]);
        } else if (a.factors[i].first == b.factors[j].first) {
            r.factors.emplace_back(a.factors[i].first,
                                   a.factors[i].second + b.factors[j].second);
            ++i;
            ++j;
        } else if (sym_less(a.factors[i].first, b.factors[j].first)) {
            r.factors.push_back(a.factors[i++]);
        } else {
            r.factors.push_back(b.factors[j++]);
        }
    }
    return r;
}

Mono mono_div(const Mono& a, const Mono& g) {
    Mono r;
    size_t j = 0;
    for (const auto& [n, e] : a.factors) {
        int sub = 0;
        if (j < g.factors.size() && g.factors[j].first == n) {
            sub = g.factors[j].second;
            ++j;
        }
        if (e - sub > 0) r.factors.emplace_back(n, e - sub);
        r.degree += e - sub;
    }
    return r;
}

// divisibility of monomials with quotient
std::optional<Mono> mono_try_divide(const Mono& a, const Mono& b) {
    Mono r;
    size_t j = 0;
    for (const auto& [n, e] : b.factors) {
        while (j < a.factors.size() && a.factors[j].first != n) {
            r.factors.push_back(a.factors[j]);
            r.degree += a.factors[j].second;
            ++j;
        }
        if (j >= a.factors.size() || a.factors[j].second < e) return std::nullopt;
        if (a.factors[j].second > e) {
            r.factors.emplace_back(n, a.factors[j].second - e);
            r.degree += a.factors[j].second - e;
        }
        ++j;
    }
    for (; j < a.factors.size(); ++j) {
        r.factors.push_back(a.factors[j]);
        r.degree += a.factors[j].second;
    }
    return r;
}

}  // namespace

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return Poly{};
    // multiply by the smaller operand on the outside
    const Poly& outer = a.size() <= b.size() ? a : b;
    const Poly& inner = a.size() <= b.size() ? b : a;
    Poly r;
    for (const auto& [ma, ca] : outer) {
        for (const auto& [mb, cb] : inner) {
            Mono m = mono_mul(ma, mb);
            Rational c = ca * cb;
            auto it = r.find(m);
            if (it == r.end()) {
                r.emplace(std::move(m), std::move(c));
            } else {
                it->second = it->second + c;
                if (it->second.is_zero()) r.erase(it);
            }
        }
    }
    return r;
}

Poly poly_pow(const Poly& a, long long k) {
    Poly r = poly_const(Rational(1));
    Poly base = a;
    while (k > 0) {
        if (k & 1) r = poly_mul(r, base);
        base = poly_mul(base, base);
        k >>= 1;
    }
    return r;
}

bool poly_is_zero(const Poly& p) { return p.empty(); }

bool poly_is_one(const Poly& p) {
    return p.size() == 1 && p.begin()->first.factors.empty() &&
           p.begin()->second.is_one();
}

std::optional<Rational> poly_as_constant(const Poly& p) {
    if (p.empty()) return Rational(0);
    if (p.size() == 1 && p.begin()->first.factors.empty()) return p.begin()->second;
    return std::nullopt;
}

std::optional<Poly> poly_try_divide(const Poly& a, const Poly& b) {
    if (b.empty()) return std::nullopt;
    Poly rem = a;
    Poly quot;
    const auto& [ltb_m, ltb_c] = *b.begin();
    while (!rem.empty()) {
        const auto& [ltr_m, ltr_c] = *rem.begin();
        auto qm = mono_try_divide(ltr_m, ltb_m);
        if (!qm) return std::nullopt;
        Rational qc = ltr_c / ltb_c;
        Poly term;
        term[*qm] = qc;
        quot = poly_add(quot, term);
        rem = poly_sub(rem, poly_mul(term, b));
    }
    return quot;
}

// ---------------------------------------------------------------------------
// context

Expr Context::generator_expr(Sym key) const {
    const std::string& name = sym_name(key);
    auto it = atoms.find(name);
    if (it != atoms.end()) return it->second;
    return Expr::variable(name);
}

void Context::add_condition(const Expr& e) {
    if (e.is_number()) return;
    conditions.emplace(e.str(), e);
}

// ---------------------------------------------------------------------------
// rendering

Expr poly_to_expr(const Poly& p, const Context& ctx) {
    if (p.empty()) return Expr::zero();
    Expr acc;
    bool first = true;
    for (const auto& [m, c] : p) {
        Rational coeff = c;
        bool negative = coeff.is_negative();
        Rational mag = negative ? -coeff : coeff;
        Expr term;
        if (m.factors.empty()) {
            term = Expr::number(mag);
        } else {
            bool have = false;
            for (const auto& [key, e] : m.factors) {
                Expr f = Expr::pow(ctx.generator_expr(key), Rational(e));
                term = have ? Expr::mul(term, f) : f;
                have = true;
            }
            if (!mag.is_one()) term = Expr::mul(Expr::number(mag), term);
        }
        if (first) {
            acc = negative ? Expr::mul(Expr::integer(-1), term) : term;
            first = false;
        } else {
            acc = negative ? Expr::sub(acc, term) : Expr::add(acc, term);
        }
    }
    return acc;
}

Poly den_expand(const DenMap& den) {
    Poly r = poly_const(Rational(1));
    for (const auto& [base, exp] : den) r = poly_mul(r, poly_pow(base, exp));
    return r;
}

Expr to_expr(const RatNF& nf, const Context& ctx) {
    Expr num = poly_to_expr(nf.num, ctx);
    if (nf.den.empty()) return num;
    return Expr::div(num, poly_to_expr(den_expand(nf.den), ctx));
}

// ---------------------------------------------------------------------------
// factored denominators

namespace {

// monomial content shared by every term
Mono poly_mono_content(const Poly& p) {
    Mono gcd = p.begin()->first;
    for (const auto& [m, c] : p) {
        (void)c;
        Mono next;
        size_t j = 0;
        for (const auto& [n, e] : gcd.factors) {
            while (j < m.factors.size() && sym_less(m.factors[j].first, n)) ++j;
            if (j < m.factors.size() && m.factors[j].first == n) {
                int k = std::min(e, m.factors[j].second);
                next.factors.emplace_back(n, k);
                next.degree += k;
            }
        }
        gcd = std::move(next);
        if (gcd.factors.empty()) break;
    }
    return gcd;
}

Poly poly_mono_divide(const Poly& p, const Mono& m) {
    Poly r;
    for (const auto& [mono, c] : p) r[mono_div(mono, m)] = c;
    return r;
}

// inserts base^exp into the factor map; scalar content accumulates in scale
// (the numerator is later divided by scale). Monomial content splits into
// single-generator bases and composite bases merge by exact division.
void den_insert(DenMap& den, Poly base, int exp, Rational& scale) {
    if (exp == 0) return;
    if (base.empty()) throw DivisionByZeroError("denominator factor is zero");
    if (auto c = poly_as_constant(base)) {
        scale = scale * c->pow(exp);
        return;
    }
    Mono content = poly_mono_content(base);
    if (!content.factors.empty()) {
        for (const auto& [sym, k] : content.factors)
            den[poly_generator(sym)] += k * exp;
        base = poly_mono_divide(base, content);
        if (auto c = poly_as_constant(base)) {
            scale = scale * c->pow(exp);
            return;
        }
    }
    Rational lead = base.begin()->second;
    if (!lead.is_one()) {
        base = poly_scale(base, lead.reciprocal());
        scale = scale * lead.pow(exp);
    }

    // merge against existing composite bases by exact division
    bool progress = true;
    while (progress && base.size() > 1) {
        progress = false;
        for (auto it = den.begin(); it != den.end(); ++it) {
            if (it->first.size() <= 1) continue;
            if (it->first == base) break;
            if (auto q = poly_try_divide(base, it->first)) {
                it->second += exp;
                Rational inner_scale(1);
                den_insert(den, std::move(*q), exp, inner_scale);
                scale = scale * inner_scale;
                return;
            }
            if (auto q = poly_try_divide(it->first, base)) {
                int old_exp = it->second;
                den.erase(it);
                den[base] += old_exp;
                Rational inner_scale(1);
                den_insert(den, std::move(*q), old_exp, inner_scale);
                scale = scale * inner_scale;
                progress = true;
                break;
            }
        }
    }
    den[std::move(base)] += exp;
}

DenMap den_merge(const DenMap& a, const DenMap& b, Rational& scale) {
    DenMap r = a;
    for (const auto& [base, exp] : b) den_insert(r, base, exp, scale);
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------

void reduce(RatNF& nf, Context& ctx) {
    if (poly_is_zero(nf.num)) {
        for (const auto& [base, exp] : nf.den) {
            (void)exp;
            if (!poly_as_constant(base)) ctx.add_condition(poly_to_expr(base, ctx));
        }
        nf.den.clear();
        return;
    }
    if (nf.den.empty()) return;

    // cancel single-generator bases against the numerator's monomial content
    Mono content = poly_mono_content(nf.num);
    if (!content.factors.empty()) {
        Mono cancel;
        for (const auto& [sym, avail] : content.factors) {
            auto it = nf.den.find(poly_generator(sym));
            if (it == nf.den.end()) continue;
            int t = std::min(avail, it->second);
            if (t <= 0) continue;
            cancel.factors.emplace_back(sym, t);
            cancel.degree += t;
            it->second -= t;
            ctx.add_condition(ctx.generator_expr(sym));
            if (it->second == 0) nf.den.erase(it);
        }
        if (!cancel.factors.empty()) nf.num = poly_mono_divide(nf.num, cancel);
    }

    // cancel composite bases by exact division
    for (auto it = nf.den.begin(); it != nf.den.end();) {
        bool cancelled = false;
        if (it->first.size() > 1) {
            while (it->second > 0) {
                auto q = poly_try_divide(nf.num, it->first);
                if (!q) break;
                nf.num = std::move(*q);
                --it->second;
                cancelled = true;
            }
        }
        if (cancelled) ctx.add_condition(poly_to_expr(it->first, ctx));
        if (it->second == 0)
            it = nf.den.erase(it);
        else
            ++it;
    }

    // a denominator factor divisible by the whole numerator cancels it too
    if (!poly_as_constant(nf.num)) {
        for (auto it = nf.den.begin(); it != nf.den.end(); ++it) {
            auto q = poly_try_divide(it->first, nf.num);
            if (!q) continue;
            int k = it->second;
            Expr num_expr = poly_to_expr(nf.num, ctx);
            Poly old_num = std::move(nf.num);
            nf.den.erase(it);
            Rational scale(1);
            if (k > 1) den_insert(nf.den, old_num, k - 1, scale);
            den_insert(nf.den, std::move(*q), k, scale);
            nf.num = poly_const(scale.reciprocal());
            ctx.add_condition(num_expr);
            break;
        }
    }
}

RatNF nf_add(const RatNF& a, const RatNF& b, Context& ctx) {
    if (poly_is_zero(a.num)) return b;
    if (poly_is_zero(b.num)) return a;
    RatNF r;
    if (a.den == b.den) {
        r.num = poly_add(a.num, b.num);
        r.den = a.den;
    } else {
        // least common multiple by factor-wise maximum exponents
        DenMap lcm = a.den;
        for (const auto& [base, exp] : b.den) {
            auto it = lcm.find(base);
            if (it == lcm.end())
                lcm[base] = exp;
            else
                it->second = std::max(it->second, exp);
        }
        Poly na = a.num, nb = b.num;
        for (const auto& [base, exp] : lcm) {
            auto ia = a.den.find(base);
            int ea = ia == a.den.end() ? 0 : ia->second;
            if (exp > ea) na = poly_mul(na, poly_pow(base, exp - ea));
            auto ib = b.den.find(base);
            int eb = ib == b.den.end() ? 0 : ib->second;
            if (exp > eb) nb = poly_mul(nb, poly_pow(base, exp - eb));
        }
        r.num = poly_add(na, nb);
        r.den = std::move(lcm);
    }
    reduce(r, ctx);
    return r;
}

RatNF nf_sub(const RatNF& a, const RatNF& b, Context& ctx) {
    RatNF nb{poly_scale(b.num, Rational(-1)), b.den};
    return nf_add(a, nb, ctx);
}

RatNF nf_mul(const RatNF& a, const RatNF& b, Context& ctx) {
    RatNF r;
    r.num = poly_mul(a.num, b.num);
    Rational scale(1);
    r.den = den_merge(a.den, b.den, scale);
    if (!scale.is_one()) r.num = poly_scale(r.num, scale.reciprocal());
    reduce(r, ctx);
    return r;
}

RatNF nf_div(const RatNF& a, const RatNF& b, Context& ctx) {
    if (poly_is_zero(b.num))
        throw DivisionByZeroError("division by expression that normalizes to zero");
    RatNF r;
    r.num = poly_mul(a.num, den_expand(b.den));
    Rational scale(1);
    r.den = a.den;
    den_insert(r.den, b.num, 1, scale);
    if (!scale.is_one()) r.num = poly_scale(r.num, scale.reciprocal());
    reduce(r, ctx);
    return r;
}

namespace {

RatNF nf_one() { return RatNF{poly_const(Rational(1)), {}}; }

RatNF nf_pow_int(const RatNF& a, long long k, Context& ctx) {
    if (k == 0) return nf_one();
    RatNF r;
    if (k > 0) {
        r.num = poly_pow(a.num, k);
        r.den = a.den;
        for (auto& [base, exp] : r.den) exp *= static_cast<int>(k);
    } else {
        if (poly_is_zero(a.num))
            throw DivisionByZeroError("negative power of zero expression");
        r.num = poly_pow(den_expand(a.den), -k);
        Rational scale(1);
        den_insert(r.den, poly_pow(a.num, -k), 1, scale);
        if (!scale.is_one()) r.num = poly_scale(r.num, scale.reciprocal());
    }
    reduce(r, ctx);
    return r;
}

RatNF atom_nf(const Expr& atom, Context& ctx) {
    std::string key = atom.str();
    ctx.atoms.emplace(key, atom);
    return RatNF{poly_generator(intern(key)), {}};
}

}  // namespace

RatNF to_ratnf(const Expr& e, Context& ctx) {
    switch (e.kind()) {
        case NodeKind::Number: return RatNF{poly_const(e.num()), {}};
        case NodeKind::Variable:
            return RatNF{poly_generator(intern(e.name())), {}};
        case NodeKind::Add:
            return nf_add(to_ratnf(e.kid(0), ctx), to_ratnf(e.kid(1), ctx), ctx);
        case NodeKind::Sub:
            return nf_sub(to_ratnf(e.kid(0), ctx), to_ratnf(e.kid(1), ctx), ctx);
        case NodeKind::Mul:
            return nf_mul(to_ratnf(e.kid(0), ctx), to_ratnf(e.kid(1), ctx), ctx);
        case NodeKind::Div:
            return nf_div(to_ratnf(e.kid(0), ctx), to_ratnf(e.kid(1), ctx), ctx);
        case NodeKind::Pow: {
            const Rational& r = e.num();
            RatNF base = to_ratnf(e.kid(0), ctx);
            if (r.is_integer()) {
                if (!r.num().fits_longlong())
                    throw std::domain_error("power exponent too large");
                return nf_pow_int(base, r.num().to_longlong(), ctx);
            }
            // split the integer part; the fractional power of the normalized
            // base becomes an opaque atom
            BigInt fl = r.floor();
            Rational frac = r - Rational(fl, BigInt(1));
            if (poly_is_zero(base.num)) {
                if (Rational::compare(r, Rational(0)) > 0) return RatNF{Poly{}, {}};
                throw DivisionByZeroError("negative fractional power of zero");
            }
            Expr base_expr = to_expr(base, ctx);
            RatNF atom = atom_nf(Expr::pow(base_expr, frac), ctx);
            if (fl.is_zero()) return atom;
            if (!fl.fits_longlong())
                throw std::domain_error("power exponent too large");
            return nf_mul(atom, nf_pow_int(base, fl.to_longlong(), ctx), ctx);
        }
        case NodeKind::Call: {
            std::vector<Expr> args;
            args.reserve(e.nkids());
            for (size_t i = 0; i < e.nkids(); ++i) {
                RatNF a = to_ratnf(e.kid(i), ctx);
                args.push_back(to_expr(a, ctx));
            }
            Expr rebuilt =
                e.builtin() == Builtin::Free
                    ? Expr::free_call(e.name(), e.arg_names(), e.deriv(), args)
                    : Expr::call(e.builtin(), args);
            if (rebuilt.kind() != NodeKind::Call) return to_ratnf(rebuilt, ctx);
            return atom_nf(rebuilt, ctx);
        }
    }
    throw std::logic_error("unreachable node kind");
}

}  // namespace hypeq::nf

namespace hypeq {

NormalizeResult normalize_full(const Expr& e) {
    nf::Context ctx;
    nf::RatNF r = nf::to_ratnf(e, ctx);
    NormalizeResult out;
    out.expr = nf::to_expr(r, ctx);
    for (const auto& [key, cond] : ctx.conditions) {
        (void)key;
        out.cancelled_nonzero.push_back(cond);
    }
    return out;
}

Expr normalize(const Expr& e) { return normalize_full(e).expr; }

bool is_normalized_zero(const Expr& e) {
    nf::Context ctx;
    return nf::poly_is_zero(nf::to_ratnf(e, ctx).num);
}

}  // namespace hypeq

namespace hypeq::nf {

std::optional<std::pair<std::vector<Expr>, std::vector<Expr>>>
rational_coefficients(const Expr& e, const std::string& var) {
    Context ctx;
    RatNF nf;
    try {
        nf = to_ratnf(e, ctx);
    } catch (const DivisionByZeroError&) {
        return std::nullopt;
    }
    for (const auto& [key, atom] : ctx.atoms)
        if (depends_on(atom, var)) return std::nullopt;

    Sym var_sym = intern(var);
    auto split = [&](const Poly& p) {
        std::vector<Poly> buckets;
        for (const auto& [m, c] : p) {
            int k = 0;
            Mono rest;
            for (const auto& [n, ex] : m.factors) {
                if (n == var_sym) {
                    k = ex;
                } else {
                    rest.factors.emplace_back(n, ex);
                    rest.degree += ex;
                }
            }
            if (static_cast<size_t>(k) >= buckets.size())
                buckets.resize(static_cast<size_t>(k) + 1);
            buckets[static_cast<size_t>(k)][rest] = c;
        }
        std::vector<Expr> out;
        out.reserve(buckets.size());
        for (const auto& b : buckets) out.push_back(poly_to_expr(b, ctx));
        if (out.empty()) out.push_back(Expr::zero());
        return out;
    };
    return std::make_pair(split(nf.num), split(den_expand(nf.den)));
}

}  // namespace hypeq::nf
