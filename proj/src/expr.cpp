#include "hypeq/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

namespace hypeq {

const char* builtin_name(Builtin b) {
    switch (b) {
        case Builtin::Exp: return "exp";
        case Builtin::Ln: return "ln";
        case Builtin::Sin: return "sin";
        case Builtin::Cos: return "cos";
        case Builtin::Tan: return "tan";
        case Builtin::Sinh: return "sinh";
        case Builtin::Cosh: return "cosh";
        case Builtin::Sqrt: return "sqrt";
        case Builtin::Cubroot: return "cubroot";
        case Builtin::Free: return "<free>";
    }
    return "?";
}

std::optional<Builtin> builtin_from_name(const std::string& name) {
    static const std::map<std::string, Builtin> table = {
        {"exp", Builtin::Exp},   {"ln", Builtin::Ln},   {"sin", Builtin::Sin},
        {"cos", Builtin::Cos},   {"tan", Builtin::Tan}, {"sinh", Builtin::Sinh},
        {"cosh", Builtin::Cosh}, {"sqrt", Builtin::Sqrt},
        {"cubroot", Builtin::Cubroot}};
    auto it = table.find(name);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

size_t builtin_arity(Builtin b) { return b == Builtin::Cubroot ? 2 : 1; }

Expr Expr::wrap(ExprNode&& n) {
    Expr e;
    e.p_ = std::make_shared<const ExprNode>(std::move(n));
    return e;
}

Expr Expr::number(Rational v) {
    ExprNode n;
    n.kind = NodeKind::Number;
    n.number = std::move(v);
    return wrap(std::move(n));
}

Expr Expr::variable(const std::string& name) {
    ExprNode n;
    n.kind = NodeKind::Variable;
    n.name = name;
    return wrap(std::move(n));
}

Expr Expr::add(const Expr& a, const Expr& b) {
    if (a.is_number() && b.is_number()) return number(a.num() + b.num());
    if (a.is_zero_literal()) return b;
    if (b.is_zero_literal()) return a;
    ExprNode n;
    n.kind = NodeKind::Add;
    n.kids = {a, b};
    return wrap(std::move(n));
}

Expr Expr::sub(const Expr& a, const Expr& b) {
    if (a.is_number() && b.is_number()) return number(a.num() - b.num());
    if (b.is_zero_literal()) return a;
    if (a.is_zero_literal()) return mul(integer(-1), b);
    ExprNode n;
    n.kind = NodeKind::Sub;
    n.kids = {a, b};
    return wrap(std::move(n));
}

Expr Expr::mul(const Expr& a, const Expr& b) {
    if (a.is_number() && b.is_number()) return number(a.num() * b.num());
    if (a.is_zero_literal() || b.is_zero_literal()) return zero();
    if (a.is_integer_literal(1)) return b;
    if (b.is_integer_literal(1)) return a;
    // canonical: constants lead
    if (b.is_number() && !a.is_number()) return mul(b, a);
    if (a.is_number() && b.kind() == NodeKind::Mul && b.kid(0).is_number())
        return mul(number(a.num() * b.kid(0).num()), b.kid(1));
    ExprNode n;
    n.kind = NodeKind::Mul;
    n.kids = {a, b};
    return wrap(std::move(n));
}

Expr Expr::div(const Expr& a, const Expr& b) {
    if (b.is_number()) {
        if (b.num().is_zero()) throw DivisionByZeroError("division by zero constant");
        return mul(number(b.num().reciprocal()), a);
    }
    if (a.is_zero_literal()) return zero();
    ExprNode n;
    n.kind = NodeKind::Div;
    n.kids = {a, b};
    return wrap(std::move(n));
}

Expr Expr::pow(const Expr& base, const Rational& exponent) {
    if (exponent.is_zero()) return one();
    if (exponent.is_one()) return base;
    if (base.is_number() && exponent.is_integer() &&
        exponent.num().fits_longlong()) {
        const Rational& b = base.num();
        if (!(b.is_zero() && exponent.is_negative()))
            return number(b.is_zero() ? Rational(0)
                                      : b.pow(exponent.num().to_longlong()));
    }
    if (base.kind() == NodeKind::Pow) {
        const Rational& inner = base.num();
        // (b^k)^r collapses when r is an integer (valid on the domain where
        // b^k is defined), or when k is an odd integer and r has an odd
        // denominator (a real identity via odd roots).
        auto odd = [](const BigInt& v) {
            BigInt q, r;
            BigInt::divmod(v, BigInt(2), q, r);
            return !r.is_zero();
        };
        if (exponent.is_integer() ||
            (inner.is_integer() && odd(inner.num()) && odd(exponent.den())))
            return pow(base.kid(0), inner * exponent);
    }
    ExprNode n;
    n.kind = NodeKind::Pow;
    n.number = exponent;
    n.kids = {base};
    return wrap(std::move(n));
}

Expr Expr::call(Builtin fn, const Expr& arg) {
    // inverse-pair collapse; everything else stays opaque
    if (fn == Builtin::Exp && arg.kind() == NodeKind::Call &&
        arg.builtin() == Builtin::Ln)
        return arg.kid(0);
    if (fn == Builtin::Ln && arg.kind() == NodeKind::Call &&
        arg.builtin() == Builtin::Exp)
        return arg.kid(0);
    ExprNode n;
    n.kind = NodeKind::Call;
    n.builtin = fn;
    n.name = builtin_name(fn);
    n.kids = {arg};
    return wrap(std::move(n));
}

Expr Expr::call(Builtin fn, const std::vector<Expr>& args) {
    if (args.size() != builtin_arity(fn))
        throw std::invalid_argument(std::string(builtin_name(fn)) +
                                    ": wrong argument count");
    if (args.size() == 1) return call(fn, args[0]);
    ExprNode n;
    n.kind = NodeKind::Call;
    n.builtin = fn;
    n.name = builtin_name(fn);
    n.kids = args;
    return wrap(std::move(n));
}

Expr Expr::free_call(const std::string& name,
                     const std::vector<std::string>& arg_names,
                     const std::vector<int>& deriv,
                     const std::vector<Expr>& args) {
    if (arg_names.size() != args.size() || deriv.size() != args.size())
        throw std::invalid_argument("free_call arity mismatch for " + name);
    ExprNode n;
    n.kind = NodeKind::Call;
    n.builtin = Builtin::Free;
    n.name = name;
    n.arg_names = arg_names;
    n.deriv = deriv;
    n.kids = args;
    return wrap(std::move(n));
}

std::string Expr::free_display_name() const {
    std::string out = name();
    bool any = false;
    for (int d : p_->deriv)
        if (d > 0) any = true;
    if (!any) return out;
    out += "_";
    for (size_t i = 0; i < p_->deriv.size(); ++i)
        for (int k = 0; k < p_->deriv[i]; ++k) out += p_->arg_names[i];
    return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case NodeKind::Number: return a.num() == b.num();
        case NodeKind::Variable: return a.name() == b.name();
        case NodeKind::Pow:
            if (a.num() != b.num()) return false;
            break;
        case NodeKind::Call:
            if (a.builtin() != b.builtin() || a.name() != b.name() ||
                a.deriv() != b.deriv())
                return false;
            break;
        default: break;
    }
    if (a.nkids() != b.nkids()) return false;
    for (size_t i = 0; i < a.nkids(); ++i)
        if (!structurally_equal(a.kid(i), b.kid(i))) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

// precedence: 1 additive, 2 multiplicative, 3 power, 4 atom
void render(const Expr& e, int context, std::string& out) {
    switch (e.kind()) {
        case NodeKind::Number: {
            bool needs_paren = context >= 2 && (e.num().is_negative());
            if (needs_paren) out += "(";
            out += e.num().to_string();
            if (needs_paren) out += ")";
            return;
        }
        case NodeKind::Variable:
            out += e.name();
            return;
        case NodeKind::Add: {
            bool paren = context >= 2;
            if (paren) out += "(";
            render(e.kid(0), 1, out);
            out += "+";
            render(e.kid(1), 1, out);
            if (paren) out += ")";
            return;
        }
        case NodeKind::Sub: {
            bool paren = context >= 2;
            if (paren) out += "(";
            render(e.kid(0), 1, out);
            out += "-";
            render(e.kid(1), 2, out);  // right side binds tighter
            if (paren) out += ")";
            return;
        }
        case NodeKind::Mul: {
            // leading negative constant renders as unary minus
            if (e.kid(0).is_number() && e.kid(0).num().is_negative()) {
                bool paren = context >= 2;
                if (paren) out += "(";
                out += "-";
                Expr positive = Expr::mul(Expr::number(-e.kid(0).num()), e.kid(1));
                render(positive, 2, out);
                if (paren) out += ")";
                return;
            }
            bool paren = context >= 3;
            if (paren) out += "(";
            render(e.kid(0), 2, out);
            out += "*";
            render(e.kid(1), 3, out);
            if (paren) out += ")";
            return;
        }
        case NodeKind::Div: {
            bool paren = context >= 3;
            if (paren) out += "(";
            render(e.kid(0), 2, out);
            out += "/";
            render(e.kid(1), 3, out);
            if (paren) out += ")";
            return;
        }
        case NodeKind::Pow: {
            const Expr& base = e.kid(0);
            bool base_plain = base.kind() == NodeKind::Variable ||
                              base.kind() == NodeKind::Call ||
                              (base.is_number() && base.num().is_integer() &&
                               !base.num().is_negative());
            if (base_plain) {
                render(base, 4, out);
            } else {
                out += "(";
                render(base, 0, out);
                out += ")";
            }
            out += "^";
            const Rational& r = e.num();
            if (r.is_integer() && !r.is_negative()) {
                out += r.to_string();
            } else {
                out += "(" + r.to_string() + ")";
            }
            return;
        }
        case NodeKind::Call: {
            if (e.builtin() == Builtin::Free)
                out += e.free_display_name();
            else
                out += e.name();
            out += "(";
            for (size_t i = 0; i < e.nkids(); ++i) {
                if (i) out += ",";
                render(e.kid(i), 0, out);
            }
            out += ")";
            return;
        }
    }
}

}  // namespace

std::string Expr::str() const {
    std::string out;
    render(*this, 0, out);
    return out;
}

// ---------------------------------------------------------------------------
// VariableSpace

void VariableSpace::declare_variable(const std::string& name,
                                     std::optional<JetInfo> jet) {
    if (vars_.count(name)) throw std::invalid_argument("duplicate variable " + name);
    if (jet) {
        auto it = vars_.find(jet->base);
        if (it == vars_.end())
            throw std::invalid_argument("jet base not declared: " + jet->base);
        if (it->second.has_value())
            throw std::invalid_argument("jet base must not itself be a jet: " +
                                        jet->base);
    }
    vars_[name] = std::move(jet);
    order_.push_back(name);
}

void VariableSpace::declare_function(const std::string& name,
                                     const std::vector<std::string>& arg_names) {
    if (funcs_.count(name) || vars_.count(name))
        throw std::invalid_argument("duplicate symbol " + name);
    funcs_[name] = arg_names;
}

bool VariableSpace::has_variable(const std::string& name) const {
    return vars_.count(name) != 0;
}

bool VariableSpace::has_function(const std::string& name) const {
    return funcs_.count(name) != 0;
}

const std::vector<std::string>& VariableSpace::function_args(
    const std::string& name) const {
    auto it = funcs_.find(name);
    if (it == funcs_.end())
        throw std::invalid_argument("unknown function " + name);
    return it->second;
}

const std::optional<VariableSpace::JetInfo>& VariableSpace::jet_info(
    const std::string& name) const {
    auto it = vars_.find(name);
    if (it == vars_.end()) throw std::invalid_argument("unknown variable " + name);
    return it->second;
}

const VariableSpace& standard_space() {
    static const VariableSpace space = [] {
        VariableSpace s;
        using JI = VariableSpace::JetInfo;
        s.declare_variable("x");
        s.declare_variable("y");
        s.declare_variable("u");
        s.declare_variable("ux", JI{"u", {{"x", 1}}});
        s.declare_variable("uy", JI{"u", {{"y", 1}}});
        s.declare_variable("uxx", JI{"u", {{"x", 2}}});
        s.declare_variable("uxy", JI{"u", {{"x", 1}, {"y", 1}}});
        s.declare_variable("uyy", JI{"u", {{"y", 2}}});
        s.declare_variable("tau");
        s.declare_variable("xi");
        s.declare_variable("ups");
        s.declare_variable("eta");
        s.declare_variable("tx");
        s.declare_variable("ty");
        s.declare_variable("tu");
        s.declare_variable("tux", JI{"tu", {{"tx", 1}}});
        s.declare_variable("tuy", JI{"tu", {{"ty", 1}}});
        s.declare_function("theta", {"x", "y", "u"});
        return s;
    }();
    return space;
}

// ---------------------------------------------------------------------------
// Parser (recursive descent over the expression grammar)

namespace {

class Parser {
public:
    Parser(const std::string& text, const VariableSpace& space)
        : text_(text), space_(space) {}

    Expr run() {
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    const std::string& text_;
    const VariableSpace& space_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!accept(c)) fail(std::string("expected '") + c + "' (" + what + ")");
    }

    Expr parse_expr() {
        Expr e = parse_term();
        while (true) {
            if (accept('+'))
                e = Expr::add(e, parse_term());
            else if (accept('-'))
                e = Expr::sub(e, parse_term());
            else
                return e;
        }
    }

    Expr parse_term() {
        Expr e = parse_factor();
        while (true) {
            if (accept('*'))
                e = Expr::mul(e, parse_factor());
            else if (accept('/'))
                e = Expr::div(e, parse_factor());
            else
                return e;
        }
    }

    Expr parse_factor() {
        Expr b = parse_base();
        if (accept('^')) {
            Rational r = parse_exponent();
            return Expr::pow(b, r);
        }
        return b;
    }

    Rational parse_exponent() {
        skip_ws();
        if (accept('(')) {
            Rational r = parse_signed_rational();
            expect(')', "exponent");
            return r;
        }
        return parse_signed_rational();
    }

    Rational parse_signed_rational() {
        skip_ws();
        size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            fail("expected number in exponent");
        auto digit_at = [&](size_t i) {
            return i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]));
        };
        while (digit_at(pos_) ||
               (pos_ < text_.size() && (text_[pos_] == '/' || text_[pos_] == '.') &&
                digit_at(pos_ + 1)))
            ++pos_;
        try {
            return Rational::from_string(text_.substr(start, pos_ - start));
        } catch (const std::invalid_argument&) {
            pos_ = start;
            fail("malformed exponent");
        }
    }

    Expr parse_base() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '-') {
            ++pos_;
            return Expr::mul(Expr::integer(-1), parse_base());
        }
        if (c == '(') {
            ++pos_;
            Expr e = parse_expr();
            expect(')', "parenthesized expression");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return parse_identifier();
        fail("unexpected character");
    }

    Expr parse_number() {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '.'))
            ++pos_;
        try {
            return Expr::number(Rational::from_string(text_.substr(start, pos_ - start)));
        } catch (const std::invalid_argument&) {
            pos_ = start;
            fail("malformed number");
        }
    }

    Expr parse_identifier() {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '_'))
            ++pos_;
        std::string ident = text_.substr(start, pos_ - start);

        if (peek('(')) return parse_call(ident, start);

        if (!space_.has_variable(ident)) {
            pos_ = start;
            fail("unknown identifier '" + ident + "'");
        }
        return Expr::variable(ident);
    }

    Expr parse_call(const std::string& ident, size_t ident_pos) {
        std::string base = ident;
        std::string suffix;
        auto underscore = ident.find('_');
        if (underscore != std::string::npos) {
            base = ident.substr(0, underscore);
            suffix = ident.substr(underscore + 1);
        }

        expect('(', "function call");
        std::vector<Expr> args;
        if (!peek(')')) {
            args.push_back(parse_expr());
            while (accept(',')) args.push_back(parse_expr());
        }
        expect(')', "function call");

        if (suffix.empty()) {
            if (auto fn = builtin_from_name(base)) {
                if (args.size() != builtin_arity(*fn)) {
                    pos_ = ident_pos;
                    fail(base + " expects " + std::to_string(builtin_arity(*fn)) +
                         " argument(s)");
                }
                return Expr::call(*fn, args);
            }
        }
        if (!space_.has_function(base)) {
            pos_ = ident_pos;
            fail("unknown identifier '" + ident + "'");
        }
        const auto& arg_names = space_.function_args(base);
        if (args.size() != arg_names.size()) {
            pos_ = ident_pos;
            fail(base + " expects " + std::to_string(arg_names.size()) + " arguments");
        }
        std::vector<int> deriv(arg_names.size(), 0);
        // decode derivative suffix by greedy longest match over argument names
        size_t i = 0;
        while (i < suffix.size()) {
            size_t best = 0;
            size_t best_pos = 0;
            for (size_t a = 0; a < arg_names.size(); ++a) {
                const std::string& an = arg_names[a];
                if (an.size() > best && suffix.compare(i, an.size(), an) == 0) {
                    best = an.size();
                    best_pos = a;
                }
            }
            if (best == 0) {
                pos_ = ident_pos;
                fail("bad derivative suffix '" + suffix + "' for " + base);
            }
            deriv[best_pos] += 1;
            i += best;
        }
        return Expr::free_call(base, arg_names, deriv, args);
    }
};

}  // namespace

Expr parse(const std::string& text, const VariableSpace& space) {
    return Parser(text, space).run();
}

// ---------------------------------------------------------------------------
// Differentiation

Expr differentiate(const Expr& e, const std::string& var,
                   const VariableSpace& space) {
    if (!space.has_variable(var))
        throw std::invalid_argument("differentiate: undeclared variable " + var);
    switch (e.kind()) {
        case NodeKind::Number: return Expr::zero();
        case NodeKind::Variable:
            return e.name() == var ? Expr::one() : Expr::zero();
        case NodeKind::Add:
            return Expr::add(differentiate(e.kid(0), var, space),
                             differentiate(e.kid(1), var, space));
        case NodeKind::Sub:
            return Expr::sub(differentiate(e.kid(0), var, space),
                             differentiate(e.kid(1), var, space));
        case NodeKind::Mul: {
            Expr da = differentiate(e.kid(0), var, space);
            Expr db = differentiate(e.kid(1), var, space);
            return Expr::add(Expr::mul(da, e.kid(1)), Expr::mul(e.kid(0), db));
        }
        case NodeKind::Div: {
            Expr da = differentiate(e.kid(0), var, space);
            Expr db = differentiate(e.kid(1), var, space);
            Expr num = Expr::sub(Expr::mul(da, e.kid(1)), Expr::mul(e.kid(0), db));
            return Expr::div(num, Expr::pow(e.kid(1), Rational(2)));
        }
        case NodeKind::Pow: {
            Expr db = differentiate(e.kid(0), var, space);
            Expr factor = Expr::mul(Expr::number(e.num()),
                                    Expr::pow(e.kid(0), e.num() - Rational(1)));
            return Expr::mul(factor, db);
        }
        case NodeKind::Call: {
            if (e.builtin() == Builtin::Free) {
                std::vector<Expr> args;
                args.reserve(e.nkids());
                for (size_t k = 0; k < e.nkids(); ++k) args.push_back(e.kid(k));
                Expr total = Expr::zero();
                for (size_t i = 0; i < e.nkids(); ++i) {
                    Expr darg = differentiate(e.kid(i), var, space);
                    if (darg.is_zero_literal()) continue;
                    std::vector<int> deriv = e.deriv();
                    deriv[i] += 1;
                    Expr partial = Expr::free_call(e.name(), e.arg_names(), deriv, args);
                    total = Expr::add(total, Expr::mul(partial, darg));
                }
                return total;
            }
            if (e.builtin() == Builtin::Cubroot) {
                // w^3 + p*w = s  =>  w' = (s' - w*p') / (3*w^2 + p)
                const Expr &p = e.kid(0), &s = e.kid(1);
                Expr dp = differentiate(p, var, space);
                Expr ds = differentiate(s, var, space);
                if (dp.is_zero_literal() && ds.is_zero_literal()) return Expr::zero();
                return Expr::div(ds - e * dp,
                                 Expr::integer(3) * Expr::pow(e, Rational(2)) + p);
            }
            const Expr& a = e.kid(0);
            Expr da = differentiate(a, var, space);
            if (da.is_zero_literal()) return Expr::zero();
            Expr dfn;
            switch (e.builtin()) {
                case Builtin::Exp: dfn = e; break;
                case Builtin::Ln: dfn = Expr::div(Expr::one(), a); break;
                case Builtin::Sin: dfn = Expr::call(Builtin::Cos, a); break;
                case Builtin::Cos:
                    dfn = Expr::mul(Expr::integer(-1), Expr::call(Builtin::Sin, a));
                    break;
                case Builtin::Tan:
                    dfn = Expr::add(Expr::one(),
                                    Expr::pow(Expr::call(Builtin::Tan, a), Rational(2)));
                    break;
                case Builtin::Sinh: dfn = Expr::call(Builtin::Cosh, a); break;
                case Builtin::Cosh: dfn = Expr::call(Builtin::Sinh, a); break;
                case Builtin::Sqrt:
                    dfn = Expr::div(Expr::one(),
                                    Expr::mul(Expr::integer(2), e));
                    break;
                default: throw std::logic_error("unreachable builtin");
            }
            return Expr::mul(dfn, da);
        }
    }
    throw std::logic_error("unreachable node kind");
}

// ---------------------------------------------------------------------------
// Substitution

Expr substitute_raw(const Expr& e, const std::map<std::string, Expr>& bindings) {
    switch (e.kind()) {
        case NodeKind::Number: return e;
        case NodeKind::Variable: {
            auto it = bindings.find(e.name());
            return it == bindings.end() ? e : it->second;
        }
        case NodeKind::Add:
            return Expr::add(substitute_raw(e.kid(0), bindings),
                             substitute_raw(e.kid(1), bindings));
        case NodeKind::Sub:
            return Expr::sub(substitute_raw(e.kid(0), bindings),
                             substitute_raw(e.kid(1), bindings));
        case NodeKind::Mul:
            return Expr::mul(substitute_raw(e.kid(0), bindings),
                             substitute_raw(e.kid(1), bindings));
        case NodeKind::Div:
            return Expr::div(substitute_raw(e.kid(0), bindings),
                             substitute_raw(e.kid(1), bindings));
        case NodeKind::Pow:
            return Expr::pow(substitute_raw(e.kid(0), bindings), e.num());
        case NodeKind::Call: {
            std::vector<Expr> args;
            args.reserve(e.nkids());
            for (size_t i = 0; i < e.nkids(); ++i)
                args.push_back(substitute_raw(e.kid(i), bindings));
            if (e.builtin() == Builtin::Free)
                return Expr::free_call(e.name(), e.arg_names(), e.deriv(), args);
            return Expr::call(e.builtin(), args);
        }
    }
    throw std::logic_error("unreachable node kind");
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings,
                const VariableSpace& space) {
    for (const auto& [name, value] : bindings) {
        (void)value;
        if (!space.has_variable(name))
            throw std::invalid_argument("substitute: undeclared variable " + name);
    }
    return normalize(substitute_raw(e, bindings));
}

// ---------------------------------------------------------------------------
// Numeric evaluation

namespace {

double eval_rec(const Expr& e, const NumericPoint& pt) {
    switch (e.kind()) {
        case NodeKind::Number: return e.num().to_double();
        case NodeKind::Variable: {
            auto it = pt.vars.find(e.name());
            if (it == pt.vars.end())
                throw UnboundVariableError("unbound variable " + e.name());
            return it->second;
        }
        case NodeKind::Add: return eval_rec(e.kid(0), pt) + eval_rec(e.kid(1), pt);
        case NodeKind::Sub: return eval_rec(e.kid(0), pt) - eval_rec(e.kid(1), pt);
        case NodeKind::Mul: return eval_rec(e.kid(0), pt) * eval_rec(e.kid(1), pt);
        case NodeKind::Div: {
            double den = eval_rec(e.kid(1), pt);
            if (den == 0.0 || !std::isfinite(den))
                throw PoleError("division by zero at sample point");
            return eval_rec(e.kid(0), pt) / den;
        }
        case NodeKind::Pow: {
            double b = eval_rec(e.kid(0), pt);
            const Rational& r = e.num();
            if (r.is_integer() && r.num().fits_longlong()) {
                long long k = r.num().to_longlong();
                if (b == 0.0 && k < 0) throw PoleError("zero base with negative power");
                return std::pow(b, static_cast<double>(k));
            }
            double rp = r.to_double();
            if (b < 0.0) {
                // real odd roots allowed: p/q with odd q
                long long q = r.den().fits_longlong() ? r.den().to_longlong() : 0;
                long long p = r.num().fits_longlong() ? r.num().to_longlong() : 0;
                if (q % 2 == 1) {
                    double mag = std::pow(-b, rp);
                    return (p % 2 == 0) ? mag : -mag;
                }
                throw PoleError("negative base with even-root exponent");
            }
            if (b == 0.0 && rp < 0) throw PoleError("zero base with negative power");
            return std::pow(b, rp);
        }
        case NodeKind::Call: {
            if (e.builtin() == Builtin::Free) {
                auto it = pt.free_atoms.find(e.str());
                if (it == pt.free_atoms.end())
                    throw UnboundVariableError("unbound free-function atom " + e.str());
                return it->second;
            }
            if (e.builtin() == Builtin::Cubroot) {
                double p = eval_rec(e.kid(0), pt);
                double s = eval_rec(e.kid(1), pt);
                if (p <= 0.0)
                    throw PoleError("cubroot requires a positive linear coefficient");
                double disc = std::sqrt(s * s / 4.0 + p * p * p / 27.0);
                return std::cbrt(s / 2.0 + disc) + std::cbrt(s / 2.0 - disc);
            }
            double a = eval_rec(e.kid(0), pt);
            switch (e.builtin()) {
                case Builtin::Exp: return std::exp(a);
                case Builtin::Ln:
                    if (a <= 0.0) throw PoleError("ln of nonpositive argument");
                    return std::log(a);
                case Builtin::Sin: return std::sin(a);
                case Builtin::Cos: return std::cos(a);
                case Builtin::Tan: {
                    double c = std::cos(a);
                    if (std::abs(c) < 1e-12) throw PoleError("tan near pole");
                    return std::sin(a) / c;
                }
                case Builtin::Sinh: return std::sinh(a);
                case Builtin::Cosh: return std::cosh(a);
                case Builtin::Sqrt:
                    if (a < 0.0) throw PoleError("sqrt of negative argument");
                    return std::sqrt(a);
                default: throw std::logic_error("unreachable builtin");
            }
        }
    }
    throw std::logic_error("unreachable node kind");
}

}  // namespace

double eval_numeric(const Expr& e, const NumericPoint& point) {
    double v = eval_rec(e, point);
    if (!std::isfinite(v)) throw PoleError("non-finite evaluation result");
    return v;
}

// ---------------------------------------------------------------------------
// Tree queries and renamings

namespace {

void collect_vars(const Expr& e, std::set<std::string>& out) {
    if (e.kind() == NodeKind::Variable) {
        out.insert(e.name());
        return;
    }
    for (size_t i = 0; i < e.nkids(); ++i) collect_vars(e.kid(i), out);
}

void collect_atoms(const Expr& e, std::set<std::string>& out) {
    if (e.kind() == NodeKind::Call && e.builtin() == Builtin::Free) {
        out.insert(e.str());
    }
    for (size_t i = 0; i < e.nkids(); ++i) collect_atoms(e.kid(i), out);
}

}  // namespace

std::vector<std::string> free_variables(const Expr& e) {
    std::set<std::string> s;
    collect_vars(e, s);
    return {s.begin(), s.end()};
}

bool depends_on(const Expr& e, const std::string& var) {
    if (e.kind() == NodeKind::Variable) return e.name() == var;
    for (size_t i = 0; i < e.nkids(); ++i)
        if (depends_on(e.kid(i), var)) return true;
    return false;
}

std::vector<std::string> free_function_atoms(const Expr& e) {
    std::set<std::string> s;
    collect_atoms(e, s);
    return {s.begin(), s.end()};
}

Expr swap_xy(const Expr& e, const VariableSpace& space) {
    std::map<std::string, Expr> b = {
        {"x", Expr::variable("y")},   {"y", Expr::variable("x")},
        {"ux", Expr::variable("uy")}, {"uy", Expr::variable("ux")},
        {"uxx", Expr::variable("uyy")}, {"uyy", Expr::variable("uxx")}};
    return substitute(e, b, space);
}

Expr untilde(const Expr& e, const VariableSpace& space) {
    std::map<std::string, Expr> b = {
        {"tx", Expr::variable("x")},   {"ty", Expr::variable("y")},
        {"tu", Expr::variable("u")},   {"tux", Expr::variable("ux")},
        {"tuy", Expr::variable("uy")}};
    return substitute(e, b, space);
}

Expr retilde(const Expr& e, const VariableSpace& space) {
    std::map<std::string, Expr> b = {
        {"x", Expr::variable("tx")},   {"y", Expr::variable("ty")},
        {"u", Expr::variable("tu")},   {"ux", Expr::variable("tux")},
        {"uy", Expr::variable("tuy")}};
    return substitute(e, b, space);
}

}  // namespace hypeq
