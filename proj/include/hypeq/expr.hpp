// Symbolic expression trees over jet variables.
//
// Expressions are immutable shared trees; every operation returns a new
// value, so they are safe to share across threads. Elementary functions are
// kept as opaque applications; free function symbols (theta(x,y,u), ...)
// stay unevaluated and differentiation turns them into derivative atoms
// named by subscripts in argument order (theta_xu, never theta_ux).

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypeq/rational.hpp"

namespace hypeq {

enum class NodeKind { Number, Variable, Add, Sub, Mul, Div, Pow, Call };

// Cubroot is the real root t of t^3 + p*t = s (first argument p, second s);
// it differentiates by the implicit-function rule, which keeps inverse-cubic
// identities inside the rational theory.
enum class Builtin { Exp, Ln, Sin, Cos, Tan, Sinh, Cosh, Sqrt, Cubroot, Free };

const char* builtin_name(Builtin b);
std::optional<Builtin> builtin_from_name(const std::string& name);
size_t builtin_arity(Builtin b);

class Expr;
struct ExprNode {
    NodeKind kind;
    Rational number;                  // Number payload, or Pow exponent
    std::string name;                 // variable name / free function base name
    Builtin builtin = Builtin::Free;  // for Call nodes
    std::vector<int> deriv;           // free call: derivative counts per argument
    std::vector<std::string> arg_names;  // free call: declared argument names
    std::vector<Expr> kids;
};

// Value handle over an immutable node.
class Expr {
public:
    Expr() = default;  // empty handle; only valid after assignment

    static Expr number(Rational v);
    static Expr integer(long long v) { return number(Rational(v)); }
    static Expr variable(const std::string& name);
    static Expr add(const Expr& a, const Expr& b);
    static Expr sub(const Expr& a, const Expr& b);
    static Expr mul(const Expr& a, const Expr& b);
    static Expr div(const Expr& a, const Expr& b);  // throws on literal /0
    static Expr pow(const Expr& base, const Rational& exponent);
    static Expr call(Builtin fn, const Expr& arg);
    static Expr call(Builtin fn, const std::vector<Expr>& args);
    static Expr free_call(const std::string& name,
                          const std::vector<std::string>& arg_names,
                          const std::vector<int>& deriv,
                          const std::vector<Expr>& args);
    static Expr zero() { return integer(0); }
    static Expr one() { return integer(1); }

    bool valid() const { return static_cast<bool>(p_); }
    NodeKind kind() const { return p_->kind; }
    const Rational& num() const { return p_->number; }
    const std::string& name() const { return p_->name; }
    Builtin builtin() const { return p_->builtin; }
    const std::vector<int>& deriv() const { return p_->deriv; }
    const std::vector<std::string>& arg_names() const { return p_->arg_names; }
    const Expr& kid(size_t i) const { return p_->kids[i]; }
    size_t nkids() const { return p_->kids.size(); }

    bool is_number() const { return p_->kind == NodeKind::Number; }
    bool is_zero_literal() const { return is_number() && num().is_zero(); }
    bool is_integer_literal(long long v) const {
        return is_number() && num() == Rational(v);
    }
    // Canonical display name of a free-function node, e.g. "theta_xu".
    std::string free_display_name() const;

    friend Expr operator+(const Expr& a, const Expr& b) { return add(a, b); }
    friend Expr operator-(const Expr& a, const Expr& b) { return sub(a, b); }
    friend Expr operator*(const Expr& a, const Expr& b) { return mul(a, b); }
    friend Expr operator/(const Expr& a, const Expr& b) { return div(a, b); }
    Expr operator-() const { return mul(integer(-1), *this); }

    std::string str() const;  // deterministic rendering, reparses to the same tree

private:
    std::shared_ptr<const ExprNode> p_;
    static Expr wrap(ExprNode&& n);
};

bool structurally_equal(const Expr& a, const Expr& b);

// Declared variables with jet metadata plus free function signatures.
class VariableSpace {
public:
    struct JetInfo {
        std::string base;                 // dependent variable this is a jet of
        std::map<std::string, int> index; // multi-index, e.g. {x:1, y:1}
    };

    void declare_variable(const std::string& name,
                          std::optional<JetInfo> jet = std::nullopt);
    void declare_function(const std::string& name,
                          const std::vector<std::string>& arg_names);

    bool has_variable(const std::string& name) const;
    bool has_function(const std::string& name) const;
    const std::vector<std::string>& function_args(const std::string& name) const;
    const std::vector<std::string>& variable_names() const { return order_; }
    const std::optional<JetInfo>& jet_info(const std::string& name) const;

private:
    std::vector<std::string> order_;
    std::map<std::string, std::optional<JetInfo>> vars_;
    std::map<std::string, std::vector<std::string>> funcs_;
};

// x y u ux uy uxx uxy uyy | tau xi ups eta | tx ty tu tux tuy; theta(x,y,u).
const VariableSpace& standard_space();

struct ParseError : std::runtime_error {
    size_t position;
    ParseError(const std::string& msg, size_t pos)
        : std::runtime_error(msg + " at offset " + std::to_string(pos)),
          position(pos) {}
};

struct PoleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnboundVariableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DivisionByZeroError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Expr parse(const std::string& text, const VariableSpace& space);

// Partial derivative treating every declared variable as independent.
Expr differentiate(const Expr& e, const std::string& var, const VariableSpace& space);

// Simultaneous substitution of variables, then rational normalization.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings,
                const VariableSpace& space);
// Substitution without the trailing normalization pass.
Expr substitute_raw(const Expr& e, const std::map<std::string, Expr>& bindings);

struct NormalizeResult {
    Expr expr;
    // Expressions whose nonvanishing was assumed by cancellations.
    std::vector<Expr> cancelled_nonzero;
};
NormalizeResult normalize_full(const Expr& e);
Expr normalize(const Expr& e);

bool is_normalized_zero(const Expr& e);

// Numeric evaluation point: plain variables plus values for free-function
// atoms (keyed by their canonical rendering, e.g. "theta_u(x,y,u)").
struct NumericPoint {
    std::map<std::string, double> vars;
    std::map<std::string, double> free_atoms;
};

double eval_numeric(const Expr& e, const NumericPoint& point);

// All variable names appearing in the tree.
std::vector<std::string> free_variables(const Expr& e);
bool depends_on(const Expr& e, const std::string& var);
// Canonical keys of free-function atoms appearing in the tree.
std::vector<std::string> free_function_atoms(const Expr& e);

// x <-> y, ux <-> uy (the discrete permutation on expressions).
Expr swap_xy(const Expr& e, const VariableSpace& space);
// tilde names -> plain names (tx -> x, ...), and the reverse.
Expr untilde(const Expr& e, const VariableSpace& space);
Expr retilde(const Expr& e, const VariableSpace& space);

}  // namespace hypeq
