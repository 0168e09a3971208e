#ifndef CIRCLEWAVE_EXPR_HPP
#define CIRCLEWAVE_EXPR_HPP

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace circlewave {

/// Immutable expression tree for the nonlinearity f(t,u,p) (p stands for
/// u_x).  Nodes: real constants, the variables, declared named parameters,
/// unary negation, + - * / and ^ with a constant integer exponent >= 0, and
/// sin/cos/exp/tanh.  Trees never mutate after parsing; evaluation is pure.
class ExpressionAst {
public:
    enum class Var { t = 0, u = 1, p = 2 };

    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    enum class Kind { constant, variable, parameter, negate, add, sub, mul, div, pow, func };
    enum class Func { sin, cos, exp, tanh };

    struct Node {
        Kind kind;
        double value = 0.0;      // constant
        int var_index = 0;       // variable slot in the evaluation point
        std::string name;        // parameter name (diagnostics / unparse)
        double param_value = 0.0;
        int exponent = 0;        // pow
        Func func = Func::sin;
        NodePtr lhs, rhs;        // rhs null for unary nodes
    };

    ExpressionAst() = default;
    explicit ExpressionAst(NodePtr root, std::vector<std::string> variables,
                           std::map<std::string, double> params, std::string source)
        : root_(std::move(root)), variables_(std::move(variables)),
          params_(std::move(params)), source_(std::move(source)) {}

    const NodePtr& root() const { return root_; }
    const std::vector<std::string>& variables() const { return variables_; }
    const std::map<std::string, double>& params() const { return params_; }
    const std::string& source() const { return source_; }
    bool empty() const { return root_ == nullptr; }

private:
    NodePtr root_;
    std::vector<std::string> variables_; // variable names by slot
    std::map<std::string, double> params_;
    std::string source_;
};

/// Parse an infix expression over variables {t,u,p} and the declared
/// parameters.  Precedence ^ > unary - > * / > + -, left-associative within
/// a level.  Throws ParseError (with byte offset) on malformed input,
/// undeclared identifiers, or non-integer / negative exponents.
ExpressionAst parse_nonlinearity(const std::string& src,
                                 const std::map<std::string, double>& params = {});

/// Same grammar over a caller-chosen variable set (used for initial-data
/// profiles in x).
ExpressionAst parse_expression(const std::string& src,
                               const std::vector<std::string>& variables,
                               const std::map<std::string, double>& params = {});

/// Value of f at one point.  `args` are bound to the AST's variables in
/// declaration order; for nonlinearities that is (t, u, p).  Throws
/// DomainError on division by zero.
double evaluate(const ExpressionAst& ast, std::span<const double> args);
double evaluate(const ExpressionAst& ast, double t, double u, double p);

/// Exact symbolic partial derivative with respect to one of the AST's
/// variables.  No simplification guarantees beyond correctness.
ExpressionAst differentiate(const ExpressionAst& ast, ExpressionAst::Var var);
ExpressionAst differentiate(const ExpressionAst& ast, const std::string& var);

/// Round-trippable infix form: parse(unparse(ast)) evaluates identically.
std::string unparse(const ExpressionAst& ast);

/// True when the tree references the named variable anywhere.
bool depends_on(const ExpressionAst& ast, const std::string& var);

/// Numerical test of f(t,u,-p) == f(t,u,p) at `samples` pseudo-random
/// points (|t| <= 4, |u|,|p| <= 2, fixed internal seed).
bool reflection_symmetric(const ExpressionAst& ast, int samples = 100);

/// Flat postfix program for fast repeated evaluation in stepping loops.
/// Behaves exactly like evaluate() including the division-by-zero check.
class CompiledExpr {
public:
    CompiledExpr() = default;
    explicit CompiledExpr(const ExpressionAst& ast);

    double operator()(double t, double u, double p) const;
    double eval(std::span<const double> args) const;

private:
    struct Op {
        ExpressionAst::Kind kind;
        double value = 0.0;
        int var_index = 0;
        int exponent = 0;
        ExpressionAst::Func func = ExpressionAst::Func::sin;
    };
    std::vector<Op> ops_;
    int n_vars_ = 0;
    int max_stack_ = 0;
};

} // namespace circlewave

#endif
