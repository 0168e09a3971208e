#include "circlewave/expr.hpp"

#include "circlewave/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <sstream>

namespace circlewave {

namespace {

using Node = ExpressionAst::Node;
using NodePtr = ExpressionAst::NodePtr;
using Kind = ExpressionAst::Kind;
using Func = ExpressionAst::Func;

NodePtr make_constant(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::constant;
    n->value = v;
    return n;
}

NodePtr make_variable(int index, std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::variable;
    n->var_index = index;
    n->name = std::move(name);
    return n;
}

NodePtr make_parameter(std::string name, double value) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::parameter;
    n->name = std::move(name);
    n->param_value = value;
    return n;
}

NodePtr make_unary(Kind kind, NodePtr child) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(child);
    return n;
}

NodePtr make_binary(Kind kind, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

NodePtr make_pow(NodePtr base, int exponent) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::pow;
    n->lhs = std::move(base);
    n->exponent = exponent;
    return n;
}

NodePtr make_func(Func f, NodePtr arg) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::func;
    n->func = f;
    n->lhs = std::move(arg);
    return n;
}

const std::map<std::string, Func>& function_table() {
    static const std::map<std::string, Func> table = {
        {"sin", Func::sin}, {"cos", Func::cos}, {"exp", Func::exp}, {"tanh", Func::tanh}};
    return table;
}

// Recursive-descent parser.  Grammar:
//   sum    := product (('+'|'-') product)*
//   product:= unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' integer)*
//   atom   := number | ident | ident '(' sum ')' | '(' sum ')'
class Parser {
public:
    Parser(const std::string& src, const std::vector<std::string>& variables,
           const std::map<std::string, double>& params)
        : src_(src), variables_(variables), params_(params) {}

    NodePtr parse() {
        NodePtr root = parse_sum();
        skip_ws();
        if (pos_ != src_.size())
            throw ParseError("unexpected trailing input", pos_);
        return root;
    }

private:
    const std::string& src_;
    const std::vector<std::string>& variables_;
    const std::map<std::string, double>& params_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool at_end() {
        skip_ws();
        return pos_ == src_.size();
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr parse_sum() {
        NodePtr lhs = parse_product();
        for (;;) {
            if (consume('+')) lhs = make_binary(Kind::add, lhs, parse_product());
            else if (consume('-')) lhs = make_binary(Kind::sub, lhs, parse_product());
            else return lhs;
        }
    }

    NodePtr parse_product() {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (consume('*')) lhs = make_binary(Kind::mul, lhs, parse_unary());
            else if (consume('/')) lhs = make_binary(Kind::div, lhs, parse_unary());
            else return lhs;
        }
    }

    NodePtr parse_unary() {
        if (consume('-')) return make_unary(Kind::negate, parse_unary());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        while (consume('^')) base = make_pow(base, parse_exponent());
        return base;
    }

    int parse_exponent() {
        skip_ws();
        const std::size_t at = pos_;
        bool paren = consume('(');
        skip_ws();
        const std::size_t num_at = pos_;
        if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) ++pos_;
        std::size_t digits_begin = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ == digits_begin)
            throw ParseError("expected integer exponent after '^'", at);
        if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E'))
            throw ParseError("exponent must be an integer constant", num_at);
        long v = std::strtol(src_.c_str() + num_at, nullptr, 10);
        if (v < 0)
            throw ParseError("exponent must be non-negative", num_at);
        if (paren && !consume(')'))
            throw ParseError("expected ')' closing exponent", pos_);
        return static_cast<int>(v);
    }

    NodePtr parse_atom() {
        skip_ws();
        if (pos_ == src_.size()) throw ParseError("unexpected end of expression", pos_);
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = parse_sum();
            if (!consume(')')) throw ParseError("expected ')'", pos_);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    NodePtr parse_number() {
        const std::size_t at = pos_;
        char* end = nullptr;
        const double v = std::strtod(src_.c_str() + at, &end);
        if (end == src_.c_str() + at) throw ParseError("malformed number", at);
        pos_ = static_cast<std::size_t>(end - src_.c_str());
        return make_constant(v);
    }

    NodePtr parse_ident() {
        const std::size_t at = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        const std::string name = src_.substr(at, pos_ - at);
        if (auto fn = function_table().find(name); fn != function_table().end()) {
            if (!consume('('))
                throw ParseError("expected '(' after function '" + name + "'", pos_);
            NodePtr arg = parse_sum();
            if (!consume(')')) throw ParseError("expected ')'", pos_);
            return make_func(fn->second, arg);
        }
        for (std::size_t i = 0; i < variables_.size(); ++i)
            if (variables_[i] == name) return make_variable(static_cast<int>(i), name);
        if (auto it = params_.find(name); it != params_.end())
            return make_parameter(name, it->second);
        throw ParseError("undeclared identifier '" + name + "'", at);
    }
};

double eval_node(const Node& n, std::span<const double> args) {
    switch (n.kind) {
        case Kind::constant: return n.value;
        case Kind::variable: return args[static_cast<std::size_t>(n.var_index)];
        case Kind::parameter: return n.param_value;
        case Kind::negate: return -eval_node(*n.lhs, args);
        case Kind::add: return eval_node(*n.lhs, args) + eval_node(*n.rhs, args);
        case Kind::sub: return eval_node(*n.lhs, args) - eval_node(*n.rhs, args);
        case Kind::mul: return eval_node(*n.lhs, args) * eval_node(*n.rhs, args);
        case Kind::div: {
            const double denom = eval_node(*n.rhs, args);
            if (denom == 0.0) throw DomainError("division by zero while evaluating expression");
            return eval_node(*n.lhs, args) / denom;
        }
        case Kind::pow: {
            double base = eval_node(*n.lhs, args);
            double acc = 1.0;
            for (int i = 0; i < n.exponent; ++i) acc *= base;
            return acc;
        }
        case Kind::func: {
            const double a = eval_node(*n.lhs, args);
            switch (n.func) {
                case Func::sin: return std::sin(a);
                case Func::cos: return std::cos(a);
                case Func::exp: return std::exp(a);
                case Func::tanh: return std::tanh(a);
            }
        }
    }
    throw Error("corrupt expression node");
}

NodePtr diff_node(const NodePtr& n, int var_index) {
    switch (n->kind) {
        case Kind::constant:
        case Kind::parameter:
            return make_constant(0.0);
        case Kind::variable:
            return make_constant(n->var_index == var_index ? 1.0 : 0.0);
        case Kind::negate:
            return make_unary(Kind::negate, diff_node(n->lhs, var_index));
        case Kind::add:
            return make_binary(Kind::add, diff_node(n->lhs, var_index), diff_node(n->rhs, var_index));
        case Kind::sub:
            return make_binary(Kind::sub, diff_node(n->lhs, var_index), diff_node(n->rhs, var_index));
        case Kind::mul:
            return make_binary(
                Kind::add,
                make_binary(Kind::mul, diff_node(n->lhs, var_index), n->rhs),
                make_binary(Kind::mul, n->lhs, diff_node(n->rhs, var_index)));
        case Kind::div:
            // (f/g)' = f'/g - f g'/g^2
            return make_binary(
                Kind::sub,
                make_binary(Kind::div, diff_node(n->lhs, var_index), n->rhs),
                make_binary(Kind::div,
                            make_binary(Kind::mul, n->lhs, diff_node(n->rhs, var_index)),
                            make_pow(n->rhs, 2)));
        case Kind::pow: {
            if (n->exponent == 0) return make_constant(0.0);
            NodePtr inner = diff_node(n->lhs, var_index);
            NodePtr reduced;
            if (n->exponent == 1) reduced = make_constant(1.0);
            else if (n->exponent == 2) reduced = n->lhs;
            else reduced = make_pow(n->lhs, n->exponent - 1);
            return make_binary(Kind::mul,
                               make_binary(Kind::mul, make_constant(n->exponent), reduced),
                               inner);
        }
        case Kind::func: {
            NodePtr inner = diff_node(n->lhs, var_index);
            NodePtr outer;
            switch (n->func) {
                case Func::sin: outer = make_func(Func::cos, n->lhs); break;
                case Func::cos: outer = make_unary(Kind::negate, make_func(Func::sin, n->lhs)); break;
                case Func::exp: outer = make_func(Func::exp, n->lhs); break;
                case Func::tanh:
                    // (tanh g)' = (1 - tanh(g)^2) g'
                    outer = make_binary(Kind::sub, make_constant(1.0),
                                        make_pow(make_func(Func::tanh, n->lhs), 2));
                    break;
            }
            return make_binary(Kind::mul, outer, inner);
        }
    }
    throw Error("corrupt expression node");
}

void unparse_node(const Node& n, std::ostream& os) {
    switch (n.kind) {
        case Kind::constant: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", n.value);
            os << buf;
            return;
        }
        case Kind::variable:
        case Kind::parameter:
            os << n.name;
            return;
        case Kind::negate:
            os << "(-";
            unparse_node(*n.lhs, os);
            os << ')';
            return;
        case Kind::add:
        case Kind::sub:
        case Kind::mul:
        case Kind::div: {
            const char op = n.kind == Kind::add ? '+' : n.kind == Kind::sub ? '-'
                          : n.kind == Kind::mul ? '*' : '/';
            os << '(';
            unparse_node(*n.lhs, os);
            os << ' ' << op << ' ';
            unparse_node(*n.rhs, os);
            os << ')';
            return;
        }
        case Kind::pow:
            os << '(';
            unparse_node(*n.lhs, os);
            os << '^' << n.exponent << ')';
            return;
        case Kind::func: {
            switch (n.func) {
                case Func::sin: os << "sin("; break;
                case Func::cos: os << "cos("; break;
                case Func::exp: os << "exp("; break;
                case Func::tanh: os << "tanh("; break;
            }
            unparse_node(*n.lhs, os);
            os << ')';
            return;
        }
    }
}

bool depends_on_node(const Node& n, int var_index) {
    switch (n.kind) {
        case Kind::constant:
        case Kind::parameter:
            return false;
        case Kind::variable:
            return n.var_index == var_index;
        default:
            if (n.lhs && depends_on_node(*n.lhs, var_index)) return true;
            return n.rhs && depends_on_node(*n.rhs, var_index);
    }
}

} // namespace

ExpressionAst parse_expression(const std::string& src,
                               const std::vector<std::string>& variables,
                               const std::map<std::string, double>& params) {
    Parser parser(src, variables, params);
    return ExpressionAst(parser.parse(), variables, params, src);
}

ExpressionAst parse_nonlinearity(const std::string& src,
                                 const std::map<std::string, double>& params) {
    return parse_expression(src, {"t", "u", "p"}, params);
}

double evaluate(const ExpressionAst& ast, std::span<const double> args) {
    if (ast.empty()) throw Error("evaluating empty expression");
    return eval_node(*ast.root(), args);
}

double evaluate(const ExpressionAst& ast, double t, double u, double p) {
    const double args[3] = {t, u, p};
    return evaluate(ast, args);
}

ExpressionAst differentiate(const ExpressionAst& ast, const std::string& var) {
    const auto& vars = ast.variables();
    auto it = std::find(vars.begin(), vars.end(), var);
    if (it == vars.end()) throw Error("cannot differentiate with respect to '" + var + "'");
    const int idx = static_cast<int>(it - vars.begin());
    return ExpressionAst(diff_node(ast.root(), idx), vars, ast.params(),
                         "d/d" + var + "[" + ast.source() + "]");
}

ExpressionAst differentiate(const ExpressionAst& ast, ExpressionAst::Var var) {
    switch (var) {
        case ExpressionAst::Var::t: return differentiate(ast, "t");
        case ExpressionAst::Var::u: return differentiate(ast, "u");
        case ExpressionAst::Var::p: return differentiate(ast, "p");
    }
    throw Error("bad variable");
}

std::string unparse(const ExpressionAst& ast) {
    std::ostringstream os;
    unparse_node(*ast.root(), os);
    return os.str();
}

bool depends_on(const ExpressionAst& ast, const std::string& var) {
    const auto& vars = ast.variables();
    auto it = std::find(vars.begin(), vars.end(), var);
    if (it == vars.end()) return false;
    return depends_on_node(*ast.root(), static_cast<int>(it - vars.begin()));
}

bool reflection_symmetric(const ExpressionAst& ast, int samples) {
    // splitmix64; keeps the check deterministic without dragging in <random>
    // distribution implementation differences.
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    auto next_unit = [&state]() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        z = z ^ (z >> 31);
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    };
    for (int i = 0; i < samples; ++i) {
        const double t = 8.0 * (next_unit() - 0.5);
        const double u = 4.0 * (next_unit() - 0.5);
        const double p = 4.0 * (next_unit() - 0.5);
        const double plus = evaluate(ast, t, u, p);
        const double minus = evaluate(ast, t, u, -p);
        const double scale = std::max({1.0, std::abs(plus), std::abs(minus)});
        if (std::abs(plus - minus) > 1e-12 * scale) return false;
    }
    return true;
}

CompiledExpr::CompiledExpr(const ExpressionAst& ast) {
    n_vars_ = static_cast<int>(ast.variables().size());
    int depth = 0;
    max_stack_ = 0;
    // post-order flattening
    struct Frame { const Node* node; bool expanded; };
    std::vector<Frame> stack{{ast.root().get(), false}};
    std::vector<const Node*> postfix;
    while (!stack.empty()) {
        auto [node, expanded] = stack.back();
        stack.pop_back();
        if (expanded) {
            postfix.push_back(node);
            continue;
        }
        stack.push_back({node, true});
        if (node->rhs) stack.push_back({node->rhs.get(), false});
        if (node->lhs) stack.push_back({node->lhs.get(), false});
    }
    ops_.reserve(postfix.size());
    for (const Node* n : postfix) {
        Op op;
        op.kind = n->kind;
        switch (n->kind) {
            case Kind::constant: op.value = n->value; ++depth; break;
            case Kind::parameter: op.kind = Kind::constant; op.value = n->param_value; ++depth; break;
            case Kind::variable: op.var_index = n->var_index; ++depth; break;
            case Kind::negate: break;
            case Kind::func: op.func = n->func; break;
            case Kind::pow: op.exponent = n->exponent; break;
            case Kind::add:
            case Kind::sub:
            case Kind::mul:
            case Kind::div: --depth; break;
        }
        max_stack_ = std::max(max_stack_, depth);
        ops_.push_back(op);
    }
}

double CompiledExpr::eval(std::span<const double> args) const {
    double local[32] = {0.0};
    std::vector<double> heap;
    double* st = local;
    if (max_stack_ > 32) {
        heap.resize(static_cast<std::size_t>(max_stack_));
        st = heap.data();
    }
    int top = -1;
    for (const Op& op : ops_) {
        switch (op.kind) {
            case Kind::constant: st[++top] = op.value; break;
            case Kind::variable: st[++top] = args[static_cast<std::size_t>(op.var_index)]; break;
            case Kind::negate: st[top] = -st[top]; break;
            case Kind::add: --top; st[top] += st[top + 1]; break;
            case Kind::sub: --top; st[top] -= st[top + 1]; break;
            case Kind::mul: --top; st[top] *= st[top + 1]; break;
            case Kind::div:
                --top;
                if (st[top + 1] == 0.0)
                    throw DomainError("division by zero while evaluating expression");
                st[top] /= st[top + 1];
                break;
            case Kind::pow: {
                double base = st[top];
                double acc = 1.0;
                for (int i = 0; i < op.exponent; ++i) acc *= base;
                st[top] = acc;
                break;
            }
            case Kind::func:
                switch (op.func) {
                    case Func::sin: st[top] = std::sin(st[top]); break;
                    case Func::cos: st[top] = std::cos(st[top]); break;
                    case Func::exp: st[top] = std::exp(st[top]); break;
                    case Func::tanh: st[top] = std::tanh(st[top]); break;
                }
                break;
            case Kind::parameter: break; // folded into constants at compile time
        }
    }
    return st[0];
}

double CompiledExpr::operator()(double t, double u, double p) const {
    const double args[3] = {t, u, p};
    return eval(args);
}

} // namespace circlewave
