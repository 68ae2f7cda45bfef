#include "rf2d/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <random>

namespace rf2d {

struct PhiExpression::Node {
    enum class Kind { Number, Variable, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp };
    Kind kind;
    double value = 0.0;
    int var = 0;
    std::shared_ptr<const Node> a, b;

    double eval(const double vars[4]) const {
        switch (kind) {
            case Kind::Number: return value;
            case Kind::Variable: return vars[var];
            case Kind::Add: return a->eval(vars) + b->eval(vars);
            case Kind::Sub: return a->eval(vars) - b->eval(vars);
            case Kind::Mul: return a->eval(vars) * b->eval(vars);
            case Kind::Div: return a->eval(vars) / b->eval(vars);
            case Kind::Pow: return std::pow(a->eval(vars), b->eval(vars));
            case Kind::Neg: return -a->eval(vars);
            case Kind::Sin: return std::sin(a->eval(vars));
            case Kind::Cos: return std::cos(a->eval(vars));
            case Kind::Exp: return std::exp(a->eval(vars));
        }
        return 0.0;
    }
};

namespace {

using Node = PhiExpression::Node;
using NodePtr = std::shared_ptr<const Node>;

struct Parser {
    const std::string& text;
    std::size_t pos = 0;
    unsigned used_mask = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    NodePtr make(Node::Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->a = std::move(a);
        n->b = std::move(b);
        return n;
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        while (true) {
            if (eat('+')) lhs = make(Node::Kind::Add, lhs, parse_term());
            else if (eat('-')) lhs = make(Node::Kind::Sub, lhs, parse_term());
            else return lhs;
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        while (true) {
            if (eat('*')) lhs = make(Node::Kind::Mul, lhs, parse_unary());
            else if (eat('/')) lhs = make(Node::Kind::Div, lhs, parse_unary());
            else return lhs;
        }
    }

    NodePtr parse_unary() {
        if (eat('-')) return make(Node::Kind::Neg, parse_unary());
        if (eat('+')) return parse_unary();
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (eat('^')) return make(Node::Kind::Pow, base, parse_unary());
        return base;
    }

    NodePtr parse_atom() {
        skip_ws();
        if (pos >= text.size()) throw ExpressionError("phi0 expression: unexpected end");
        const char c = text[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            const double v = std::stod(text.substr(pos), &used);
            pos += used;
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::Number;
            n->value = v;
            return n;
        }
        if (c == '(') {
            ++pos;
            NodePtr inner = parse_expr();
            if (!eat(')')) throw ExpressionError("phi0 expression: missing ')'");
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos;
            while (end < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[end])) || text[end] == '_'))
                ++end;
            const std::string name = text.substr(pos, end - pos);
            pos = end;
            if (name == "sin" || name == "cos" || name == "exp") {
                if (!eat('(')) throw ExpressionError("phi0 expression: '" + name + "' needs '('");
                NodePtr arg = parse_expr();
                if (!eat(')')) throw ExpressionError("phi0 expression: missing ')'");
                const auto kind = name == "sin"   ? Node::Kind::Sin
                                  : name == "cos" ? Node::Kind::Cos
                                                  : Node::Kind::Exp;
                return make(kind, arg);
            }
            if (name == "pi") {
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::Number;
                n->value = std::numbers::pi;
                return n;
            }
            static const char* kVarNames[4] = {"x", "y", "lat", "lon"};
            for (int v = 0; v < 4; ++v) {
                if (name == kVarNames[v]) {
                    used_mask |= 1u << v;
                    auto n = std::make_shared<Node>();
                    n->kind = Node::Kind::Variable;
                    n->var = v;
                    return n;
                }
            }
            throw ExpressionError("phi0 expression: unknown identifier '" + name + "'");
        }
        throw ExpressionError(std::string("phi0 expression: unexpected character '") + c + "'");
    }
};

}  // namespace

PhiExpression PhiExpression::parse(const std::string& text) {
    Parser p{text};
    PhiExpression e;
    e.root_ = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) throw ExpressionError("phi0 expression: trailing input");
    e.used_mask_ = p.used_mask;
    return e;
}

double PhiExpression::eval(const double vars[4]) const { return root_->eval(vars); }

Field phi0_field(const BaseSurface& base, const std::string& preset_or_expr, std::uint64_t seed) {
    const std::size_t n = base.node_count;
    if (preset_or_expr.empty() || preset_or_expr == "zero") return Field(n, 0.0);
    if (preset_or_expr == "random_smooth") {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        Field phi(n, 0.0);
        if (base.kind == SurfaceKind::Torus) {
            for (int k = 0; k <= 2; ++k) {
                for (int l = 0; l <= 2; ++l) {
                    if (k == 0 && l == 0) continue;
                    const double amp = 0.1 / (1.0 + k * k + l * l);
                    const double ca = amp * gauss(rng), cb = amp * gauss(rng);
                    for (std::size_t i = 0; i < n; ++i) {
                        const double phase = k * base.xs[i] + l * base.ys[i];
                        phi[i] += ca * std::cos(phase) + cb * std::sin(phase);
                    }
                }
            }
        } else {
            double c[8];
            for (double& v : c) v = 0.1 * gauss(rng);
            for (std::size_t i = 0; i < n; ++i) {
                const double x = base.pos[i][0], y = base.pos[i][1], z = base.pos[i][2];
                phi[i] = c[0] * x + c[1] * y + c[2] * z + c[3] * x * y + c[4] * y * z +
                         c[5] * z * x + c[6] * (x * x - y * y) + c[7] * (3.0 * z * z - 1.0);
            }
        }
        return phi;
    }

    const PhiExpression expr = PhiExpression::parse(preset_or_expr);
    const unsigned mask = expr.used_variables();
    if (base.kind == SurfaceKind::Torus && (mask & 0b1100u))
        throw ExpressionError("phi0 expression: lat/lon are sphere variables");
    if (base.kind == SurfaceKind::Sphere && (mask & 0b0011u))
        throw ExpressionError("phi0 expression: x/y are torus variables");

    Field phi(n);
    for (std::size_t i = 0; i < n; ++i) {
        double vars[4] = {0, 0, 0, 0};
        if (base.kind == SurfaceKind::Torus) {
            vars[0] = base.xs[i];
            vars[1] = base.ys[i];
        } else {
            const auto& p = base.pos[i];
            vars[2] = std::asin(std::clamp(p[2], -1.0, 1.0));  // latitude
            vars[3] = std::atan2(p[1], p[0]);                  // longitude
        }
        phi[i] = expr.eval(vars);
        if (!std::isfinite(phi[i]))
            throw ExpressionError("phi0 expression: non-finite value at a node");
    }
    return phi;
}

}  // namespace rf2d
