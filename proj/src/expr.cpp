#include "subhyp/expr.h"

#include "subhyp/errors.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace subhyp {

struct Expression::Node {
    enum class Kind { number, var_x, var_y, neg, add, sub, mul, div, pow, call };
    Kind kind = Kind::number;
    double value = 0.0;
    std::string name;
    std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

struct FunctionSpec {
    const char* name;
    int arity;
};

constexpr FunctionSpec kFunctions[] = {
    {"abs", 1}, {"sqrt", 1}, {"exp", 1},   {"log", 1}, {"sin", 1},   {"cos", 1},        {"tan", 1},
    {"floor", 1}, {"sgn", 1}, {"step", 1}, {"pow", 2}, {"min", 2},   {"max", 2},        {"hypot", 2},
    {"clamp", 3}, {"smoothstep", 3},
};

NodePtr make(Node::Kind k, std::vector<NodePtr> args = {}, double v = 0.0, std::string name = {}) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->args = std::move(args);
    n->value = v;
    n->name = std::move(name);
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse() {
        NodePtr n = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw InputError("expression '" + s_ + "': " + what + " at position " + std::to_string(pos_));
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr n = term();
        for (;;) {
            if (accept('+')) {
                n = make(Node::Kind::add, {n, term()});
            } else if (accept('-')) {
                n = make(Node::Kind::sub, {n, term()});
            } else {
                return n;
            }
        }
    }

    NodePtr term() {
        NodePtr n = unary();
        for (;;) {
            if (accept('*')) {
                n = make(Node::Kind::mul, {n, unary()});
            } else if (accept('/')) {
                n = make(Node::Kind::div, {n, unary()});
            } else {
                return n;
            }
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Node::Kind::neg, {unary()});
        if (accept('+')) return unary();
        NodePtr base = primary();
        if (accept('^')) return make(Node::Kind::pow, {base, unary()});
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        char c = s_[pos_];
        if (accept('(')) {
            NodePtr n = expr();
            if (!accept(')')) fail("expected ')'");
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos_ += static_cast<std::size_t>(end - begin);
            return make(Node::Kind::number, {}, v);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            std::string id = s_.substr(start, pos_ - start);
            if (accept('(')) {
                std::vector<NodePtr> args;
                if (!accept(')')) {
                    do {
                        args.push_back(expr());
                    } while (accept(','));
                    if (!accept(')')) fail("expected ')'");
                }
                auto it = std::find_if(std::begin(kFunctions), std::end(kFunctions),
                                       [&](const FunctionSpec& f) { return id == f.name; });
                if (it == std::end(kFunctions)) fail("unknown function '" + id + "'");
                if (static_cast<int>(args.size()) != it->arity) fail("wrong argument count for '" + id + "'");
                return make(Node::Kind::call, std::move(args), 0.0, id);
            }
            if (id == "ax" || id == "x") return make(Node::Kind::var_x);
            if (id == "ay" || id == "y") return make(Node::Kind::var_y);
            if (id == "pi") return make(Node::Kind::number, {}, M_PI);
            if (id == "e") return make(Node::Kind::number, {}, M_E);
            fail("unknown identifier '" + id + "'");
        }
        fail("unexpected character");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

double call(const std::string& f, const double* a) {
    if (f == "abs") return std::abs(a[0]);
    if (f == "sqrt") return std::sqrt(a[0]);
    if (f == "exp") return std::exp(a[0]);
    if (f == "log") return std::log(a[0]);
    if (f == "sin") return std::sin(a[0]);
    if (f == "cos") return std::cos(a[0]);
    if (f == "tan") return std::tan(a[0]);
    if (f == "floor") return std::floor(a[0]);
    if (f == "sgn") return (a[0] > 0) - (a[0] < 0);
    if (f == "step") return a[0] >= 0 ? 1.0 : 0.0;
    if (f == "pow") return std::pow(a[0], a[1]);
    if (f == "min") return std::min(a[0], a[1]);
    if (f == "max") return std::max(a[0], a[1]);
    if (f == "hypot") return std::hypot(a[0], a[1]);
    if (f == "clamp") return std::clamp(a[0], a[1], a[2]);
    // smoothstep(e0, e1, v): 0 at e0, 1 at e1, cubic in between; e0 > e1 allowed.
    double t = std::clamp((a[2] - a[0]) / (a[1] - a[0]), 0.0, 1.0);
    return t * t * (3 - 2 * t);
}

double eval(const Node& n, double x, double y) {
    switch (n.kind) {
        case Node::Kind::number: return n.value;
        case Node::Kind::var_x: return x;
        case Node::Kind::var_y: return y;
        case Node::Kind::neg: return -eval(*n.args[0], x, y);
        case Node::Kind::add: return eval(*n.args[0], x, y) + eval(*n.args[1], x, y);
        case Node::Kind::sub: return eval(*n.args[0], x, y) - eval(*n.args[1], x, y);
        case Node::Kind::mul: return eval(*n.args[0], x, y) * eval(*n.args[1], x, y);
        case Node::Kind::div: return eval(*n.args[0], x, y) / eval(*n.args[1], x, y);
        case Node::Kind::pow: return std::pow(eval(*n.args[0], x, y), eval(*n.args[1], x, y));
        case Node::Kind::call: {
            double a[3] = {0, 0, 0};
            for (std::size_t i = 0; i < n.args.size(); ++i) a[i] = eval(*n.args[i], x, y);
            return call(n.name, a);
        }
    }
    return 0.0;
}

}  // namespace

Expression Expression::parse(const std::string& text) {
    Expression e;
    e.root_ = Parser(text).parse();
    e.text_ = text;
    return e;
}

double Expression::operator()(double ax, double ay) const { return eval(*root_, ax, ay); }

}  // namespace subhyp
