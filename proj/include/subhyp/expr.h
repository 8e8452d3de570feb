#pragma once

#include <memory>
#include <string>

namespace subhyp {

/// Arithmetic expression in the anchor coordinates ax, ay.
/// Supports + - * / ^, unary minus, the constants pi and e, and the functions abs, sqrt, exp,
/// log, sin, cos, tan, floor, pow, min, max, hypot, sgn, step, clamp(v,lo,hi) and
/// smoothstep(e0,e1,v).
class Expression {
public:
    /// Throws InputError with the offending position on a syntax error.
    static Expression parse(const std::string& text);

    double operator()(double ax, double ay) const;
    const std::string& text() const { return text_; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

}  // namespace subhyp
