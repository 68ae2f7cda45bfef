#pragma once

#include <memory>
#include <string>

#include "rf2d/surface.hpp"

namespace rf2d {

// Arithmetic over node coordinates with sin, cos, exp, numbers and pi.
// Variables: x, y on the torus (grid coordinates in [0,2π)); lat, lon on the
// sphere. Used for the phi0 field of an experiment config.
class PhiExpression {
public:
    static PhiExpression parse(const std::string& text);

    // vars: [x, y, lat, lon]
    double eval(const double vars[4]) const;
    unsigned used_variables() const { return used_mask_; }  // bit i: vars[i] referenced

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    unsigned used_mask_ = 0;
};

class ExpressionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Builds the initial conformal factor from a preset name ("zero",
// "random_smooth") or an expression string.
Field phi0_field(const BaseSurface& base, const std::string& preset_or_expr, std::uint64_t seed);

}  // namespace rf2d
