#pragma once

#include "crystalline/common.hpp"

namespace crystalline {

/// A smooth complex-valued function with pointwise derivatives of the orders
/// a caller may request. Distribution-by-function products (Leibniz) and
/// actions are written against this interface.
class SmoothFunction {
public:
    virtual ~SmoothFunction() = default;

    virtual cplx value(double x) const = 0;

    /// order-th derivative at x; order 0 is the value.
    virtual cplx derivative(double x, int order) const = 0;

    /// Highest derivative order available; -1 means unlimited.
    virtual int max_derivative_order() const { return -1; }
};

}  // namespace crystalline
