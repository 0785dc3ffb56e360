#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cfloat>
#include <cmath>
#include <string>

#include "hsp/errors.hpp"

namespace hsp::quad {

inline constexpr double kAbsTol = 1e-12;
inline constexpr double kRelTol = 1e-12;
inline constexpr unsigned kMaxDepth = 40;

namespace detail {

struct Acc {
    double err = 0.0, l1 = 0.0;
};

// Bisection over the 31-point Kronrod rule. Boost's own recursion (1.74) compares the
// [-1,1] error of a subinterval against a tolerance already scaled to that subinterval,
// so it never settles on short intervals; the rule itself is fine. A leaf whose error is
// at roundoff level for its own L1 is also done, halving cannot improve it.
template <class F>
double bisect(F& f, double a, double b, double tol, unsigned depth, Acc& acc) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    double err = 0.0, l1 = 0.0;
    double r = GK::integrate(f, a, b, 0, 0.0, &err, &l1);
    err *= 0.5 * (b - a);
    if (!(err > tol) || err <= 8 * DBL_EPSILON * l1 || depth == 0 || !std::isfinite(r)) {
        acc.err += err;
        acc.l1 += l1;
        return r;
    }
    double m = 0.5 * (a + b);
    return bisect(f, a, m, 0.5 * tol, depth - 1, acc) + bisect(f, m, b, 0.5 * tol, depth - 1, acc);
}

}  // namespace detail

// Adaptive Gauss-Kronrod on [a,b]. Accepts when the error estimate is below
// kAbsTol or 1e-10 relative to the L1 norm of the integrand.
template <class F>
double integrate(F&& f, double a, double b, const char* what = "integral") {
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    double e0 = 0.0, l0 = 0.0;
    GK::integrate(f, a, b, 0, 0.0, &e0, &l0);
    detail::Acc acc;
    double r = detail::bisect(f, a, b, std::max(kAbsTol, kRelTol * l0), kMaxDepth, acc);
    if (!std::isfinite(r) || acc.err > std::max(kAbsTol, 1e-10 * acc.l1))
        throw IntegrationError(std::string(what) + ": tolerance not reached (estimate " + std::to_string(acc.err) + ")");
    return r;
}

}  // namespace hsp::quad
