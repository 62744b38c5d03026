#pragma once

// Independent reference values for the tests. Nothing here calls the library's
// numerics; closed forms are written out directly and the recursive extension
// uses its own velocity quadrature.

#include <algorithm>
#include <cmath>
#include <functional>

#include "rotenberg/model.hpp"

namespace oracle {

inline rotenberg::Model make_model(double a, double b, double p, double q, rotenberg::BuiltinKernel kind,
                                   std::size_t nv) {
    return rotenberg::Model({a, b, p, q}, rotenberg::VelocitySpace::uniform(a, b, nv),
                            rotenberg::Kernel::builtin(kind, a, b));
}

using Kernel2 = std::function<double(double w, double v)>;
using Field2 = std::function<double(double x, double v)>;

/// Boundary extension at a single point, by recursion over strips:
///   f~(y, v) = p int (w/v) k(w, v) f~(1 + y w/v, w) dw + q f~(1 + y, v),  y <= 0,
/// with a composite midpoint rule of `nq` points on (a, b).
inline double extension_point(double a, double b, double p, double q, const Kernel2& k, const Field2& f,
                              double y, double v, int nq = 400) {
    if (y > 0.0) {
        return f(y, v);
    }
    const double h = (b - a) / nq;
    double branch = 0.0;
    if (p != 0.0) {
        for (int i = 0; i < nq; ++i) {
            const double w = a + (i + 0.5) * h;
            branch += (w / v) * k(w, v) * extension_point(a, b, p, q, k, f, 1.0 + y * w / v, w, nq) * h;
        }
    }
    const double inherit = q != 0.0 ? extension_point(a, b, p, q, k, f, 1.0 + y, v, nq) : 0.0;
    return p * branch + q * inherit;
}

/// Mass of the constant kernel on (a, b) in [lo, hi].
inline double constant_kernel_mass(double a, double b, double lo, double hi) {
    lo = std::clamp(lo, a, b);
    hi = std::clamp(hi, a, b);
    return hi > lo ? (hi - lo) / (b - a) : 0.0;
}

/// T*(2/b) applied to the indicator of Omega at (x, v) for the constant kernel
/// on (a, b), written out case by case. X = x + 2v/b - 1 is the mother's
/// maturity at time 2/b.
inline double dual_two_steps_constant(double a, double b, double p, double q, double x, double v) {
    const double s = 1.0 / b;
    const double r = p + q;
    const double X = x + 2.0 * s * v - 1.0;
    if (X < 0.0) {
        return 1.0;
    }
    if (X < s * v) {
        return r;
    }
    // Daughters with w < v/X have not divided again by time 2/b.
    const double cut = v / X;
    double out = p * constant_kernel_mass(a, b, a, cut) + p * r * constant_kernel_mass(a, b, cut, b);
    out += X < 1.0 ? q : q * r;
    return out;
}

/// Cell average over [lo, hi] of the stationary velocity density 3v / (4 sqrt(1 - v)).
inline double three_quarters_stationary_average(double lo, double hi) {
    auto F = [](double v) {
        const double u = 1.0 - v;
        return 0.75 * (-2.0 * std::sqrt(u) + (2.0 / 3.0) * u * std::sqrt(u));
    };
    return (F(hi) - F(lo)) / (hi - lo);
}

inline double three_quarters_stationary(double v) { return 0.75 * v / std::sqrt(1.0 - v); }

/// Cell average over [lo, hi] of 1 / (v ln 2) on V = (1, 2).
inline double invariant_12_average(double lo, double hi) {
    return std::log(hi / lo) / (std::log(2.0) * (hi - lo));
}

/// Largest p + q power the a-priori estimate allows at time t (small-t law).
inline double small_t_norm(double p, double q) { return std::max(1.0, p + q); }

}  // namespace oracle
