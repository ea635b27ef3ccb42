#pragma once

#include "qobesity/errors.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace qobesity::quadrature {

struct Options {
    double abs_tol = 1e-10;
    std::size_t max_evaluations = 200000;
    int max_depth = 60;
};

struct Result {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
};

/// Adaptive Simpson with Richardson correction. The interval is first split
/// at `breakpoints` (sorted, inside (a, b)); the tolerance is shared among the
/// pieces in proportion to their length. Throws QuadratureFailure when the
/// evaluation budget runs out before every panel meets its tolerance.
template <typename F>
Result adaptive_simpson(F&& f, double a, double b, const Options& opt = {},
                        std::span<const double> breakpoints = {}) {
    struct Panel {
        double a, b, fa, fm, fb, whole, tol;
        int depth;
    };

    Result res;
    auto eval = [&](double x) {
        ++res.evaluations;
        return static_cast<double>(f(x));
    };
    auto simpson = [](double a0, double b0, double fa, double fm, double fb) {
        return (b0 - a0) / 6.0 * (fa + 4.0 * fm + fb);
    };

    std::vector<double> edges{a};
    for (double x : breakpoints)
        if (x > edges.back() && x < b)
            edges.push_back(x);
    edges.push_back(b);

    std::vector<Panel> stack;
    const double length = b - a;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const double lo = edges[k], hi = edges[k + 1];
        const double m = 0.5 * (lo + hi);
        const double fa = eval(lo), fm = eval(m), fb = eval(hi);
        stack.push_back({lo, hi, fa, fm, fb, simpson(lo, hi, fa, fm, fb),
                         opt.abs_tol * (hi - lo) / length, 0});
    }

    bool budget_hit = false;
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        const double m = 0.5 * (p.a + p.b);
        const double lm = 0.5 * (p.a + m), rm = 0.5 * (m + p.b);
        const double flm = eval(lm), frm = eval(rm);
        const double left = simpson(p.a, m, p.fa, flm, p.fm);
        const double right = simpson(m, p.b, p.fm, frm, p.fb);
        const double delta = left + right - p.whole;
        const bool converged = std::abs(delta) <= 15.0 * p.tol;
        if (converged || p.depth >= opt.max_depth || res.evaluations + 2 > opt.max_evaluations) {
            if (!converged)
                budget_hit = true;
            res.value += left + right + delta / 15.0;
            res.error_estimate += std::abs(delta) / 15.0;
            continue;
        }
        stack.push_back({p.a, m, p.fa, flm, p.fm, left, 0.5 * p.tol, p.depth + 1});
        stack.push_back({m, p.b, p.fm, frm, p.fb, right, 0.5 * p.tol, p.depth + 1});
    }

    if (budget_hit && res.error_estimate > opt.abs_tol)
        throw Error(ErrorCode::QuadratureFailure,
                    "tolerance " + std::to_string(opt.abs_tol) + " not reached within " +
                        std::to_string(opt.max_evaluations) + " evaluations (estimate " +
                        std::to_string(res.error_estimate) + ")");
    return res;
}

/// Breakpoints accumulating geometrically toward `end` from the left, down
/// to a width of `finest`. Used to resolve sharp endpoint features.
inline std::vector<double> endpoint_breakpoints(double start, double end, double finest) {
    std::vector<double> pts;
    double width = 0.5 * (end - start);
    while (width > finest) {
        pts.push_back(end - width);
        width *= 0.5;
    }
    return pts;
}

} // namespace qobesity::quadrature
