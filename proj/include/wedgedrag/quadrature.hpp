#pragma once

// Global adaptive Gauss-Kronrod (G10/K21) integration on a finite interval.
//
// The error estimate follows QUADPACK's qk21: the raw |K21 - G10| difference is rescaled
// against the interval's mean absolute deviation and floored at the rounding level.
// The interval with the largest error is bisected until the summed error meets
// max(abs_tol, rel_tol * |I|). Node and weight tables come from Boost.Math.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wedgedrag/errors.hpp"

namespace wedgedrag::quad {

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    std::size_t max_intervals = 400;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
};

/// Sum in fixed pairwise order; the result does not depend on how the terms were produced.
inline double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

namespace detail {

struct Panel {
    double a;
    double b;
    double value;
    double error;
    double abs_value;
};

template <class F>
Panel kronrod21(F& f, double a, double b) {
    using kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
    using gauss = boost::math::quadrature::gauss<double, 10>;
    const auto& x = kronrod::abscissa();
    const auto& wk = kronrod::weights();
    const auto& wg = gauss::weights();

    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv1[11];
    double fv2[11];
    const double fc = f(centre);
    double resk = wk[0] * fc;
    double resg = 0.0;
    double resabs = std::abs(resk);
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double dx = half * x[i];
        fv1[i] = f(centre - dx);
        fv2[i] = f(centre + dx);
        const double pair = fv1[i] + fv2[i];
        resk += wk[i] * pair;
        resabs += wk[i] * (std::abs(fv1[i]) + std::abs(fv2[i]));
        if (i % 2 == 1) resg += wg[i / 2] * pair;
    }
    const double reskh = 0.5 * resk;
    double resasc = wk[0] * std::abs(fc - reskh);
    for (std::size_t i = 1; i < x.size(); ++i) {
        resasc += wk[i] * (std::abs(fv1[i] - reskh) + std::abs(fv2[i] - reskh));
    }

    const double scale = std::abs(half);
    const double value = resk * half;
    resabs *= scale;
    resasc *= scale;
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
        err = std::max(50.0 * eps * resabs, err);
    }
    return {a, b, value, err, resabs};
}

}  // namespace detail

/// Integrates f over [a, b]. Throws ConvergenceError if the interval budget runs out.
template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {}) {
    if (a == b) return {};
    std::vector<detail::Panel> panels;
    panels.reserve(opt.max_intervals);
    panels.push_back(detail::kronrod21(f, a, b));
    std::size_t evaluations = 21;

    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (;;) {
        double total = 0.0;
        double err = 0.0;
        double abs_total = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total += panels[i].value;
            err += panels[i].error;
            abs_total += panels[i].abs_value;
            if (panels[i].error > panels[worst].error) worst = i;
        }
        const double target = std::max({opt.abs_tol, opt.rel_tol * std::abs(total),
                                         50.0 * eps * abs_total});
        if (err <= target) break;

        const detail::Panel p = panels[worst];
        const double mid = 0.5 * (p.a + p.b);
        const bool splittable = std::abs(p.b - p.a) > 128.0 * eps * std::max(std::abs(p.a), std::abs(p.b)) &&
                                mid != p.a && mid != p.b;
        if (panels.size() >= opt.max_intervals || !splittable) {
            throw ConvergenceError("adaptive quadrature did not converge on [" + std::to_string(a) +
                                       ", " + std::to_string(b) + "]: error estimate " +
                                       std::to_string(err) + " > target " + std::to_string(target),
                                   total, err);
        }
        panels[worst] = detail::kronrod21(f, p.a, mid);
        panels.push_back(detail::kronrod21(f, mid, p.b));
        evaluations += 42;
    }

    std::sort(panels.begin(), panels.end(),
              [](const detail::Panel& l, const detail::Panel& r) { return l.a < r.a; });
    std::vector<double> values;
    std::vector<double> errors;
    values.reserve(panels.size());
    errors.reserve(panels.size());
    for (const auto& p : panels) {
        values.push_back(p.value);
        errors.push_back(p.error);
    }
    return {pairwise_sum(values), pairwise_sum(errors), evaluations};
}

}  // namespace wedgedrag::quad
