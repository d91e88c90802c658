#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace mcr {

// Dense univariate polynomials, coefficients in ascending degree order.
using Poly = std::vector<double>;

inline double poly_eval(const Poly& c, double x) {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
}

inline Poly poly_add(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

inline Poly poly_sub(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return r;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

inline Poly poly_scale(const Poly& a, double s) {
    Poly r = a;
    for (double& c : r) c *= s;
    return r;
}

inline Poly poly_derivative(const Poly& a) {
    if (a.size() <= 1) return {};
    Poly r(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i)
        r[i - 1] = a[i] * static_cast<double>(i);
    return r;
}

/// Drop leading coefficients that are negligible against the largest one.
inline Poly poly_trim(Poly a, double rel = 1e-14) {
    double max_c = 0.0;
    for (double c : a) max_c = std::max(max_c, std::abs(c));
    const double cut = rel * max_c;
    while (a.size() > 1 && std::abs(a.back()) <= cut) a.pop_back();
    if (a.size() == 1 && std::abs(a[0]) <= cut) a[0] = 0.0;
    return a;
}

/// Coefficients of p(center + t) (Taylor shift by repeated synthetic
/// division).
inline Poly poly_shift(Poly a, double center) {
    const std::size_t n = a.size();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = n - 1; i-- > k;) a[i] += center * a[i + 1];
    return a;
}

/// Coefficients of p(h * t).
inline Poly poly_stretch(Poly a, double h) {
    double f = 1.0;
    for (std::size_t i = 1; i < a.size(); ++i) {
        f *= h;
        a[i] *= f;
    }
    return a;
}

namespace detail {

inline void bisect_root(const Poly& c, double lo, double hi, double f_lo,
                        double x_tol, std::vector<double>& out) {
    for (int it = 0; it < 200 && hi - lo > x_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = poly_eval(c, mid);
        if (fm == 0.0) {
            out.push_back(mid);
            return;
        }
        if ((f_lo < 0.0) != (fm < 0.0)) hi = mid;
        else {
            lo = mid;
            f_lo = fm;
        }
    }
    out.push_back(0.5 * (lo + hi));
}

}  // namespace detail

/// All real roots of the polynomial in [lo, hi], found by the derivative
/// chain: between consecutive critical points the polynomial is monotone,
/// so a sign change pins exactly one root. Near-zero values at critical
/// points are reported as (double) roots.
inline std::vector<double> poly_roots_in(const Poly& poly, double lo, double hi,
                                         double x_tol) {
    std::vector<double> out;
    const Poly c = poly_trim(poly);
    if (c.size() <= 1 || lo > hi) return out;
    if (c.size() == 2) {
        if (c[1] != 0.0) {
            const double r = -c[0] / c[1];
            if (r >= lo - x_tol && r <= hi + x_tol)
                out.push_back(std::clamp(r, lo, hi));
        }
        return out;
    }
    std::vector<double> brk = poly_roots_in(poly_derivative(c), lo, hi, x_tol);
    brk.insert(brk.begin(), lo);
    brk.push_back(hi);
    std::sort(brk.begin(), brk.end());

    // Magnitude scale over the interval for the "effectively zero" band.
    const double xm = std::max({std::abs(lo), std::abs(hi), 1.0});
    double scale = 0.0, xpow = 1.0;
    for (double coeff : c) {
        scale += std::abs(coeff) * xpow;
        xpow *= xm;
    }
    const double f_zero = 1e-13 * scale;

    double prev_x = brk[0];
    double prev_f = poly_eval(c, prev_x);
    if (std::abs(prev_f) <= f_zero) out.push_back(prev_x);
    for (std::size_t i = 1; i < brk.size(); ++i) {
        const double x = brk[i];
        if (x <= prev_x) continue;
        const double f = poly_eval(c, x);
        if (std::abs(f) <= f_zero) {
            out.push_back(x);
        } else if (std::abs(prev_f) > f_zero && (prev_f < 0.0) != (f < 0.0)) {
            detail::bisect_root(c, prev_x, x, prev_f, x_tol, out);
        }
        prev_x = x;
        prev_f = f;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [&](double a, double b) { return b - a <= x_tol; }),
              out.end());
    return out;
}

}  // namespace mcr
