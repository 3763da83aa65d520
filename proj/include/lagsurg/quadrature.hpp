#pragma once
// Gauss-Legendre quadrature: node computation by Newton iteration on P_n,
// plus composite 1D/2D helpers. Nodes are cached per order.

#include <cmath>
#include <functional>
#include <map>
#include <vector>

namespace lagsurg {

struct GaussRule {
    std::vector<double> x;  // nodes on [-1, 1]
    std::vector<double> w;
};

inline const GaussRule& gauss_rule(int n) {
    static std::map<int, GaussRule> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n(x) = 0.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return cache.emplace(n, std::move(r)).first->second;
}

/// Composite Gauss-Legendre on [a,b] with `panels` equal panels of order `order`.
template <class F>
double integrate_1d(F&& f, double a, double b, int panels = 16, int order = 16) {
    const GaussRule& g = gauss_rule(order);
    double total = 0.0;
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * h;
        double mid = lo + 0.5 * h, half = 0.5 * h;
        double s = 0.0;
        for (int i = 0; i < order; ++i) s += g.w[i] * f(mid + half * g.x[i]);
        total += s * half;
    }
    return total;
}

/// Same, but panel boundaries include the sorted interior breakpoints.
template <class F>
double integrate_1d_breaks(F&& f, double a, double b, const std::vector<double>& breaks,
                           int panels_per_span = 8, int order = 16) {
    std::vector<double> pts{a};
    for (double t : breaks)
        if (t > a && t < b) pts.push_back(t);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    double total = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        total += integrate_1d(f, pts[i], pts[i + 1], panels_per_span, order);
    return total;
}

/// Tensor-product rule on [a0,b0]x[a1,b1].
template <class F>
double integrate_2d(F&& f, double a0, double b0, double a1, double b1, int panels = 8,
                    int order = 12) {
    auto outer = [&](double u) {
        return integrate_1d([&](double v) { return f(u, v); }, a1, b1, panels, order);
    };
    return integrate_1d(outer, a0, b0, panels, order);
}

}  // namespace lagsurg
