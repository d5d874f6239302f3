#include "selberg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace selberg {

namespace {

struct GLRule {
    std::vector<double> x, w;
};

// Newton iteration on Legendre polynomials, seeded with the Chebyshev-like
// root approximation. Standard construction, accurate to machine precision.
GLRule make_rule(int n) {
    GLRule r;
    r.x.resize(n);
    r.w.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::fabs(z - z1) < 1e-15) break;
        }
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        r.w[n - 1 - i] = r.w[i];
    }
    return r;
}

const GLRule& rule(int order) {
    static std::mutex mu;
    static std::map<int, GLRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, make_rule(order)).first;
    return it->second;
}

}  // namespace

const std::vector<double>& gauss_legendre_nodes(int order) { return rule(order).x; }
const std::vector<double>& gauss_legendre_weights(int order) { return rule(order).w; }

double integrate_fixed(const std::function<double(double)>& f, double a, double b,
                       int panels, int order) {
    const GLRule& r = rule(order);
    const double h = (b - a) / panels;
    // compensated summation keeps the roundoff floor independent of the
    // panel count, so refinement certification does not dead-end on noise
    double total = 0.0, comp = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        double s = 0.0, sc = 0.0;
        for (int i = 0; i < order; ++i) {
            const double term = r.w[i] * f(mid + 0.5 * h * r.x[i]) - sc;
            const double tmp = s + term;
            sc = (tmp - s) - term;
            s = tmp;
        }
        const double term = 0.5 * h * s - comp;
        const double tmp = total + term;
        comp = (tmp - total) - term;
        total = tmp;
    }
    return total;
}

Certified integrate(const std::function<double(double)>& f, double a, double b,
                    double abs_tol, double rel_tol, int initial_panels,
                    int max_doublings) {
    if (!(b > a)) return {0.0, 0.0};
    int panels = std::max(1, initial_panels);
    double prev = integrate_fixed(f, a, b, panels);
    for (int k = 0; k < max_doublings; ++k) {
        panels *= 2;
        double cur = integrate_fixed(f, a, b, panels);
        double delta = std::fabs(cur - prev);
        if (delta <= std::max(abs_tol, rel_tol * std::fabs(cur))) return {cur, delta};
        prev = cur;
    }
    throw CertificationError("quadrature failed to certify tolerance on [" +
                             std::to_string(a) + ", " + std::to_string(b) + "]");
}

Certified integrate_broken(const std::function<double(double)>& f, double a, double b,
                           const std::vector<double>& breakpoints, double abs_tol,
                           double rel_tol, int initial_panels, int max_doublings) {
    std::vector<double> pts{a};
    for (double p : breakpoints)
        if (p > a && p < b) pts.push_back(p);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    Certified total;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] - pts[i] < 1e-300) continue;
        total = total + integrate(f, pts[i], pts[i + 1], abs_tol / (pts.size() - 1),
                                  rel_tol, initial_panels, max_doublings);
    }
    return total;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const size_t n = x_.size();
    if (n < 3 || y_.size() != n) throw InputError("spline needs >= 3 increasing nodes");
    for (size_t i = 0; i + 1 < n; ++i)
        if (!(x_[i + 1] > x_[i])) throw InputError("spline abscissae must increase");
    // Thomas solve of the natural-spline tridiagonal system.
    std::vector<double> diag(n, 2.0), off(n, 0.0), rhs(n, 0.0);
    m_.assign(n, 0.0);
    for (size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1];
        const double h1 = x_[i + 1] - x_[i];
        diag[i] = 2.0 * (h0 + h1);
        off[i] = h1;
        rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    }
    // forward sweep on the interior block, natural ends (m_0 = m_{n-1} = 0)
    for (size_t i = 2; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1];
        const double w = h0 / diag[i - 1];
        diag[i] -= w * off[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for (size_t i = n - 2; i >= 1; --i) {
        m_[i] = (rhs[i] - off[i] * m_[i + 1]) / diag[i];
        if (i == 1) break;
    }
}

double CubicSpline::operator()(double x) const {
    const size_t n = x_.size();
    if (x <= x_.front()) x = x_.front();
    if (x >= x_.back()) x = x_.back();
    size_t lo = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin();
    if (lo == 0) lo = 1;
    if (lo >= n) lo = n - 1;
    const size_t i = lo - 1;
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - x) / h;
    const double B = (x - x_[i]) / h;
    return A * y_[i] + B * y_[i + 1] +
           ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
}

}  // namespace selberg
