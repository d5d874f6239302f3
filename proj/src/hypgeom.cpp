#include "selberg/hypgeom.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace selberg {

Point::Point(double px, double py) : x(px), y(py) {
    if (!(py > 0.0) || !std::isfinite(px) || !std::isfinite(py))
        throw std::invalid_argument("Point requires finite coordinates with y > 0");
}

double cosh_dist_minus_1(const Point& z, const Point& w) {
    const double dx = z.x - w.x;
    const double dy = z.y - w.y;
    return (dx * dx + dy * dy) / (2.0 * z.y * w.y);
}

double dist(const Point& z, const Point& w) {
    const double dx = z.x - w.x;
    const double dy = z.y - w.y;
    const double s = 0.5 * std::sqrt((dx * dx + dy * dy) / (z.y * w.y));
    return 2.0 * std::asinh(s);
}

Mobius::Mobius() : m_(Eigen::Matrix2d::Identity()) {}

Mobius::Mobius(double a, double b, double c, double d) {
    m_ << a, b, c, d;
    const double det = m_.determinant();
    if (!(det > 0.0) || std::fabs(det - 1.0) > 1e-6)
        throw std::invalid_argument("non-unit determinant: det = " + std::to_string(det));
    normalize();
}

Mobius::Mobius(const Eigen::Matrix2d& m) : Mobius(m(0, 0), m(0, 1), m(1, 0), m(1, 1)) {}

void Mobius::normalize() {
    const double det = m_.determinant();
    if (std::fabs(det - 1.0) > 1e-13) m_ /= std::sqrt(det);
    // Sign pivot: first entry whose magnitude reaches half the max. A
    // threshold relative to the max keeps the pivot choice stable under
    // rounding noise on entries that are exactly zero in the group.
    const double mx = m_.cwiseAbs().maxCoeff();
    const double* e = m_.data();  // column-major: a, c, b, d
    const int order[4] = {0, 2, 1, 3};
    for (int k = 0; k < 4; ++k) {
        const double v = e[order[k]];
        if (std::fabs(v) >= 0.5 * mx) {
            if (v < 0.0) m_ = -m_;
            break;
        }
    }
}

Mobius Mobius::inverse() const {
    Mobius r;
    r.m_ << m_(1, 1), -m_(0, 1), -m_(1, 0), m_(0, 0);
    r.normalize();
    return r;
}

Mobius operator*(const Mobius& x, const Mobius& y) {
    Mobius r;
    r.m_ = x.m_ * y.m_;
    r.normalize();
    return r;
}

Point Mobius::apply(const Point& z) const {
    // (az+b)/(cz+d) via one complex division
    const double cr = c() * z.x + d();
    const double ci = c() * z.y;
    const double den = cr * cr + ci * ci;
    const double nr = a() * z.x + b();
    const double ni = a() * z.y;
    return Point((nr * cr + ni * ci) / den, (ni * cr - nr * ci) / den);
}

double Mobius::displacement(const Point& z) const { return dist(z, apply(z)); }

bool Mobius::is_identity(double tol) const {
    return std::fabs(m_(0, 0) - 1.0) < tol && std::fabs(m_(1, 1) - 1.0) < tol &&
           std::fabs(m_(0, 1)) < tol && std::fabs(m_(1, 0)) < tol;
}

std::optional<double> Mobius::translation_length() const {
    const double half_tr = 0.5 * std::fabs(trace());
    if (half_tr <= 1.0) return std::nullopt;
    return 2.0 * acosh1p(half_tr - 1.0);
}

std::optional<std::pair<double, double>> Mobius::axis_endpoints() const {
    if (!translation_length()) return std::nullopt;
    // fixed points of (az+b)/(cz+d) on the real line: c x^2 + (d-a) x - b = 0
    const double A = c(), B = d() - a(), C = -b();
    if (std::fabs(A) < 1e-14) {
        // one fixed point at infinity; axis is the vertical line x = -C/B
        const double x0 = -C / B;
        return std::make_pair(x0, std::numeric_limits<double>::infinity());
    }
    // hyperbolic => disc = tr^2 - 4 > 0, so q below is never zero
    const double disc = B * B - 4.0 * A * C;
    const double sq = std::sqrt(std::max(disc, 0.0));
    const double q = -0.5 * (B + (B >= 0 ? sq : -sq));
    return std::make_pair(q / A, C / q);
}

std::optional<double> axis_distance(const Mobius& g, const Point& z) {
    auto ends = g.axis_endpoints();
    if (!ends) return std::nullopt;
    const double p = ends->first, q = ends->second;
    if (std::isinf(q)) {
        // vertical axis x = p: sinh(dist) = |x - p| / y
        return std::asinh(std::fabs(z.x - p) / z.y);
    }
    // Map the axis to the imaginary axis by w = (z-p)/(z-q); then
    // sinh(dist) = |Re w| / Im w.
    const double ar = z.x - p, ai = z.y;
    const double br = z.x - q, bi = z.y;
    const double den = br * br + bi * bi;
    const double wr = (ar * br + ai * bi) / den;
    const double wi = (ai * br - ar * bi) / den;
    return std::asinh(std::fabs(wr) / std::fabs(wi));
}

double ball_volume(double R) {
    if (R < 0.0) throw std::invalid_argument("ball_volume requires R >= 0");
    // cosh(R)-1 written to keep relative accuracy near R = 0
    const double s = std::sinh(0.5 * R);
    return 2.0 * s * s;
}

double collar_volume(double ell, double d) {
    if (!(ell > 0.0) || d < 0.0)
        throw std::invalid_argument("collar_volume requires ell > 0, d >= 0");
    return 2.0 * ell * std::sinh(d);
}

std::optional<double> d_max(double ell, double L) {
    if (!(ell > 0.0) || !(L > 0.0))
        throw std::invalid_argument("d_max requires ell > 0, L > 0");
    const double r = std::exp(L) / (2.0 * std::sinh(0.5 * ell));
    if (r < 1.0) return std::nullopt;  // empty collar
    return acosh1p(r - 1.0);
}

}  // namespace selberg
