// Upper half-plane primitives: points, unit-determinant Mobius isometries,
// hyperbolic distance, translation lengths, and the ball/collar volume
// identities used by the thin-part estimates.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <utility>

namespace selberg {

// acosh(1+q) without cancellation for small q >= 0.
inline double acosh1p(double q) {
    if (q < 0) q = 0;
    return std::log1p(q + std::sqrt(q * (q + 2.0)));
}

struct Point {
    double x;
    double y;  // y > 0

    Point(double px, double py);
    static Point i() { return Point(0.0, 1.0); }
};

// Hyperbolic distance, cosh d = 1 + |z-w|^2 / (2 Im z Im w), evaluated in the
// equivalent form d = 2 asinh(|z-w| / (2 sqrt(Im z Im w))) which keeps full
// relative accuracy for nearly coincident points.
double dist(const Point& z, const Point& w);

// cosh(dist) - 1; cheap and exact where only the packing ratio matters.
double cosh_dist_minus_1(const Point& z, const Point& w);

// Real 2x2 unit-determinant matrix, sign-normalized so that the first entry
// within half the max magnitude is positive. Determinant drift beyond 1e-13
// is renormalized after products.
class Mobius {
public:
    Mobius();  // identity
    Mobius(double a, double b, double c, double d);
    explicit Mobius(const Eigen::Matrix2d& m);

    double a() const { return m_(0, 0); }
    double b() const { return m_(0, 1); }
    double c() const { return m_(1, 0); }
    double d() const { return m_(1, 1); }
    const Eigen::Matrix2d& matrix() const { return m_; }

    double trace() const { return m_(0, 0) + m_(1, 1); }
    Mobius inverse() const;
    Point apply(const Point& z) const;
    double displacement(const Point& z) const;  // dist(z, g z)

    bool is_identity(double tol = 1e-9) const;

    // 2 acosh(|tr|/2) for |tr| > 2, nullopt for elliptic/parabolic/identity.
    std::optional<double> translation_length() const;

    // Axis endpoints on the real boundary (attracting, repelling order not
    // guaranteed); nullopt unless hyperbolic.
    std::optional<std::pair<double, double>> axis_endpoints() const;

    friend Mobius operator*(const Mobius& x, const Mobius& y);

private:
    void normalize();
    Eigen::Matrix2d m_;
};

// Distance from z to the axis of a hyperbolic element; nullopt otherwise.
// Computed from the axis endpoints, independent of the displacement identity.
std::optional<double> axis_distance(const Mobius& g, const Point& z);

// Volume identities.
double ball_volume(double R);                  // cosh(R) - 1, R >= 0
double collar_volume(double ell, double d);    // 2 ell sinh(d)
std::optional<double> d_max(double ell, double L);  // acosh(e^L / (2 sinh(ell/2))), empty collar -> nullopt

}  // namespace selberg
