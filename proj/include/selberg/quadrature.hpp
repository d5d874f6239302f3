// Certified one-dimensional quadrature: composite Gauss-Legendre panels with
// refinement doubling. The error field is the observed refinement delta, so a
// value is "certified" in the sense that two successive node doublings agree.
#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace selberg {

// Thrown when a quadrature or truncation certificate cannot be met.
class CertificationError : public std::runtime_error {
public:
    explicit CertificationError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown on malformed user input (files, parameters out of range).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

struct Certified {
    double value = 0.0;
    double err = 0.0;  // bound on |value - exact|

    Certified() = default;
    Certified(double v, double e) : value(v), err(e) {}
    Certified operator+(const Certified& o) const { return {value + o.value, err + o.err}; }
    Certified operator-(const Certified& o) const { return {value - o.value, err + o.err}; }
};

// Gauss-Legendre nodes/weights on [-1,1], cached per order.
const std::vector<double>& gauss_legendre_nodes(int order);
const std::vector<double>& gauss_legendre_weights(int order);

// Fixed composite rule: `panels` equal panels of GL(order) on [a,b].
double integrate_fixed(const std::function<double(double)>& f, double a, double b,
                       int panels, int order = 16);

// Composite GL with panel doubling until successive estimates differ by less
// than max(abs_tol, rel_tol*|I|). Throws CertificationError if max_doublings
// is exhausted. `initial_panels` should resolve the integrand's finest feature
// at least coarsely (oscillation period, Gaussian width).
Certified integrate(const std::function<double(double)>& f, double a, double b,
                    double abs_tol, double rel_tol, int initial_panels = 8,
                    int max_doublings = 12);

// Same, with interior breakpoints (kinks); each subinterval converges on its own.
Certified integrate_broken(const std::function<double(double)>& f, double a, double b,
                           const std::vector<double>& breakpoints, double abs_tol,
                           double rel_tol, int initial_panels = 8, int max_doublings = 12);

// Natural cubic spline through (x_i, y_i), x strictly increasing.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double min_x() const { return x_.front(); }
    double max_x() const { return x_.back(); }
    bool empty() const { return x_.empty(); }

private:
    std::vector<double> x_, y_, m_;  // m_ = second derivatives
};

}  // namespace selberg
