// Spectral test functions and the transform chain h -> g -> g' -> K.
//
// Family B smooths the indicator of a window [a,b] of Laplace eigenvalues
// (erf closed forms in the eigenvalue variable, b <= 1); family H smooths the
// indicator of [alpha, beta] in the spectral parameter r (a >= 1/2), made even
// as H(r) = h(r) + h(-r), with a closed-form inverse Fourier transform. The
// point-pair kernel K comes from the integral transform of g' with the
// endpoint singularity removed by substitution.
#pragma once

#include "selberg/quadrature.hpp"

#include <complex>
#include <memory>
#include <string>

namespace selberg {

struct SpectralWindow {
    double a = 0.0;
    double b = 0.0;
    double alpha = 0.0;    // sqrt(max(a - 1/4, 0))
    double beta = 0.0;     // sqrt(max(b - 1/4, 0))
    double delta_b = 0.0;  // max(1/4 - b, 0), distance to the bulk spectrum

    SpectralWindow(double a_, double b_);
    // widened variant permitting a >= -1/2 (used by the shrunk-window fix)
    static SpectralWindow extended(double a_, double b_);

private:
    SpectralWindow() = default;
    void derive();
};

enum class Family { B, H };

class TestFunction {
public:
    static TestFunction family_b(const SpectralWindow& w, double t);  // requires b <= 1
    static TestFunction family_h(const SpectralWindow& w, double t);  // requires a >= 1/2

    Family family() const { return family_; }
    const SpectralWindow& window() const { return w_; }
    double t() const { return t_; }

    // hypothesis flags of the printed bounds (t >= 1/200 resp. 1/10 etc.);
    // evaluation outside them is allowed but reported
    bool within_bound_hypotheses() const;

    // family B smoothed indicator in the eigenvalue variable
    double f(double lambda) const;

    // even test function on the real axis (B: f(1/4+r^2); H: h(r)+h(-r))
    double h(double r) const;

    // test function at complex argument (quadrature over the window)
    std::complex<double> h(std::complex<double> r) const;

    // family H only: real value of h(iy) + h(-iy)
    double h_imag_axis(double y) const;

    // weight of an eigenvalue in the spectral sum (covers lambda < 1/4)
    double spectral_weight(double lambda) const;

    // inverse Fourier transform of the even test function and its derivative;
    // family H closed forms, family B certified real-axis quadrature
    double g(double u) const;
    double g_prime(double u) const;

    // quadrature route regardless of family (dual path for the closed forms)
    double g_quadrature(double u) const;
    double g_prime_quadrature(double u) const;

    // certified upper bound for int_{u}^{inf} |g'(v)| dv, used by kernel tails
    double gprime_tail_envelope(double u) const;

private:
    TestFunction(Family f, const SpectralWindow& w, double t);

    double g_numeric(double u, int parity) const;  // parity 0: cos, 1: r sin

    Family family_;
    SpectralWindow w_;
    double t_;
};

// s(rho) = exp(-rho^2) / (2 sqrt(pi) rho), the smoothed-step envelope
double step_envelope(double rho);

// difference |f_t - step| bound from the three-case envelope; `x` is the
// evaluation point and [lo, hi] the smoothed window in the same variable
double step_bound_cases(double x, double lo, double hi, double t);

// regularized indicator (1 inside, 1/2 at the endpoints, 0 outside)
double step_indicator(double x, double lo, double hi);

// --- kernel -----------------------------------------------------------------

struct KernelSettings {
    double rel_tol = 1e-12;     // refinement target of the K quadrature
    double tail_eps = 1e-12;    // certified tail fraction of the u-integral
    int initial_panels = 16;
    double rho_min = 1e-6;
    bool force_numeric_gprime = false;  // push closed forms through the numeric path
};

class KernelProfile {
public:
    KernelProfile(const TestFunction& tf, KernelSettings settings = {});

    const TestFunction& test_function() const { return tf_; }
    const KernelSettings& settings() const { return settings_; }

    // K(rho) by certified quadrature (family H uses the closed-form g',
    // family B the tabulated numeric g')
    Certified operator()(double rho) const;

    // dense spline of K over [rho_min, rho_max] for bulk evaluation
    CubicSpline tabulate(double rho_min, double rho_max, int nodes = 600) const;

private:
    double gp(double u) const;

    TestFunction tf_;
    KernelSettings settings_;
    CubicSpline gprime_tab_;  // family B only
    bool use_tab_ = false;
    double u_tab_max_ = 0.0;
    double tab_err_ = 0.0;  // measured spline-vs-quadrature error of g'
};

// --- printed bound shapes (single implicit constant each) -------------------
//
// Evaluators return the bound with constant 1; fitting utilities below
// estimate the constant on a grid.

double bound_gprime_b(double u, double t, const SpectralWindow& w, double r);
double bound_k_b(double rho, double t, const SpectralWindow& w, double r);
double bound_k_h(double rho, double t, const SpectralWindow& w, double r);
double bound_h_strip_h(double x, double y, double t, const SpectralWindow& w);
double bound_integral_b(double t);
double bound_integral_b_small(double t, const SpectralWindow& w);
double bound_integral_h(double t, const SpectralWindow& w);

struct FittedConstant {
    double coarse = 0.0;  // max ratio on the declared grid
    double fine = 0.0;    // max ratio after doubling the grid density
    bool stable(double slack = 0.2) const {
        return fine <= coarse * (1.0 + slack) && coarse > 0.0;
    }
};

// fits max |quantity(x)| / shape(x) on grid and on its refinement-by-2
FittedConstant fit_constant(const std::function<double(double)>& quantity,
                            const std::function<double(double)>& shape,
                            double lo, double hi, int n_coarse, bool log_grid = false);

// --- integral remainder ------------------------------------------------------

struct RemainderResult {
    Certified value;
    double envelope = 0.0;           // bound shape evaluated with constant 1
    std::string envelope_kind;
};

// Plancherel-side remainder: the smoothed window integral minus the sharp
// main term, so that spectral_sum/vol = main + remainder + geometric exactly.
RemainderResult integral_remainder(const TestFunction& tf);

// (1/4pi) integral over [max(a,1/4), max(b,1/4)] of tanh(pi sqrt(lambda-1/4))
double main_term(const SpectralWindow& w);

// full Plancherel integral of the smoothed test function (dual route for
// main_term + remainder)
Certified plancherel_integral(const TestFunction& tf);

}  // namespace selberg
