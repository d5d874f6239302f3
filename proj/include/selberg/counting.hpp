// Eigenvalue-counting envelopes in terms of the genus: window upper bounds,
// the small-eigenvalue power saving with c = 2^-15, the two-sided remainder
// band around the Plancherel main term, multiplicity and j-th eigenvalue
// envelopes, and a checker applying them to an ingested spectrum.
#pragma once

#include "selberg/transforms.hpp"

#include <span>
#include <string>
#include <vector>

namespace selberg {

// exponent constant of the small-eigenvalue envelope, exact binary value
inline constexpr double kSmallEigC = 0x1p-15;

inline double surface_volume(double g) { return 2.0 * M_PI * (2.0 * g - 2.0); }

// closed endpoints, multiplicities counted; spectrum must be sorted
long count_window(std::span<const double> spectrum, double a, double b);

// vol * C * (b - a + sqrt((b+1)/log g))
double upper_bound_envelope(double g, double a, double b, double C);

// vol * C * g^{-c (1/4 - b)^2} / (log g)^{3/4}; requires b <= 1/4
double small_eigenvalue_envelope(double g, double b, double C);

struct CountingEnvelope {
    double g = 0.0;
    double a = 0.0, b = 0.0;
    double main = 0.0;         // Plancherel term of the window
    double lower_slack = 0.0;  // <= 0
    double upper_slack = 0.0;  // >= 0
    double C = 1.0;
};

CountingEnvelope equivalent_envelope(double g, double a, double b, double C);

// bound on the multiplicity m(lambda); minimum of the generic and, for
// lambda < 1/4, the power-saving variant with eps = 1/4 - lambda
double multiplicity_envelope(double g, double lambda, double C);
double multiplicity_envelope_small(double g, double eps, double C);

struct JthInterval {
    double center = 0.0;  // j / g
    double slack = 0.0;   // C (1 + sqrt((j/g) log(2 + j/g)))
    double lo = 0.0;      // max(0, center - slack)
    double hi = 0.0;
};

JthInterval jth_envelope(double g, double j, double C);

struct EnvelopeConstants {
    double upper = 1.0;
    double equiv = 1.0;
    double mult = 1.0;
    double jth = 1.0;
};

struct CheckRow {
    std::string kind;   // "window-upper", "window-band", "small-eig", "jth"
    double p1 = 0.0, p2 = 0.0;  // window [a,b] or (j, lambda_j)
    double observed = 0.0;
    double bound_lo = 0.0;
    double bound_hi = 0.0;
    bool pass = true;
};

struct SpectrumCheckConfig {
    double b_max = 10.0;
    int n_b = 8;        // geometric grid in b + 1
    int n_width = 4;    // linear grid of window widths per b
    long j_stride = 0;  // 0: automatic (~32 probes)
    double g_min_warn = 2.0;
};

struct SpectrumCheckReport {
    double g = 0.0;
    EnvelopeConstants constants;
    std::vector<CheckRow> rows;
    long failures = 0;
    bool genus_warning = false;  // g below the configured floor for the regime
};

SpectrumCheckReport check_spectrum(std::span<const double> spectrum, double g,
                                   const EnvelopeConstants& constants,
                                   const SpectrumCheckConfig& config = {});

}  // namespace selberg
