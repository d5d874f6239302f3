// Assembly of the four terms of the trace identity on an explicit surface:
// spectral sum over an ingested spectrum, topological main term, smoothed
// window remainder, and the Monte-Carlo geometric orbit-sum term with a
// certified truncation radius and a thick/thin split.
#pragma once

#include "selberg/fuchsian.hpp"
#include "selberg/transforms.hpp"

#include <optional>
#include <string>
#include <vector>

namespace selberg {

struct SurfaceModel {
    FuchsianGroup group;
    std::optional<std::vector<double>> spectrum;  // nondecreasing, lambda_0 = 0
    double lambda_cut = 0.0;                      // completeness horizon of the spectrum
    std::string id = "surface";

    explicit SurfaceModel(FuchsianGroup g) : group(std::move(g)) {}

    int genus() const { return group.genus(); }
    double volume() const { return group.volume(); }
    void set_spectrum(std::vector<double> values, double cut);

    // smallest primitive geodesic length, from the base-point enumeration
    double systole() const;
};

struct SpectralSum {
    double value = 0.0;
    double truncation_bound = 0.0;  // bound on the dropped summands
    long terms_used = 0;
    double lambda_stop = 0.0;
};

SpectralSum spectral_side(const std::vector<double>& spectrum, const TestFunction& tf);

// bound on the spectral-sum content past lambda_cut, from a density ceiling of
// twice the Weyl slope times the erf tail of the test function
double spectral_tail_bound(const TestFunction& tf, double volume, double lambda_cut);

struct GeometricOptions {
    double L = 1.0;                  // thin/thick split threshold
    int n_samples = 4000;
    std::uint64_t seed = 1;
    int threads = 1;
    double cert_rel_target = 1e-6;   // requested relative truncation certificate
    double cert_rel_max = 1e-4;      // reject if even this cannot be certified
    std::size_t max_kept_elements = 30'000'000;  // memory budget of the orbit list
};

struct TruncationCertificate {
    double r_trunc = 0.0;        // kernel sum truncated at d(z, gamma z) <= r_trunc
    double tail_abs = 0.0;       // certified bound on the dropped tail
    double tail_rel = 0.0;       // tail_abs / |estimate|
    double fitted_kernel_c = 0.0;  // fitted constant of the kernel decay bound
    double counting_r = 0.0;     // 2 * injectivity-radius lower bound used for shell counts
    bool met_target = false;
};

struct GeometricTerm {
    double estimate = 0.0;  // (1/vol) integral over D of the orbit kernel sum
    double sigma = 0.0;     // Monte-Carlo standard error
    int n = 0;
    double L = 0.0;
    double rk_plus = 0.0;    // contribution of samples with injrad >= L
    double rk_minus = 0.0;   // contribution of samples with injrad < L
    double sigma_plus = 0.0;
    double sigma_minus = 0.0;
    long n_thin = 0;
    bool thin_certified_empty = false;  // L below the certified injectivity radius
    TruncationCertificate cert;
    double domain_volume_estimate = 0.0;
    std::vector<double> per_sample;     // kernel sums, sample order (reduction input)
    std::vector<double> min_displacement;  // per-sample minimal orbit displacement
};

GeometricTerm geometric_term(const SurfaceModel& surface, const TestFunction& tf,
                             const GeometricOptions& opts);

// several kernels over one shared sample set and orbit enumeration (window
// additivity at matched samples, multi-window tables)
std::vector<GeometricTerm> geometric_term_multi(const SurfaceModel& surface,
                                                const std::vector<TestFunction>& tfs,
                                                const GeometricOptions& opts);

struct TraceReport {
    std::string surface_id;
    Family family;
    double window_a = 0.0, window_b = 0.0;
    double t = 0.0;
    double volume = 0.0;

    std::optional<double> spectral_sum;      // sum of test-function weights
    double spectral_truncation_bound = 0.0;
    double spectral_tail_bound = 0.0;

    double main_term = 0.0;
    double integral_remainder = 0.0;
    double integral_remainder_err = 0.0;
    double integral_envelope = 0.0;
    std::string integral_envelope_kind;

    GeometricTerm geometric;

    std::optional<double> residual;  // spectral/vol - (main + R_I + R_K)
    bool primitive_overcount_flag = true;  // length counts include non-simple geodesics
};

TraceReport trace_residual(const SurfaceModel& surface, const TestFunction& tf,
                           const GeometricOptions& opts);

// trace report without a spectral side (geometric terms only)
TraceReport trace_terms(const SurfaceModel& surface, const TestFunction& tf,
                        const GeometricOptions& opts);

}  // namespace selberg
