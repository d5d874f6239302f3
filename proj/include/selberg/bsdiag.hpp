// Thin-part diagnostics: Monte-Carlo volume of the set of points with small
// injectivity radius (common random numbers across thresholds), the
// short-geodesic counting bound on that volume, and the geometric-assumption
// thresholds evaluated for a nominal genus.
#pragma once

#include "selberg/traceformula.hpp"

#include <vector>

namespace selberg {

struct ThinPartEstimate {
    double L = 0.0;
    double volume = 0.0;          // estimated vol{ z : injrad_z < L }
    double sigma = 0.0;           // binomial standard error, volume units
    int n = 0;
    double relative = 0.0;        // volume / vol(X)
    long n_thin = 0;
    bool certified_zero = false;  // L below the certified injectivity radius
};

ThinPartEstimate thin_part_volume(const SurfaceModel& surface, double L, int n_samples,
                                  std::uint64_t seed);

// one shared sample set across all thresholds: per-sample minimal displacement
// is computed once, so the estimates are monotone in L exactly
std::vector<ThinPartEstimate> thin_part_profile(const SurfaceModel& surface,
                                                const std::vector<double>& Ls,
                                                int n_samples, std::uint64_t seed);

// 2 e^L N(2L) with N the primitive-geodesic count (over-counts the simple
// ones, so this stays an upper bound for the thin-part volume)
double bs_volume_bound(const SurfaceModel& surface, double L);

struct CollarWitness {
    bool found = false;
    double length = 0.0;      // translation length of the witness
    double axis_dist = 0.0;   // distance from the sample to its axis
    double d_max_value = 0.0; // collar half-width at the threshold
};

// constructive thin-part membership: an enumerated element of translation
// length <= 2L whose axis passes within d_max(ell, L) of z
CollarWitness collar_membership(const SurfaceModel& surface, const Point& z, double L);

struct AssumptionReport {
    double g_proxy = 0.0;
    double injrad_threshold = 0.0;   // g^{-1/24} (log g)^{9/16}
    double injrad_measured = 0.0;    // half the systole
    bool injrad_pass = false;
    double L = 0.0;                  // (1/6) log g
    bool thin_available = true;      // sampling can fail on non-cocompact input
    double thin_fraction = 0.0;
    double thin_sigma = 0.0;
    double bs_threshold = 0.0;       // g^{-1/3} (constant 1)
    bool bs_pass = false;
    // diagnostic only: thresholds of a probabilistic statement applied to a
    // fixed surface ("assumption check", not a verification)
};

AssumptionReport geometric_assumptions_check(const SurfaceModel& surface, double g_proxy,
                                             int n_samples, std::uint64_t seed);

}  // namespace selberg
