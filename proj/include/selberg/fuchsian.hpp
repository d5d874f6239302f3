// Explicit co-compact Fuchsian groups: generator sets, breadth-first orbit
// enumeration with displacement pruning, pointwise injectivity radii,
// primitive length spectra, and rejection sampling of a Dirichlet domain.
#pragma once

#include "selberg/hypgeom.hpp"

#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace selberg {

class RadiusGuardError : public std::runtime_error {
public:
    explicit RadiusGuardError(const std::string& what) : std::runtime_error(what) {}
};

struct LengthSpectrumEntry {
    double length;     // primitive geodesic length
    int multiplicity;  // number of unoriented primitive conjugacy classes
};

struct LengthSpectrum {
    double l_max = 0.0;
    std::vector<LengthSpectrumEntry> entries;  // strictly increasing lengths

    // number of primitive closed geodesics of length <= L
    long count_up_to(double L) const;
};

struct DirichletSample {
    std::vector<Point> points;
    double accepted_fraction = 0.0;
    double volume_estimate = 0.0;  // accepted_fraction * area of the proposal ball
    double ball_radius = 0.0;      // proposal ball radius actually used
};

// Sorted-by-displacement view over the cached orbit enumeration at the base
// point. disp[i] = dist(base, g_i base), ascending.
struct OrbitView {
    const double* a = nullptr;
    const double* b = nullptr;
    const double* c = nullptr;
    const double* d = nullptr;
    const double* disp = nullptr;
    std::size_t size = 0;
    double radius = 0.0;  // displacements covered up to this radius
};

struct EnumerationLimits {
    double r_max = 14.0;            // user-facing displacement-radius guard
    double bfs_margin = 1.5;        // expansion slack over the kept radius
    std::size_t max_visited = 60'000'000;  // hard cap on BFS dedup entries
};

class FuchsianGroup {
public:
    // Genus-2 surface group of the regular hyperbolic octagon; generators have
    // trace 2(1+sqrt 2) and entries built from sqrt 2 and sqrt(1+sqrt 2).
    static FuchsianGroup bolza();

    // User-supplied generators (inverse closure is added). Performs a
    // discreteness sanity check: no enumerated non-identity element may move
    // the base point by less than `discreteness_floor`.
    static FuchsianGroup from_generators(const std::vector<Mobius>& mats, int genus,
                                         double discreteness_floor = 1e-4);

    const std::vector<Mobius>& generators() const { return gens_; }
    int genus() const { return genus_; }
    double volume() const { return 2.0 * M_PI * (2.0 * genus_ - 2.0); }
    const Point& base_point() const { return base_; }
    bool cocompact_verified() const { return cocompact_verified_; }

    // Copy of this group with another base point (fresh enumeration cache).
    FuchsianGroup with_base_point(const Point& z) const;

    EnumerationLimits& limits() { return limits_; }
    const EnumerationLimits& limits() const { return limits_; }

    // Exactly the non-identity gamma with dist(z, gamma z) <= R (R <= r_max).
    std::vector<Mobius> enumerate_ball(const Point& z, double R) const;

    // 1 + |enumerate_ball(z, R)|, matching the orbit-count convention that
    // includes the identity.
    long orbit_count(const Point& z, double R) const;

    // Half the minimal displacement at z, with the enumeration radius grown
    // until the minimum found is certified global.
    double injectivity_radius_at(const Point& z) const;

    // n points uniform w.r.t. hyperbolic area on the Dirichlet domain of the
    // base point; deterministic per seed.
    DirichletSample dirichlet_sample(int n, std::uint64_t seed) const;

    // All primitive closed geodesics of length <= l_max, grouped by length
    // (trace clustering at 1e-8 + conjugation closure; counts unoriented
    // classes, i.e. {gamma, gamma^-1} pairs).
    LengthSpectrum primitive_length_spectrum(double l_max) const;

    // Grow (if needed) and pin the base-point enumeration covering `radius`;
    // the view stays valid until the next growth request.
    OrbitView orbit_view(double radius) const;

    // Measured growth model N(R) ~ coeff * e^R of the cached enumeration,
    // used to budget memory before large requests.
    double predicted_count(double radius) const;

private:
    FuchsianGroup(std::vector<Mobius> gens, int genus, Point base, bool verified);

    struct Cache;
    std::shared_ptr<Cache> build_cache(double radius, double coeff) const;
    void ensure_radius(double radius) const;

    std::vector<Mobius> gens_;
    int genus_;
    Point base_;
    bool cocompact_verified_;
    EnumerationLimits limits_;

    // shared_ptr so the group stays copyable; copies share the lock but
    // carry their own cache snapshot
    mutable std::shared_ptr<std::mutex> mu_;
    mutable std::shared_ptr<Cache> cache_;
};

}  // namespace selberg
