#include "selberg/bsdiag.hpp"

#include <algorithm>
#include <cmath>

namespace selberg {

namespace {

// per-sample minimal orbit displacement, scanning up to cap(z) = 2 L_max + 2 delta(z)
std::vector<double> min_displacements(const SurfaceModel& surface,
                                      const std::vector<Point>& pts, double l_max) {
    const FuchsianGroup& G = surface.group;
    double delta_max = 0.0;
    std::vector<double> delta(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        delta[i] = dist(G.base_point(), pts[i]);
        delta_max = std::max(delta_max, delta[i]);
    }
    OrbitView v = G.orbit_view(2.0 * l_max + 2.0 * delta_max + 1e-6);
    std::vector<double> md(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double cap = 2.0 * l_max + 2.0 * delta[i];
        const std::size_t jmax = std::upper_bound(v.disp, v.disp + v.size, cap) - v.disp;
        const double x0 = pts[i].x, y0 = pts[i].y;
        double best_q = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < jmax; ++j) {
            const double cr = v.c[j] * x0 + v.d[j];
            const double ci = v.c[j] * y0;
            const double den = cr * cr + ci * ci;
            const double nr = v.a[j] * x0 + v.b[j];
            const double ni = v.a[j] * y0;
            const double gx = (nr * cr + ni * ci) / den;
            const double gy = (ni * cr - nr * ci) / den;
            const double dx = gx - x0, dy = gy - y0;
            best_q = std::min(best_q, (dx * dx + dy * dy) / (2.0 * y0 * gy));
        }
        md[i] = acosh1p(best_q);  // > 2 l_max means "thick at every threshold asked"
    }
    return md;
}

}  // namespace

std::vector<ThinPartEstimate> thin_part_profile(const SurfaceModel& surface,
                                                const std::vector<double>& Ls,
                                                int n_samples, std::uint64_t seed) {
    if (Ls.empty()) return {};
    const FuchsianGroup& G = surface.group;
    const double l_max = *std::max_element(Ls.begin(), Ls.end());
    if (!(l_max <= G.limits().r_max / 2.0))
        throw InputError("thin threshold exceeds R_max/2");

    DirichletSample smp = G.dirichlet_sample(n_samples, seed);
    std::vector<double> md = min_displacements(surface, smp.points, l_max);
    const double inj_lb = 0.5 * surface.systole();
    const double vol = surface.volume();

    std::vector<ThinPartEstimate> out;
    for (double L : Ls) {
        ThinPartEstimate e;
        e.L = L;
        e.n = n_samples;
        long thin = 0;
        for (double m : md)
            if (m < 2.0 * L) ++thin;
        const double p = static_cast<double>(thin) / n_samples;
        e.n_thin = thin;
        e.volume = vol * p;
        e.sigma = vol * std::sqrt(std::max(p * (1.0 - p), 1.0 / n_samples) / n_samples);
        e.relative = p;
        e.certified_zero = L <= inj_lb + 1e-12;
        if (e.certified_zero && thin > 0)
            throw CertificationError("thin sample below the certified injectivity radius");
        out.push_back(e);
    }
    return out;
}

ThinPartEstimate thin_part_volume(const SurfaceModel& surface, double L, int n_samples,
                                  std::uint64_t seed) {
    return thin_part_profile(surface, {L}, n_samples, seed).front();
}

double bs_volume_bound(const SurfaceModel& surface, double L) {
    LengthSpectrum ls = surface.group.primitive_length_spectrum(2.0 * L);
    return 2.0 * std::exp(L) * static_cast<double>(ls.count_up_to(2.0 * L));
}

CollarWitness collar_membership(const SurfaceModel& surface, const Point& z, double L) {
    CollarWitness w;
    const FuchsianGroup& G = surface.group;
    const double cap = 2.0 * std::asinh(0.5 * std::exp(L)) + 0.5;  // displacement ceiling inside the collar
    std::vector<Mobius> cands = G.enumerate_ball(z, std::min(cap, G.limits().r_max));
    for (const Mobius& m : cands) {
        auto ell = m.translation_length();
        if (!ell || *ell > 2.0 * L) continue;
        auto dm = d_max(*ell, L);
        if (!dm) continue;
        auto ad = axis_distance(m, z);
        if (!ad) continue;
        if (*ad <= *dm + 1e-9) {
            w.found = true;
            w.length = *ell;
            w.axis_dist = *ad;
            w.d_max_value = *dm;
            return w;
        }
    }
    return w;
}

AssumptionReport geometric_assumptions_check(const SurfaceModel& surface, double g_proxy,
                                             int n_samples, std::uint64_t seed) {
    if (!(g_proxy >= 2.0)) throw InputError("assumption check requires g_proxy >= 2");
    AssumptionReport rep;
    rep.g_proxy = g_proxy;
    const double lg = std::log(g_proxy);
    rep.injrad_threshold = std::pow(g_proxy, -1.0 / 24.0) * std::pow(lg, 9.0 / 16.0);
    rep.injrad_measured = 0.5 * surface.systole();
    rep.injrad_pass = rep.injrad_measured >= rep.injrad_threshold;
    rep.L = lg / 6.0;
    rep.bs_threshold = std::pow(g_proxy, -1.0 / 3.0);
    try {
        ThinPartEstimate thin = thin_part_volume(surface, rep.L, n_samples, seed);
        rep.thin_fraction = thin.relative;
        rep.thin_sigma = thin.sigma / surface.volume();
        rep.bs_pass = rep.thin_fraction <= rep.bs_threshold;
    } catch (const CertificationError&) {
        // non-cocompact inputs have no finite Dirichlet domain to sample;
        // the injectivity-radius threshold part of the report still stands
        rep.thin_available = false;
        rep.bs_pass = false;
    }
    return rep;
}

}  // namespace selberg
