#include "selberg/counting.hpp"

#include <algorithm>
#include <cmath>

namespace selberg {

long count_window(std::span<const double> spectrum, double a, double b) {
    if (b < a) return 0;
    auto lo = std::lower_bound(spectrum.begin(), spectrum.end(), a);
    auto hi = std::upper_bound(spectrum.begin(), spectrum.end(), b);
    return static_cast<long>(hi - lo);
}

double upper_bound_envelope(double g, double a, double b, double C) {
    if (!(g >= 2.0)) throw InputError("upper_bound_envelope requires g >= 2");
    return surface_volume(g) * C * (b - a + std::sqrt((b + 1.0) / std::log(g)));
}

double small_eigenvalue_envelope(double g, double b, double C) {
    if (!(g >= 2.0)) throw InputError("small_eigenvalue_envelope requires g >= 2");
    if (b > 0.25) throw InputError("b exceeds 1/4");
    const double d = 0.25 - b;
    return surface_volume(g) * C * std::pow(g, -kSmallEigC * d * d) /
           std::pow(std::log(g), 0.75);
}

CountingEnvelope equivalent_envelope(double g, double a, double b, double C) {
    if (!(g >= 2.0)) throw InputError("equivalent_envelope requires g >= 2");
    CountingEnvelope e;
    e.g = g;
    e.a = a;
    e.b = b;
    e.C = C;
    e.main = main_term(SpectralWindow(a, b));
    const double scale = std::sqrt((b + 1.0) / std::log(g));
    e.lower_slack = -C * scale;
    e.upper_slack =
        C * scale * std::sqrt(std::log(2.0 + (b - a) / scale));
    return e;
}

double multiplicity_envelope_small(double g, double eps, double C) {
    if (!(eps > 0.0)) throw InputError("multiplicity variant requires eps > 0");
    return C * g * std::pow(g, -kSmallEigC * eps * eps) / std::pow(std::log(g), 0.75);
}

double multiplicity_envelope(double g, double lambda, double C) {
    if (!(g >= 2.0) || lambda < 0.0) throw InputError("multiplicity_envelope domain");
    double bound = C * g * std::sqrt((1.0 + lambda) / std::log(g));
    if (lambda < 0.25)
        bound = std::min(bound, multiplicity_envelope_small(g, 0.25 - lambda, C));
    return bound;
}

JthInterval jth_envelope(double g, double j, double C) {
    if (!(g >= 2.0) || j < 0.0) throw InputError("jth_envelope domain");
    JthInterval r;
    r.center = j / g;
    r.slack = C * (1.0 + std::sqrt(r.center * std::log(2.0 + r.center)));
    r.lo = std::max(0.0, r.center - r.slack);
    r.hi = r.center + r.slack;
    return r;
}

SpectrumCheckReport check_spectrum(std::span<const double> spectrum, double g,
                                   const EnvelopeConstants& constants,
                                   const SpectrumCheckConfig& config) {
    if (spectrum.empty() || std::fabs(spectrum.front()) > 1e-12)
        throw InputError("check_spectrum expects a sorted spectrum with lambda_0 = 0");
    SpectrumCheckReport rep;
    rep.g = g;
    rep.constants = constants;
    rep.genus_warning = g < config.g_min_warn;
    const double vol = surface_volume(g);

    // geometric grid in b+1, linear widths
    for (int ib = 0; ib < config.n_b; ++ib) {
        const double b =
            std::pow(config.b_max + 1.0, (ib + 1.0) / config.n_b) - 1.0;
        for (int iw = 1; iw <= config.n_width; ++iw) {
            const double width = b * iw / config.n_width;
            const double a = std::max(0.0, b - width);
            const long nobs = count_window(spectrum, a, b);

            CheckRow up;
            up.kind = "window-upper";
            up.p1 = a;
            up.p2 = b;
            up.observed = static_cast<double>(nobs);
            up.bound_hi = upper_bound_envelope(g, a, b, constants.upper);
            up.bound_lo = 0.0;
            up.pass = up.observed <= up.bound_hi;
            rep.rows.push_back(up);

            CountingEnvelope band = equivalent_envelope(g, a, b, constants.equiv);
            CheckRow eq;
            eq.kind = "window-band";
            eq.p1 = a;
            eq.p2 = b;
            eq.observed = nobs / vol;
            eq.bound_lo = band.main + band.lower_slack;
            eq.bound_hi = band.main + band.upper_slack;
            eq.pass = eq.observed >= eq.bound_lo && eq.observed <= eq.bound_hi;
            rep.rows.push_back(eq);
        }
    }

    // small-eigenvalue envelope on [0, b], b <= 1/4
    for (double b : {0.0, 0.05, 0.1, 0.15, 0.2, 0.25}) {
        CheckRow se;
        se.kind = "small-eig";
        se.p1 = 0.0;
        se.p2 = b;
        se.observed = static_cast<double>(count_window(spectrum, 0.0, b)) - 1.0;  // exclude lambda_0
        se.bound_hi = small_eigenvalue_envelope(g, b, constants.upper);
        se.pass = se.observed <= se.bound_hi;
        rep.rows.push_back(se);
    }

    // j-th eigenvalue envelope on a stride through the spectrum
    long stride = config.j_stride;
    if (stride <= 0) stride = std::max<long>(1, static_cast<long>(spectrum.size()) / 32);
    for (std::size_t j = 0; j < spectrum.size(); j += stride) {
        JthInterval iv = jth_envelope(g, static_cast<double>(j), constants.jth);
        CheckRow jr;
        jr.kind = "jth";
        jr.p1 = static_cast<double>(j);
        jr.p2 = spectrum[j];
        jr.observed = spectrum[j];
        jr.bound_lo = iv.lo;
        jr.bound_hi = iv.hi;
        jr.pass = spectrum[j] >= iv.lo && spectrum[j] <= iv.hi;
        rep.rows.push_back(jr);
    }

    // multiplicity envelope at the strided eigenvalues (tolerance 1e-9 for
    // equal-eigenvalue detection in the ingested list)
    for (std::size_t j = 1; j < spectrum.size(); j += stride) {
        const double lam = spectrum[j];
        const long mult = count_window(spectrum, lam - 1e-9, lam + 1e-9);
        CheckRow mr;
        mr.kind = "multiplicity";
        mr.p1 = static_cast<double>(j);
        mr.p2 = lam;
        mr.observed = static_cast<double>(mult);
        mr.bound_hi = multiplicity_envelope(g, lam, constants.mult);
        mr.pass = mr.observed <= mr.bound_hi;
        rep.rows.push_back(mr);
    }

    for (const auto& r : rep.rows)
        if (!r.pass) ++rep.failures;
    return rep;
}

}  // namespace selberg
