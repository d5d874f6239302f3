#include "selberg/traceformula.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

namespace selberg {

namespace {

// displacement of a raw element at (x0, y0), returned as cosh(d) - 1
inline double orbit_q(double a, double b, double c, double d, double x0, double y0) {
    const double cr = c * x0 + d;
    const double ci = c * y0;
    const double den = cr * cr + ci * ci;
    const double nr = a * x0 + b;
    const double ni = a * y0;
    const double gx = (nr * cr + ni * ci) / den;
    const double gy = (ni * cr - nr * ci) / den;
    const double dx = gx - x0, dy = gy - y0;
    return (dx * dx + dy * dy) / (2.0 * y0 * gy);
}

void parallel_over(int n, int threads, const std::function<void(int, int)>& run_range) {
    threads = std::max(1, threads);
    if (threads == 1 || n < 2 * threads) {
        run_range(0, n);
        return;
    }
    std::vector<std::thread> pool;
    const int chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int lo = t * chunk;
        const int hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([=] { run_range(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

struct MeanSigma {
    double mean = 0.0;
    double sigma = 0.0;  // standard error of the mean
};

MeanSigma reduce(const std::vector<double>& v) {
    MeanSigma r;
    const double n = static_cast<double>(v.size());
    if (v.empty()) return r;
    double s = 0.0;
    for (double x : v) s += x;
    r.mean = s / n;
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - r.mean) * (x - r.mean);
        r.sigma = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    return r;
}

double ball_bound(double radius, double r_pack) {
    // orbit-count ceiling from disjoint balls of radius r_pack/2
    return (std::cosh(radius + 0.5 * r_pack) - 1.0) / (std::cosh(0.5 * r_pack) - 1.0);
}

}  // namespace

void SurfaceModel::set_spectrum(std::vector<double> values, double cut) {
    if (values.empty()) throw InputError("spectrum is empty");
    if (std::fabs(values.front()) > 1e-12)
        throw InputError("spectrum must start at lambda_0 = 0");
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        if (values[i + 1] < values[i] - 1e-12) throw InputError("spectrum must be nondecreasing");
    values.front() = 0.0;
    spectrum = std::move(values);
    lambda_cut = cut;
}

double SurfaceModel::systole() const {
    const double r = std::min(8.0, group.limits().r_max);
    OrbitView v = group.orbit_view(r);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size; ++i) {
        const double tr = std::fabs(v.a[i] + v.d[i]);
        if (tr > 2.0) best = std::min(best, 2.0 * acosh1p(0.5 * tr - 1.0));
    }
    if (!std::isfinite(best))
        throw CertificationError("no hyperbolic element found; systole unavailable");
    return best;
}

SpectralSum spectral_side(const std::vector<double>& spectrum, const TestFunction& tf) {
    if (spectrum.empty()) throw InputError("no spectrum");
    const SpectralWindow& w = tf.window();
    const double t = tf.t();
    SpectralSum out;
    if (tf.family() == Family::B)
        out.lambda_stop = w.b + 5.5 / t;
    else {
        const double r_stop = w.beta + 5.5 / t;
        out.lambda_stop = 0.25 + r_stop * r_stop;
    }
    double s = 0.0;
    long used = 0, dropped = 0;
    for (double lam : spectrum) {
        if (lam > out.lambda_stop) {
            ++dropped;
            continue;
        }
        s += tf.spectral_weight(lam);
        ++used;
    }
    out.value = s;
    out.terms_used = used;
    out.truncation_bound = static_cast<double>(dropped) * 1e-14;
    return out;
}

double spectral_tail_bound(const TestFunction& tf, double volume, double lambda_cut) {
    const SpectralWindow& w = tf.window();
    const double t = tf.t();
    auto envelope = [&](double lam) {
        if (tf.family() == Family::B) {
            if (lam <= w.b) return 1.0;
            return 0.5 * std::erfc(t * (lam - w.b));
        }
        if (lam <= 0.25) return 2.0;
        const double r = std::sqrt(lam - 0.25);
        if (r <= w.beta) return 2.0;
        return std::erfc(t * (r - w.beta));
    };
    const double density = 2.0 * volume / (4.0 * M_PI);  // twice the Weyl slope
    double tail = 0.0;
    for (int k = 0; k < 100000; ++k) {
        const double e = envelope(lambda_cut + k);
        tail += density * e;
        if (e < 1e-22) break;
    }
    return tail;
}

std::vector<GeometricTerm> geometric_term_multi(const SurfaceModel& surface,
                                                const std::vector<TestFunction>& tfs,
                                                const GeometricOptions& opts) {
    if (tfs.empty()) throw InputError("no test function");
    const FuchsianGroup& G = surface.group;
    const double r_cap = G.limits().r_max;
    if (!(opts.L <= r_cap))
        throw InputError("thin threshold L exceeds the enumeration guard");

    // 1. samples
    DirichletSample smp = G.dirichlet_sample(opts.n_samples, opts.seed);
    const int n = static_cast<int>(smp.points.size());
    std::vector<double> delta(n);
    double delta_max = 0.0;
    for (int i = 0; i < n; ++i) {
        delta[i] = dist(G.base_point(), smp.points[i]);
        delta_max = std::max(delta_max, delta[i]);
    }

    // 2. packing radius for shell counts (disjoint balls of radius InjRad)
    const double sys = surface.systole();
    const double counting_r = sys;
    const double inj_lb = 0.5 * sys;

    // 3. kernel profiles and a preliminary tabulation for fitting / pilot
    std::vector<KernelProfile> profiles;
    profiles.reserve(tfs.size());
    for (const auto& tf : tfs) profiles.emplace_back(tf);

    const double rho_lo = 0.9 * sys;
    const double r_pilot = std::min(8.0, r_cap);
    std::vector<CubicSpline> ksp;
    for (auto& p : profiles) ksp.push_back(p.tabulate(rho_lo, r_pilot + 0.5, 260));

    auto scan = [&](double R, const std::vector<CubicSpline>& splines,
                    std::vector<std::vector<double>>& F, std::vector<double>& minq) {
        OrbitView v = G.orbit_view(R + 2.0 * delta_max + 1e-6);
        const double qmax = std::cosh(R) - 1.0;
        parallel_over(n, opts.threads, [&](int lo, int hi) {
            for (int i = lo; i < hi; ++i) {
                const double x0 = smp.points[i].x, y0 = smp.points[i].y;
                const double cap = R + 2.0 * delta[i];
                const std::size_t jmax =
                    std::upper_bound(v.disp, v.disp + v.size, cap) - v.disp;
                double mq = std::numeric_limits<double>::infinity();
                for (std::size_t j = 0; j < jmax; ++j) {
                    const double q = orbit_q(v.a[j], v.b[j], v.c[j], v.d[j], x0, y0);
                    if (q < mq) mq = q;
                    if (q <= qmax) {
                        const double rho = acosh1p(q);
                        for (std::size_t w = 0; w < splines.size(); ++w)
                            F[w][i] += splines[w](rho);
                    }
                }
                minq[i] = mq;
            }
        });
    };

    // 4. pilot estimate scales the relative certificate
    std::vector<std::vector<double>> Fp(tfs.size(), std::vector<double>(n, 0.0));
    std::vector<double> minq(n, 0.0);
    scan(r_pilot, ksp, Fp, minq);
    std::vector<double> pilot_scale(tfs.size());
    for (std::size_t w = 0; w < tfs.size(); ++w) {
        MeanSigma ms = reduce(Fp[w]);
        pilot_scale[w] = std::max({std::fabs(ms.mean), 4.0 * ms.sigma, 1e-9});
    }

    // 5. fitted kernel-decay constants on the tabulated range
    std::vector<double> cfit(tfs.size());
    for (std::size_t w = 0; w < tfs.size(); ++w) {
        const auto& tf = tfs[w];
        auto shape = [&](double rho) {
            return tf.family() == Family::H ? bound_k_h(rho, tf.t(), tf.window(), inj_lb)
                                            : bound_k_b(rho, tf.t(), tf.window(), inj_lb);
        };
        FittedConstant fc = fit_constant([&](double rho) { return ksp[w](rho); }, shape,
                                         rho_lo, r_pilot, 60);
        cfit[w] = std::max(fc.coarse, fc.fine);
    }

    // 6. certified tail of the dropped shells past R
    auto tail_bound = [&](double R, std::size_t w) {
        const auto& tf = tfs[w];
        double tail = 0.0;
        for (int k = 0; k < 400; ++k) {
            const double rho = R + k;
            const double kb = tf.family() == Family::H
                                 ? bound_k_h(rho, tf.t(), tf.window(), inj_lb)
                                 : bound_k_b(rho, tf.t(), tf.window(), inj_lb);
            const double term = ball_bound(rho + 1.0, counting_r) * cfit[w] * kb;
            tail += term;
            if (term < 1e-30 * (tail + 1e-300) || (k > 4 && term < 1e-300)) break;
        }
        return tail;
    };

    // 7. solve for the smallest truncation radius meeting the certificate
    // target under the radius guard and the memory budget; fall back to the
    // first floor-passing radius when the target is out of reach
    double r_trunc = -1.0;
    for (double R = std::max(6.0, sys + 0.5); R <= r_cap + 1e-9; R += 0.25) {
        const double kept_pred = G.predicted_count(R + 2.0 * delta_max + 1e-6);
        if (kept_pred > static_cast<double>(opts.max_kept_elements)) break;
        bool ok_target = true, ok_floor = true;
        for (std::size_t w = 0; w < tfs.size(); ++w) {
            const double tb = tail_bound(R, w);
            if (tb > opts.cert_rel_target * pilot_scale[w]) ok_target = false;
            if (tb > opts.cert_rel_max * pilot_scale[w]) ok_floor = false;
        }
        if (ok_target) {
            r_trunc = R;
            break;
        }
        if (ok_floor && r_trunc < 0) r_trunc = R;
    }
    if (r_trunc < 0)
        throw CertificationError("truncation not certifiable within R_max");

    // 8. final kernel splines over the full truncated range
    std::vector<CubicSpline> kfull;
    for (std::size_t w = 0; w < tfs.size(); ++w)
        kfull.push_back(profiles[w].tabulate(rho_lo, r_trunc + 1e-3, 520));

    std::vector<std::vector<double>> F(tfs.size(), std::vector<double>(n, 0.0));
    std::fill(minq.begin(), minq.end(), 0.0);
    scan(r_trunc, kfull, F, minq);

    // 9. reductions (sequential, sample order: reproducible bit-for-bit)
    const double thin_q = std::cosh(2.0 * opts.L) - 1.0;  // injrad < L <=> min disp < 2L
    std::vector<GeometricTerm> out(tfs.size());
    for (std::size_t w = 0; w < tfs.size(); ++w) {
        GeometricTerm& g = out[w];
        g.n = n;
        g.L = opts.L;
        g.per_sample = F[w];
        g.min_displacement.resize(n);
        for (int i = 0; i < n; ++i) g.min_displacement[i] = acosh1p(minq[i]);
        MeanSigma total = reduce(F[w]);
        g.estimate = total.mean;
        g.sigma = total.sigma;
        std::vector<double> plus(n, 0.0), minus(n, 0.0);
        long n_thin = 0;
        for (int i = 0; i < n; ++i) {
            if (minq[i] < thin_q) {
                minus[i] = F[w][i];
                ++n_thin;
            } else {
                plus[i] = F[w][i];
            }
        }
        MeanSigma mp = reduce(plus), mm = reduce(minus);
        g.rk_plus = mp.mean;
        g.rk_minus = mm.mean;
        g.sigma_plus = mp.sigma;
        g.sigma_minus = mm.sigma;
        g.n_thin = n_thin;
        g.thin_certified_empty = opts.L <= inj_lb + 1e-12;
        g.domain_volume_estimate = smp.volume_estimate;

        TruncationCertificate& c = g.cert;
        c.r_trunc = r_trunc;
        c.tail_abs = tail_bound(r_trunc, w);
        const double scale = std::max({std::fabs(g.estimate), 4.0 * g.sigma, 1e-9});
        c.tail_rel = c.tail_abs / scale;
        c.fitted_kernel_c = cfit[w];
        c.counting_r = counting_r;
        c.met_target = c.tail_rel <= opts.cert_rel_target;
        if (c.tail_rel > opts.cert_rel_max)
            throw CertificationError("truncation not certifiable within R_max");
    }
    return out;
}

GeometricTerm geometric_term(const SurfaceModel& surface, const TestFunction& tf,
                             const GeometricOptions& opts) {
    return geometric_term_multi(surface, {tf}, opts).front();
}

static TraceReport assemble(const SurfaceModel& surface, const TestFunction& tf,
                            const GeometricOptions& opts, bool want_spectral) {
    TraceReport rep;
    rep.surface_id = surface.id;
    rep.family = tf.family();
    rep.window_a = tf.window().a;
    rep.window_b = tf.window().b;
    rep.t = tf.t();
    rep.volume = surface.volume();

    rep.main_term = main_term(tf.window());
    RemainderResult ri = integral_remainder(tf);
    rep.integral_remainder = ri.value.value;
    rep.integral_remainder_err = ri.value.err;
    rep.integral_envelope = ri.envelope;
    rep.integral_envelope_kind = ri.envelope_kind;

    rep.geometric = geometric_term(surface, tf, opts);

    if (want_spectral) {
        if (!surface.spectrum) throw InputError("no spectrum");
        SpectralSum s = spectral_side(*surface.spectrum, tf);
        rep.spectral_sum = s.value;
        rep.spectral_truncation_bound = s.truncation_bound;
        rep.spectral_tail_bound =
            spectral_tail_bound(tf, surface.volume(), surface.lambda_cut);
        const double scale = std::max(std::fabs(s.value), 1.0);
        if (rep.spectral_tail_bound > 1e-9 * scale)
            throw CertificationError("spectral tail not certifiable");
        rep.residual = s.value / surface.volume() -
                       (rep.main_term + rep.integral_remainder + rep.geometric.estimate);
    }
    return rep;
}

TraceReport trace_residual(const SurfaceModel& surface, const TestFunction& tf,
                           const GeometricOptions& opts) {
    return assemble(surface, tf, opts, true);
}

TraceReport trace_terms(const SurfaceModel& surface, const TestFunction& tf,
                        const GeometricOptions& opts) {
    return assemble(surface, tf, opts, false);
}

}  // namespace selberg
