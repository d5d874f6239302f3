// Acceptance suite: one line per criterion, every tolerance pinned in code.
// Returns nonzero if any criterion fails.
#include "selberg/bsdiag.hpp"
#include "selberg/counting.hpp"
#include "selberg/io.hpp"
#include "selberg/traceformula.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>

using namespace selberg;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

void expect(bool ok, const std::string& what) {
    if (!ok) {
        ++g_failures;
        g_notes.push_back(what);
        std::printf("      FAILED: %s\n", what.c_str());
    }
}

void run_criterion(const char* name, const std::function<void()>& fn) {
    const int fail0 = g_failures;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        fn();
    } catch (const std::exception& e) {
        expect(false, std::string("unexpected exception: ") + e.what());
    }
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %s  (%.1f s)\n", g_failures == fail0 ? "PASS" : "FAIL", name, dt);
    std::fflush(stdout);
}

std::mt19937_64 rng(987654321);

Point random_point() {
    std::uniform_real_distribution<double> ux(-2.0, 2.0);
    std::uniform_real_distribution<double> uy(std::log(0.2), std::log(5.0));
    return Point(ux(rng), std::exp(uy(rng)));
}

Mobius random_mobius() {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double s = std::exp(u(rng));
    Mobius scale(s, 0.0, 0.0, 1.0 / s);
    Mobius shear(1.0, u(rng), 0.0, 1.0);
    const double th = u(rng);
    Mobius rot(std::cos(th), -std::sin(th), std::sin(th), std::cos(th));
    return scale * shear * rot;
}

// ---------------------------------------------------------------------------

void criterion_1_geometry() {
    for (int k = 0; k < 1000; ++k) {
        const Point u = random_point(), v = random_point(), w = random_point();
        expect(std::fabs(dist(u, v) - dist(v, u)) <= 1e-9, "distance symmetry");
        expect(dist(u, w) <= dist(u, v) + dist(v, w) + 1e-9, "triangle inequality");
        const Mobius g = random_mobius();
        expect(std::fabs(dist(g.apply(u), g.apply(v)) - dist(u, v)) <= 1e-9,
               "isometry invariance");
    }
    expect(std::fabs(dist(Point(0, 1), Point(0, 2)) - std::log(2.0)) <= 1e-12,
           "dist(i, 2i) = ln 2");
    expect(std::fabs(ball_volume(1.0) - (std::cosh(1.0) - 1.0)) <= 1e-12, "ball volume");
    expect(std::fabs(collar_volume(2.0, 1.0) - 4.0 * std::sinh(1.0)) <= 1e-12,
           "collar volume");
    std::uniform_real_distribution<double> uL(0.2, 4.0);
    int admissible = 0;
    while (admissible < 100) {
        const double L = uL(rng);
        std::uniform_real_distribution<double> ul(0.05, 2.0 * std::asinh(std::exp(L) / 2.0));
        const double ell = ul(rng);
        auto dm = d_max(ell, L);
        if (!dm) continue;
        ++admissible;
        expect(collar_volume(ell, *dm) <= 2.0 * std::exp(L) * (1.0 + 1e-12),
               "collar_volume(l, d_max) <= 2 e^L");
    }
}

// brute-force word-tree oracle (displacement blind dedup, stability stop)
std::set<std::array<long, 4>> brute_ball(const FuchsianGroup& G, double R) {
    auto key = [](const Mobius& m) {
        std::array<long, 4> k;
        const double e[4] = {m.a(), m.b(), m.c(), m.d()};
        for (int i = 0; i < 4; ++i) k[i] = std::lround(std::asinh(e[i]) / 1e-6);
        return k;
    };
    std::set<std::array<long, 4>> seen{key(Mobius())}, in_ball;
    std::vector<Mobius> frontier{Mobius()};
    std::size_t last = 0;
    int stable = 0;
    for (int depth = 0; depth < 12 && stable < 2; ++depth) {
        std::vector<Mobius> next;
        for (const Mobius& m : frontier)
            for (const Mobius& g : G.generators()) {
                Mobius c = m * g;
                if (!seen.insert(key(c)).second) continue;
                next.push_back(c);
                if (!c.is_identity(1e-9) && c.displacement(G.base_point()) <= R)
                    in_ball.insert(key(c));
            }
        frontier = std::move(next);
        if (in_ball.size() == last) ++stable; else { stable = 0; last = in_ball.size(); }
    }
    return in_ball;
}

void criterion_2_bolza() {
    FuchsianGroup G = FuchsianGroup::bolza();
    for (double R : {3.06, 4.0, 5.0}) {
        auto oracle = brute_ball(G, R);
        auto mine = G.enumerate_ball(G.base_point(), R);
        std::set<std::array<long, 4>> keys;
        for (const Mobius& m : mine) {
            std::array<long, 4> k;
            const double e[4] = {m.a(), m.b(), m.c(), m.d()};
            for (int i = 0; i < 4; ++i) k[i] = std::lround(std::asinh(e[i]) / 1e-6);
            keys.insert(k);
        }
        expect(keys == oracle, "BFS equals brute-force enumeration at R <= 5");
    }
    LengthSpectrum ls = G.primitive_length_spectrum(3.5);
    expect(!ls.entries.empty() &&
               std::fabs(ls.entries[0].length - 2.0 * std::acosh(1.0 + std::sqrt(2.0))) <= 1e-6,
           "systole = 2 acosh(1 + sqrt 2)");
    const double r = 2.0 * G.injectivity_radius_at(G.base_point());
    for (double j : {3.0, 4.5, 6.0}) {
        const double bound = (std::cosh(j + 0.5 * r) - 1.0) / (std::cosh(0.5 * r) - 1.0);
        expect(static_cast<double>(G.orbit_count(G.base_point(), j)) <= bound,
               "orbit count obeys the packing bound");
    }
    DirichletSample smp = G.dirichlet_sample(100000, 2024);
    expect(std::fabs(smp.volume_estimate - 4.0 * M_PI) <= 0.02 * 4.0 * M_PI,
           "Dirichlet Monte-Carlo volume = 4 pi within 2%");
}

void criterion_3_transforms() {
    // closed form vs quadrature for g, alpha = 1, beta = 2, t = 1
    TestFunction tfh = TestFunction::family_h(SpectralWindow(1.25, 4.25), 1.0);
    double worst = 0.0;
    for (double u = 0.1; u <= 20.0; u += 0.25)
        worst = std::max(worst, std::fabs(tfh.g(u) - tfh.g_quadrature(u)));
    expect(worst <= 1e-8, "family-H g closed form vs Fourier quadrature (1e-8)");

    // g' vs finite differences, 1e-6 relative
    TestFunction tfd = TestFunction::family_h(SpectralWindow(0.75, 5.0), 1.3);
    bool fd_ok = true;
    for (double u = 0.5; u <= 10.0; u += 0.25) {
        const double h = 1e-5;
        const double fd = (tfd.g(u + h) - tfd.g(u - h)) / (2.0 * h);
        const double gp = tfd.g_prime(u);
        if (std::fabs(gp - fd) > 1e-6 * std::max(std::fabs(fd), 1e-12)) fd_ok = false;
    }
    expect(fd_ok, "g' matches finite differences (1e-6 relative)");

    // dual-path kernel agreement, 1e-7 of the kernel scale on [0.5, 8]
    TestFunction tfk = TestFunction::family_h(SpectralWindow(0.5, 5.0), 1.0);
    KernelProfile closed(tfk);
    KernelSettings ns;
    ns.force_numeric_gprime = true;
    KernelProfile numeric(tfk, ns);
    double kmax = 0.0;
    std::vector<std::pair<double, double>> kv;
    for (double rho = 0.5; rho <= 8.0; rho += 0.625) {
        const double a = closed(rho).value, b = numeric(rho).value;
        kmax = std::max(kmax, std::fabs(a));
        kv.emplace_back(a, b);
    }
    bool kd_ok = true;
    for (auto& [a, b] : kv)
        if (std::fabs(a - b) > 1e-7 * kmax) kd_ok = false;
    expect(kd_ok, "dual-path K agreement (1e-7 of scale) on [0.5, 8]");

    // window additivity of h, g, K
    const double t = 1.0;
    TestFunction f1 = TestFunction::family_h(SpectralWindow(0.5, 2.0), t);
    TestFunction f2 = TestFunction::family_h(SpectralWindow(2.0, 5.0), t);
    TestFunction f12 = TestFunction::family_h(SpectralWindow(0.5, 5.0), t);
    bool add_ok = true;
    for (double x = -3.0; x <= 3.0; x += 0.2)
        if (std::fabs(f1.h(x) + f2.h(x) - f12.h(x)) > 1e-13) add_ok = false;
    for (double u = 0.0; u <= 12.0; u += 0.4)
        if (std::fabs(f1.g(u) + f2.g(u) - f12.g(u)) > 1e-13) add_ok = false;
    expect(add_ok, "window additivity of h and g (1e-13)");
    KernelProfile k1(f1), k2(f2), k12(f12);
    bool addk_ok = true;
    for (double rho : {0.7, 1.8, 3.3, 6.0}) {
        const Certified a = k1(rho), b = k2(rho), c = k12(rho);
        if (std::fabs(a.value + b.value - c.value) >
            1e-9 + a.err + b.err + c.err + 1e-9 * std::fabs(c.value))
            addk_ok = false;
    }
    expect(addk_ok, "window additivity of K (combined tolerance)");

    // three-case smoothed-step bound on a 200 x 10 grid
    SpectralWindow w(0.3, 0.8);
    bool step_ok = true;
    for (int it = 1; it <= 10; ++it) {
        const double tt = 2.0 * it;
        TestFunction tf = TestFunction::family_b(w, tt);
        for (int i = 0; i < 200; ++i) {
            const double lam = 2.0 * i / 199.0;
            const double diff = std::fabs(tf.f(lam) - step_indicator(lam, w.a, w.b));
            if (diff > step_bound_cases(lam, w.a, w.b, tt) * (1.0 + 1e-9) + 1e-14)
                step_ok = false;
        }
    }
    expect(step_ok, "three-case step bound on a 200 x 10 grid");
}

void criterion_4_bounds() {
    const double r = 0.5;
    // g'_Bical decay (two delta_b cases)
    for (int mode = 0; mode < 2; ++mode) {
        SpectralWindow w = mode == 0 ? SpectralWindow(0.3, 0.8) : SpectralWindow(0.05, 0.15);
        const double t = 2.0;
        TestFunction tf = TestFunction::family_b(w, t);
        FittedConstant c = fit_constant([&](double u) { return tf.g_prime(u); },
                                        [&](double u) { return bound_gprime_b(u, t, w, r); },
                                        r, 6.0 * t * t, 30, true);
        expect(c.coarse > 0.0 && c.stable(0.2), "fourier-estimate bound stable");
    }
    // K_B, both regimes at t = 0.5
    {
        SpectralWindow w(0.3, 0.8);
        const double t = 0.5;
        KernelProfile prof(TestFunction::family_b(w, t));
        auto q = [&](double rho) { return prof(rho).value; };
        auto s = [&](double rho) { return bound_k_b(rho, t, w, r); };
        FittedConstant lo = fit_constant(q, s, 0.5, 1.45, 10, false);
        FittedConstant hi = fit_constant(q, s, 1.55, 6.0, 14, false);
        expect(lo.coarse > 0.0 && lo.stable(0.2), "K_B bound stable (rho <= 6 t^2)");
        expect(hi.coarse > 0.0 && hi.stable(0.2), "K_B bound stable (rho >= 6 t^2)");
    }
    // K_H at t = 1
    {
        SpectralWindow w(0.5, 5.0);
        KernelProfile prof(TestFunction::family_h(w, 1.0));
        FittedConstant c = fit_constant([&](double rho) { return prof(rho).value; },
                                        [&](double rho) { return bound_k_h(rho, 1.0, w, r); },
                                        0.5, 12.0, 25, false);
        expect(c.coarse > 0.0 && c.stable(0.2), "K_H bound stable");
    }
    // strip bound of the one-sided test function (x >= 0), explicit constant
    {
        SpectralWindow w(0.5, 5.0);
        auto h_one = [&](std::complex<double> z, double t) {
            const auto& x = gauss_legendre_nodes(16);
            const auto& wt = gauss_legendre_weights(16);
            const int np = std::max(8, static_cast<int>((w.beta - w.alpha) * t * 2.0) + 2);
            const double h = (w.beta - w.alpha) / np;
            std::complex<double> total(0.0, 0.0);
            for (int p = 0; p < np; ++p) {
                const double mid = w.alpha + (p + 0.5) * h;
                std::complex<double> s(0.0, 0.0);
                for (int i = 0; i < 16; ++i) {
                    const std::complex<double> d = z - (mid + 0.5 * h * x[i]);
                    s += wt[i] * std::exp(-t * t * d * d);
                }
                total += 0.5 * h * s;
            }
            return total * (t / std::sqrt(M_PI));
        };
        for (double t : {1.0, 2.0}) {
            double coarse = 0.0, fine = 0.0;
            for (int pass = 0; pass < 2; ++pass) {
                const int nx = pass == 0 ? 13 : 25, ny = pass == 0 ? 9 : 17;
                double mx = 0.0;
                for (int i = 0; i < nx; ++i)
                    for (int j = 0; j < ny; ++j) {
                        const double x = 3.0 * i / (nx - 1.0);
                        const double y = -1.0 + 2.0 * j / (ny - 1.0);
                        mx = std::max(mx, std::abs(h_one({x, y}, t)) /
                                              bound_h_strip_h(x, y, t, w));
                    }
                (pass == 0 ? coarse : fine) = mx;
            }
            expect(coarse > 0.0 && fine <= coarse * 1.2 && fine <= 1.0 + 1e-9,
                   "trace-decrease strip bound stable with constant <= 1");
        }
    }
    // integral remainder envelopes
    {
        SpectralWindow w(0.3, 0.8);
        auto ratio = [&](double t) {
            return std::fabs(integral_remainder(TestFunction::family_b(w, t)).value.value) /
                   bound_integral_b(t);
        };
        const double ts[7] = {5.0, 7.0711, 10.0, 14.142, 20.0, 28.284, 40.0};
        double coarse = 0.0, fine = 0.0;
        for (int i = 0; i < 7; i += 2) coarse = std::max(coarse, ratio(ts[i]));
        for (int i = 0; i < 7; ++i) fine = std::max(fine, ratio(ts[i]));
        expect(coarse > 0.0 && fine <= coarse * 1.2, "integral envelope B (1/t) stable");
    }
    {
        SpectralWindow w(0.05, 0.2);
        auto ratio = [&](double t) {
            return std::fabs(integral_remainder(TestFunction::family_b(w, t)).value.value) /
                   bound_integral_b_small(t, w);
        };
        const double ts[5] = {10.0, 14.142, 20.0, 28.284, 40.0};
        double coarse = 0.0, fine = 0.0;
        for (int i = 0; i < 5; i += 2) coarse = std::max(coarse, ratio(ts[i]));
        for (int i = 0; i < 5; ++i) fine = std::max(fine, ratio(ts[i]));
        expect(coarse > 0.0 && fine <= coarse * 1.2,
               "integral envelope B small-b (exponential) stable");
    }
    {
        SpectralWindow w(0.5, 5.0);
        auto ratio = [&](double t) {
            return std::fabs(integral_remainder(TestFunction::family_h(w, t)).value.value) /
                   bound_integral_h(t, w);
        };
        const double ts[7] = {2.0, 2.8284, 4.0, 5.6569, 8.0, 11.314, 16.0};
        double coarse = 0.0, fine = 0.0;
        for (int i = 0; i < 7; i += 2) coarse = std::max(coarse, ratio(ts[i]));
        for (int i = 0; i < 7; ++i) fine = std::max(fine, ratio(ts[i]));
        expect(coarse > 0.0 && fine <= coarse * 1.2, "integral envelope H stable");
    }
}

void criterion_5_trace(SurfaceModel& surf) {
    TestFunction tf = TestFunction::family_h(SpectralWindow(0.5, 5.0), 1.0);

    GeometricOptions build;
    build.L = 1.52;
    build.n_samples = 4000;
    build.seed = 71;
    build.threads = 2;

    // R_K^- certified zero at L <= 1.52
    TraceReport base = trace_terms(surf, tf, build);
    expect(base.geometric.thin_certified_empty && base.geometric.rk_minus == 0.0,
           "R_K^- = 0 certified at L <= 1.52");

    // synthetic spectrum: invert the identity, verify on fresh samples
    const double target =
        (base.main_term + base.integral_remainder + base.geometric.estimate) * surf.volume();
    expect(target > 1.0, "synthetic target is positive");
    double rem = target - tf.spectral_weight(0.0);
    const double w_star = tf.spectral_weight(2.0);
    const int m = static_cast<int>(std::floor(rem / w_star));
    double frac = rem - m * w_star;
    std::vector<double> spec{0.0};
    for (int i = 0; i < m; ++i) spec.push_back(2.0);
    {   // bisect the remaining weight onto one extra eigenvalue
        double lo = 2.0, hi = 45.0;
        double flo = tf.spectral_weight(lo) - frac;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = tf.spectral_weight(mid) - frac;
            if ((fm > 0) == (flo > 0)) { lo = mid; flo = fm; } else hi = mid;
        }
        spec.push_back(0.5 * (lo + hi));
    }
    std::sort(spec.begin(), spec.end());
    surf.set_spectrum(spec, 60.0);
    GeometricOptions verify = build;
    verify.seed = 72;
    TraceReport rep = trace_residual(surf, tf, verify);
    const double sig = std::sqrt(base.geometric.sigma * base.geometric.sigma +
                                 rep.geometric.sigma * rep.geometric.sigma);
    expect(rep.residual.has_value() && std::fabs(*rep.residual) <= 3.0 * sig + 1e-6,
           "synthetic-spectrum residual within 3 sigma");

    // geometric additivity within 3 sigma (independent seeds)
    std::vector<TestFunction> tfs{TestFunction::family_h(SpectralWindow(0.5, 2.0), 1.0),
                                  TestFunction::family_h(SpectralWindow(2.0, 5.0), 1.0)};
    GeometricOptions part_opts = build;
    part_opts.seed = 73;
    auto parts = geometric_term_multi(surf, tfs, part_opts);
    const double sig_add = std::sqrt(parts[0].sigma * parts[0].sigma +
                                     parts[1].sigma * parts[1].sigma +
                                     base.geometric.sigma * base.geometric.sigma);
    expect(std::fabs(parts[0].estimate + parts[1].estimate - base.geometric.estimate) <=
               3.0 * sig_add + 5e-4,
           "geometric-term window additivity within 3 sigma");

    // base-point invariance within 3 sigma (t = 0.8 keeps off-center domains
    // inside the guards)
    TestFunction tf8 = TestFunction::family_h(SpectralWindow(0.5, 5.0), 0.8);
    GeometricOptions inv = build;
    inv.seed = 74;
    GeometricTerm at_center = geometric_term(surf, tf8, inv);
    SurfaceModel moved(surf.group.with_base_point(Point(0.08, 1.15)));
    GeometricOptions inv2 = inv;
    inv2.seed = 75;
    GeometricTerm off_center = geometric_term(moved, tf8, inv2);
    const double sig_inv = std::sqrt(at_center.sigma * at_center.sigma +
                                     off_center.sigma * off_center.sigma);
    expect(std::fabs(at_center.estimate - off_center.estimate) <= 3.0 * sig_inv + 5e-4,
           "base-point invariance within 3 sigma");
}

void criterion_6_thin(SurfaceModel& surf) {
    ThinPartEstimate zero = thin_part_volume(surf, 1.0, 6000, 81);
    expect(zero.volume == 0.0 && zero.certified_zero, "thin part at L = 1.0 certified zero");

    std::vector<double> Ls{1.0, 1.53, 1.56, 1.6, 1.8, 2.0};
    auto prof = thin_part_profile(surf, Ls, 8000, 82);
    bool mono = true;
    for (std::size_t i = 0; i + 1 < prof.size(); ++i)
        if (prof[i].n_thin > prof[i + 1].n_thin) mono = false;
    expect(mono, "exact per-sample monotonicity in L (common random numbers)");

    for (std::size_t i = 0; i < Ls.size(); ++i) {
        if (Ls[i] < 1.6) continue;
        const double bound = bs_volume_bound(surf, Ls[i]);
        expect(bound >= prof[i].volume - 3.0 * prof[i].sigma,
               "bs_volume_bound >= estimate - 3 sigma");
    }

    // constructive collar membership on 500 thin samples
    DirichletSample smp = surf.group.dirichlet_sample(3000, 83);
    int checked = 0;
    bool collar_ok = true;
    for (const Point& z : smp.points) {
        if (surf.group.injectivity_radius_at(z) >= 1.6) continue;
        CollarWitness w = collar_membership(surf, z, 1.6);
        if (!w.found || w.axis_dist > w.d_max_value + 1e-9 || w.length > 3.2) collar_ok = false;
        if (++checked >= 500) break;
    }
    expect(checked >= 500 && collar_ok, "collar membership on 500 thin samples");
}

void criterion_7_envelopes() {
    expect(kSmallEigC == std::ldexp(1.0, -15), "c = 2^-15 bit-exact");

    std::uniform_real_distribution<double> ug(2.0, 1e9), ub(0.0, 30.0), uc(0.1, 5.0);
    bool forms_ok = true;
    for (int k = 0; k < 20; ++k) {
        const double g = ug(rng), b = ub(rng), C = uc(rng);
        const double a = std::max(0.0, b - ub(rng) / 40.0);
        const double vol = 2.0 * M_PI * (2.0 * g - 2.0);
        if (std::fabs(upper_bound_envelope(g, a, b, C) -
                      vol * C * (b - a + std::sqrt((b + 1.0) / std::log(g)))) >
            1e-12 * vol * C * 40.0)
            forms_ok = false;
        const double bs = std::min(b, 0.25);
        const double d = 0.25 - bs;
        if (std::fabs(small_eigenvalue_envelope(g, bs, C) -
                      vol * C * std::pow(g, -d * d / 32768.0) / std::pow(std::log(g), 0.75)) >
            1e-12 * vol * C)
            forms_ok = false;
        JthInterval iv = jth_envelope(g, std::floor(b * g / 30.0), C);
        const double jr = std::floor(b * g / 30.0) / g;
        if (std::fabs(iv.slack - C * (1.0 + std::sqrt(jr * std::log(2.0 + jr)))) > 1e-12 * C * 10.0)
            forms_ok = false;
        const double lam = ub(rng) / 10.0;
        double ref = C * g * std::sqrt((1.0 + lam) / std::log(g));
        if (lam < 0.25)
            ref = std::min(ref, C * g * std::pow(g, -(0.25 - lam) * (0.25 - lam) / 32768.0) /
                                    std::pow(std::log(g), 0.75));
        if (std::fabs(multiplicity_envelope(g, lam, C) - ref) > 1e-12 * ref) forms_ok = false;
    }
    expect(forms_ok, "envelope formulas match recomputation at 20 random points (1e-12)");

    const double b = 1e4;
    expect(std::fabs(main_term(SpectralWindow(0.0, b)) / (b / (4.0 * M_PI)) - 1.0) <= 0.01,
           "main_term(0, 1e4) matches b/(4 pi) within 1%");

    const double g = 64.0;
    std::vector<double> weyl(4000);
    for (long j = 0; j < 4000; ++j) weyl[j] = static_cast<double>(j) / g;
    SpectrumCheckReport rep = check_spectrum(weyl, g, EnvelopeConstants{});
    bool jth_ok = true;
    for (const auto& row : rep.rows)
        if (row.kind == "jth" && !row.pass) jth_ok = false;
    expect(jth_ok, "synthetic Weyl spectrum passes jth envelope with C = 1");

    const double gp = 3e5;
    std::vector<double> pile{0.0};
    for (long k = 0; k < 2 * static_cast<long>(gp) - 2; ++k) pile.push_back(0.01);
    SpectrumCheckReport rep2 = check_spectrum(pile, gp, EnvelopeConstants{});
    bool flagged = false;
    for (const auto& row : rep2.rows)
        if (row.kind == "small-eig" && !row.pass) flagged = true;
    expect(flagged, "pile-up spectrum flagged by the small-eigenvalue envelope");
}

void criterion_8_reproducibility(SurfaceModel& surf) {
    TestFunction tf = TestFunction::family_h(SpectralWindow(0.5, 5.0), 0.8);
    GeometricOptions o1;
    o1.L = 1.2;
    o1.n_samples = 1000;
    o1.seed = 4242;
    o1.threads = 1;
    GeometricOptions oN = o1;
    oN.threads = 4;
    TraceReport r1 = trace_terms(surf, tf, o1);
    TraceReport rN = trace_terms(surf, tf, oN);
    const std::string p1 = to_json(r1).dump();
    const std::string pN = to_json(rN).dump();
    expect(p1 == pN, "byte-identical report payloads across 1 and N threads");
    TraceReport r1b = trace_terms(surf, tf, o1);
    expect(to_json(r1b).dump() == p1, "byte-identical payloads across reruns");
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    run_criterion("1 geometry oracle suite", criterion_1_geometry);
    run_criterion("2 bolza group suite", criterion_2_bolza);
    run_criterion("3 transform chain suite", criterion_3_transforms);
    run_criterion("4 bound-shape suite", criterion_4_bounds);
    SurfaceModel surf(FuchsianGroup::bolza());
    run_criterion("5 trace assembly", [&] { criterion_5_trace(surf); });
    SurfaceModel surf6(surf.group);  // shares the enumeration cache
    run_criterion("6 thin-part suite", [&] { criterion_6_thin(surf6); });
    run_criterion("7 envelope evaluators", criterion_7_envelopes);
    SurfaceModel surf8(surf.group);
    run_criterion("8 reproducibility", [&] { criterion_8_reproducibility(surf8); });
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s: %d failing check(s), total %.1f s\n",
                g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL", g_failures, dt);
    return g_failures == 0 ? 0 : 1;
}
