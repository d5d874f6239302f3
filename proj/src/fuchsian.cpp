#include "selberg/fuchsian.hpp"
#include "selberg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <limits>
#include <map>
#include <unordered_map>

namespace selberg {

namespace {

struct El {
    double a, b, c, d;
};

inline El mul(const El& x, const El& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

inline El inverse(const El& x) { return {x.d, -x.b, -x.c, x.a}; }

inline void normalize(El& m) {
    const double det = m.a * m.d - m.b * m.c;
    if (std::fabs(det - 1.0) > 1e-13) {
        const double s = 1.0 / std::sqrt(det);
        m.a *= s; m.b *= s; m.c *= s; m.d *= s;
    }
    const double e[4] = {m.a, m.b, m.c, m.d};
    double mx = 0.0;
    for (double v : e) mx = std::max(mx, std::fabs(v));
    for (double v : e) {
        if (std::fabs(v) >= 0.5 * mx) {
            if (v < 0.0) { m.a = -m.a; m.b = -m.b; m.c = -m.c; m.d = -m.d; }
            break;
        }
    }
}

// displacement of m at z0 = (x0, y0), in the stable 2 asinh form
inline double displacement(const El& m, double x0, double y0) {
    const double cr = m.c * x0 + m.d;
    const double ci = m.c * y0;
    const double den = cr * cr + ci * ci;
    const double nr = m.a * x0 + m.b;
    const double ni = m.a * y0;
    const double gx = (nr * cr + ni * ci) / den;
    const double gy = (ni * cr - nr * ci) / den;
    const double dx = gx - x0, dy = gy - y0;
    return 2.0 * std::asinh(0.5 * std::sqrt((dx * dx + dy * dy) / (y0 * gy)));
}

// --- deduplication ------------------------------------------------------
//
// Group elements reached along different BFS paths drift by ~1e-13 relative.
// Keys are quantized in asinh coordinates (magnitude-uniform), with explicit
// probing of the neighbour cell whenever a coordinate falls near a cell
// boundary, plus a final merge sweep on the kept list. Flat 1e-9 rounding of
// raw entries was measured to duplicate elements wholesale past radius ~11.

constexpr double kQuant = 1e-7;
constexpr double kBoundaryZone = 1e-4;

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t fp_of_key(const std::int64_t q[4]) {
    std::uint64_t h = 0x243f6a8885a308d3ull;
    for (int i = 0; i < 4; ++i) h = mix64(h ^ static_cast<std::uint64_t>(q[i]));
    return h ? h : 1;
}

struct KeyGen {
    std::int64_t floor_key[4];
    std::int64_t canon[4];
    unsigned flags;  // bit i: coordinate i near a cell boundary
};

inline KeyGen keygen(const El& m) {
    KeyGen kg;
    kg.flags = 0;
    const double e[4] = {m.a, m.b, m.c, m.d};
    for (int i = 0; i < 4; ++i) {
        const double v = std::asinh(e[i]) / kQuant;
        const double fl = std::floor(v);
        kg.floor_key[i] = static_cast<std::int64_t>(fl);
        kg.canon[i] = static_cast<std::int64_t>(std::llround(v));
        if (std::fabs(v - fl - 0.5) < kBoundaryZone) kg.flags |= (1u << i);
    }
    return kg;
}

class FpTable {
public:
    explicit FpTable(std::size_t expected) {
        std::size_t cap = 1024;
        while (cap < expected * 2) cap <<= 1;
        slots_.assign(cap, 0);
        mask_ = cap - 1;
    }

    bool contains(std::uint64_t fp) const {
        std::size_t i = fp & mask_;
        while (slots_[i]) {
            if (slots_[i] == fp) return true;
            i = (i + 1) & mask_;
        }
        return false;
    }

    void insert(std::uint64_t fp) {
        if (count_ * 2 > slots_.size()) grow();
        std::size_t i = fp & mask_;
        while (slots_[i]) {
            if (slots_[i] == fp) return;
            i = (i + 1) & mask_;
        }
        slots_[i] = fp;
        ++count_;
    }

    std::size_t count() const { return count_; }

private:
    void grow() {
        std::vector<std::uint64_t> old;
        old.swap(slots_);
        slots_.assign(old.size() * 2, 0);
        mask_ = slots_.size() - 1;
        for (std::uint64_t fp : old) {
            if (!fp) continue;
            std::size_t i = fp & mask_;
            while (slots_[i]) i = (i + 1) & mask_;
            slots_[i] = fp;
        }
    }

    std::vector<std::uint64_t> slots_;
    std::size_t mask_ = 0;
    std::size_t count_ = 0;
};

// true if the element was new; inserts its canonical fingerprint
bool dedup_insert(FpTable& t, const El& m) {
    const KeyGen kg = keygen(m);
    if (!kg.flags) {
        if (t.contains(fp_of_key(kg.canon))) return false;
        t.insert(fp_of_key(kg.canon));
        return true;
    }
    int flagged[4], n = 0;
    for (int i = 0; i < 4; ++i)
        if (kg.flags & (1u << i)) flagged[n++] = i;
    for (int massk = 0; massk < (1 << n); ++massk) {
        std::int64_t key[4] = {kg.canon[0], kg.canon[1], kg.canon[2], kg.canon[3]};
        for (int j = 0; j < n; ++j) key[flagged[j]] = kg.floor_key[flagged[j]] + ((massk >> j) & 1);
        if (t.contains(fp_of_key(key))) return false;
    }
    t.insert(fp_of_key(kg.canon));
    return true;
}

// coarse lookup key for indexing a fixed element list (1e-6 quantum)
inline std::uint64_t coarse_fp(const El& m) {
    std::int64_t q[4];
    const double e[4] = {m.a, m.b, m.c, m.d};
    for (int i = 0; i < 4; ++i) q[i] = std::llround(std::asinh(e[i]) / 1e-6);
    return fp_of_key(q);
}

inline std::uint64_t splitmix_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    return mix64(state);
}

inline double uniform01(std::uint64_t& state) {
    return (splitmix_next(state) >> 11) * 0x1.0p-53;
}

}  // namespace

long LengthSpectrum::count_up_to(double L) const {
    long n = 0;
    for (const auto& e : entries)
        if (e.length <= L + 1e-12) n += e.multiplicity;
    return n;
}

struct FuchsianGroup::Cache {
    std::vector<double> a, b, c, d, disp;  // sorted by disp ascending
    double radius = 0.0;
    double growth_coeff = 0.0;  // N(R) ~ growth_coeff * e^R, measured

    std::size_t size() const { return disp.size(); }
    El el(std::size_t i) const { return {a[i], b[i], c[i], d[i]}; }
};

FuchsianGroup::FuchsianGroup(std::vector<Mobius> gens, int genus, Point base, bool verified)
    : gens_(std::move(gens)), genus_(genus), base_(base), cocompact_verified_(verified),
      mu_(std::make_shared<std::mutex>()) {
    const char* env = std::getenv("SELBERG_LAB_RMAX");
    if (env) {
        try {
            limits_.r_max = std::stod(env);
        } catch (...) {
            throw InputError("SELBERG_LAB_RMAX is not a number");
        }
    }
}

FuchsianGroup FuchsianGroup::bolza() {
    const double sq2 = std::sqrt(2.0);
    const double al = 1.0 + sq2;
    const double s = std::sqrt(2.0 + 2.0 * sq2);
    std::vector<Mobius> gens;
    for (int k = 0; k < 4; ++k) {
        const double b0 = s * std::cos(k * M_PI / 4.0);
        const double b1 = s * std::sin(k * M_PI / 4.0);
        gens.emplace_back(al + b0, -b1, -b1, al - b0);
    }
    for (int k = 0; k < 4; ++k) gens.push_back(gens[k].inverse());
    return FuchsianGroup(std::move(gens), 2, Point::i(), true);
}

FuchsianGroup FuchsianGroup::from_generators(const std::vector<Mobius>& mats, int genus,
                                             double discreteness_floor) {
    if (mats.empty()) throw InputError("generator list is empty");
    if (genus < 1) throw InputError("genus must be >= 1");
    std::vector<Mobius> gens;
    FpTable seen(64);
    for (const Mobius& m : mats) {
        if (m.is_identity(discreteness_floor))
            throw InputError("discreteness floor violated: identity generator");
        El e{m.a(), m.b(), m.c(), m.d()};
        if (dedup_insert(seen, e)) gens.push_back(m);
    }
    const std::size_t n_direct = gens.size();
    for (std::size_t i = 0; i < n_direct; ++i) {
        Mobius inv = gens[i].inverse();
        El e{inv.a(), inv.b(), inv.c(), inv.d()};
        if (dedup_insert(seen, e)) gens.push_back(inv);
    }
    FuchsianGroup g(std::move(gens), genus, Point::i(), false);

    // discreteness sanity check: bounded BFS, any non-identity word moving
    // the base point by less than the floor is rejected
    FpTable table(4096);
    std::vector<El> frontier{{1, 0, 0, 1}};
    dedup_insert(table, frontier[0]);
    const double x0 = g.base_.x, y0 = g.base_.y;
    const double r_check = 3.0;
    for (int depth = 0; depth < 8 && !frontier.empty() && table.count() < 50000; ++depth) {
        std::vector<El> next;
        for (const El& m : frontier) {
            for (const Mobius& gen : g.gens_) {
                El ch = mul(m, {gen.a(), gen.b(), gen.c(), gen.d()});
                normalize(ch);
                const double dd = displacement(ch, x0, y0);
                if (dd > r_check) continue;
                if (!dedup_insert(table, ch)) continue;
                if (dd < discreteness_floor)
                    throw InputError("discreteness floor violated: element with displacement " +
                                     std::to_string(dd));
                next.push_back(ch);
            }
        }
        frontier = std::move(next);
    }
    return g;
}

FuchsianGroup FuchsianGroup::with_base_point(const Point& z) const {
    FuchsianGroup g(gens_, genus_, z, cocompact_verified_);
    g.limits_ = limits_;
    return g;
}

double FuchsianGroup::predicted_count(double radius) const {
    std::lock_guard<std::mutex> lock(*mu_);
    double coeff = 0.3;  // prior of order 1/(volume/2pi)
    if (cache_ && cache_->growth_coeff > 0) coeff = cache_->growth_coeff;
    return coeff * std::exp(radius);
}

std::shared_ptr<FuchsianGroup::Cache> FuchsianGroup::build_cache(double radius,
                                                                 double coeff) const {
    const double r_expand = radius + limits_.bfs_margin;
    const double predicted_visited = coeff * std::exp(r_expand) * 1.3 + 1024;
    if (predicted_visited > static_cast<double>(limits_.max_visited))
        throw RadiusGuardError("radius exceeds guard: predicted " +
                               std::to_string(predicted_visited) + " elements at radius " +
                               std::to_string(radius));

    FpTable table(static_cast<std::size_t>(std::min(predicted_visited, 1e9)));
    std::vector<El> frontier{{1, 0, 0, 1}};
    dedup_insert(table, frontier[0]);
    const double x0 = base_.x, y0 = base_.y;

    std::vector<std::pair<double, El>> kept;
    kept.reserve(static_cast<std::size_t>(coeff * std::exp(radius) * 1.2) + 64);

    std::vector<El> gens;
    gens.reserve(gens_.size());
    for (const Mobius& g : gens_) gens.push_back({g.a(), g.b(), g.c(), g.d()});

    while (!frontier.empty()) {
        std::vector<El> next;
        for (const El& m : frontier) {
            for (const El& g : gens) {
                El ch = mul(m, g);
                normalize(ch);
                const double dd = displacement(ch, x0, y0);
                if (dd > r_expand) continue;
                if (!dedup_insert(table, ch)) continue;
                if (table.count() > limits_.max_visited)
                    throw RadiusGuardError("radius exceeds guard: enumeration cap hit");
                next.push_back(ch);
                if (dd <= radius && dd > 1e-9) kept.emplace_back(dd, ch);
            }
        }
        frontier = std::move(next);
    }

    std::sort(kept.begin(), kept.end(), [](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first < y.first;
        if (x.second.a != y.second.a) return x.second.a < y.second.a;
        if (x.second.b != y.second.b) return x.second.b < y.second.b;
        if (x.second.c != y.second.c) return x.second.c < y.second.c;
        return x.second.d < y.second.d;
    });

    // merge sweep: collapse residual duplicates of the same group element
    auto cache = std::make_shared<Cache>();
    cache->radius = radius;
    auto same_element = [](const El& p, const El& q) {
        const double sc = std::max({std::fabs(q.a), std::fabs(q.b), std::fabs(q.c),
                                    std::fabs(q.d), 1.0});
        return std::fabs(p.a - q.a) + std::fabs(p.b - q.b) + std::fabs(p.c - q.c) +
                   std::fabs(p.d - q.d) <
               1e-6 * sc;
    };
    for (const auto& [dd, m] : kept) {
        bool dup = false;
        for (std::size_t j = cache->size(); j-- > 0;) {
            if (dd - cache->disp[j] > 1e-6) break;
            if (same_element(m, cache->el(j))) {
                dup = true;
                break;
            }
        }
        if (dup) continue;
        cache->a.push_back(m.a);
        cache->b.push_back(m.b);
        cache->c.push_back(m.c);
        cache->d.push_back(m.d);
        cache->disp.push_back(dd);
    }

    if (radius >= 5.0 && cache->size() > 16)
        cache->growth_coeff = static_cast<double>(cache->size()) / std::exp(radius);
    else
        cache->growth_coeff = coeff;
    return cache;
}

void FuchsianGroup::ensure_radius(double radius) const {
    std::lock_guard<std::mutex> lock(*mu_);
    if (cache_ && cache_->radius >= radius - 1e-12) return;

    double coeff = 0.3;
    if (cache_ && cache_->growth_coeff > 0) {
        coeff = cache_->growth_coeff;
    } else if (radius > 8.0) {
        // measure growth on a cheap ball before committing to a large one
        cache_ = build_cache(7.0, coeff);
        coeff = cache_->growth_coeff;
    }
    cache_ = build_cache(radius, coeff);
}

OrbitView FuchsianGroup::orbit_view(double radius) const {
    ensure_radius(radius);
    std::lock_guard<std::mutex> lock(*mu_);
    OrbitView v;
    v.a = cache_->a.data();
    v.b = cache_->b.data();
    v.c = cache_->c.data();
    v.d = cache_->d.data();
    v.disp = cache_->disp.data();
    v.size = cache_->size();
    v.radius = cache_->radius;
    return v;
}

std::vector<Mobius> FuchsianGroup::enumerate_ball(const Point& z, double R) const {
    if (R > limits_.r_max)
        throw RadiusGuardError("radius exceeds guard: R = " + std::to_string(R) +
                               " > r_max = " + std::to_string(limits_.r_max));
    if (R <= 0.0) return {};
    const double delta = dist(base_, z);
    OrbitView v = orbit_view(R + 2.0 * delta + 1e-9);
    std::vector<Mobius> out;
    const double x0 = z.x, y0 = z.y;
    for (std::size_t i = 0; i < v.size; ++i) {
        const El m{v.a[i], v.b[i], v.c[i], v.d[i]};
        if (displacement(m, x0, y0) <= R) out.emplace_back(m.a, m.b, m.c, m.d);
    }
    return out;
}

long FuchsianGroup::orbit_count(const Point& z, double R) const {
    return 1 + static_cast<long>(enumerate_ball(z, R).size());
}

double FuchsianGroup::injectivity_radius_at(const Point& z) const {
    const double delta = dist(base_, z);
    double R = 4.0;
    while (true) {
        OrbitView v = orbit_view(R + 2.0 * delta + 1e-9);
        double min_disp = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < v.size; ++i) {
            const El m{v.a[i], v.b[i], v.c[i], v.d[i]};
            min_disp = std::min(min_disp, displacement(m, z.x, z.y));
        }
        if (min_disp <= R) return 0.5 * min_disp;  // certified: ball covers the minimum
        if (R >= limits_.r_max)
            throw RadiusGuardError("radius exceeds guard: injectivity radius not certified");
        R = std::min(R * 1.5, limits_.r_max);
    }
}

DirichletSample FuchsianGroup::dirichlet_sample(int n, std::uint64_t seed) const {
    if (n < 1) throw InputError("dirichlet_sample requires n >= 1");
    const double vol = volume();

    // translation moving i to the base point
    const double sy = std::sqrt(base_.y);
    const El to_base{sy, base_.x / sy, 0.0, 1.0 / sy};

    auto propose = [&](std::uint64_t& rng, double R) {
        const double u = uniform01(rng);
        const double theta = 2.0 * M_PI * uniform01(rng);
        const double rho = acosh1p(u * (std::cosh(R) - 1.0));
        const double w = std::tanh(0.5 * rho);
        const double wr = w * std::cos(theta), wi = w * std::sin(theta);
        // disk -> upper half-plane, i at the center: z = i(1+w)/(1-w)
        const double den = (1.0 - wr) * (1.0 - wr) + wi * wi;
        const double zr = 2.0 * wi / den;
        const double zi = (1.0 - wr * wr - wi * wi) / den;
        const double gx = (to_base.a * zr + to_base.b) / to_base.d;
        const double gy = to_base.a * zi / to_base.d;
        return Point(gx, gy);
    };

    auto in_domain = [&](const Point& z, const OrbitView& v, double q0, double dz) {
        // z in Dirichlet domain iff dist(base, z) <= dist(gamma base, z); a
        // violator satisfies dist(base, gamma base) < 2 dist(base, z), so the
        // displacement-sorted scan stops there (closest orbit points first)
        const double cap = 2.0 * dz + 1e-12;
        const std::size_t jmax = std::upper_bound(v.disp, v.disp + v.size, cap) - v.disp;
        for (std::size_t i = 0; i < jmax; ++i) {
            const double cr = v.c[i] * base_.x + v.d[i];
            const double ci = v.c[i] * base_.y;
            const double dd = cr * cr + ci * ci;
            const double nr = v.a[i] * base_.x + v.b[i];
            const double ni = v.a[i] * base_.y;
            const double ox = (nr * cr + ni * ci) / dd;
            const double oy = (ni * cr - nr * ci) / dd;
            const double dx = z.x - ox, dy = z.y - oy;
            const double q = (dx * dx + dy * dy) / (2.0 * z.y * oy);
            if (q < q0) return false;
        }
        return true;
    };

    // calibration: expand the proposal ball until the estimated domain volume
    // stabilizes at the topological value
    const double r_limit = limits_.r_max / 2.0;
    double R = 1.5;
    double ball_area = 0.0;
    bool converged = false;
    const int n_cal = 200000;
    while (R <= r_limit + 1e-9) {
        OrbitView v = orbit_view(2.0 * R + 1e-9);
        std::uint64_t rng = mix64(seed ^ 0xd1ce5bull) ^ mix64(static_cast<std::uint64_t>(R * 4096.0));
        long acc = 0;
        for (int k = 0; k < n_cal; ++k) {
            Point z = propose(rng, R);
            const double q0 = cosh_dist_minus_1(base_, z);
            if (in_domain(z, v, q0, dist(base_, z))) ++acc;
        }
        ball_area = 2.0 * M_PI * (std::cosh(R) - 1.0);
        const double p = static_cast<double>(acc) / n_cal;
        const double est = p * ball_area;
        const double sigma_rel = std::sqrt(std::max(1.0 - p, 0.0) / (std::max(p, 1e-6) * n_cal));
        if (std::fabs(est / vol - 1.0) <= 0.005 + 3.0 * sigma_rel) {
            converged = true;
            break;
        }
        R += 0.5;
    }
    if (!converged)
        throw CertificationError("domain volume failed to converge within the expansion limit");

    OrbitView v = orbit_view(2.0 * R + 1e-9);
    DirichletSample out;
    out.ball_radius = R;
    out.points.reserve(n);
    long proposals = 0;
    for (int k = 0; k < n; ++k) {
        std::uint64_t rng = mix64(seed ^ mix64(0x5a3b1e00ull + static_cast<std::uint64_t>(k)));
        while (true) {
            ++proposals;
            Point z = propose(rng, R);
            const double q0 = cosh_dist_minus_1(base_, z);
            if (in_domain(z, v, q0, dist(base_, z))) {
                out.points.push_back(z);
                break;
            }
        }
    }
    out.accepted_fraction = static_cast<double>(n) / proposals;
    out.volume_estimate = out.accepted_fraction * 2.0 * M_PI * (std::cosh(R) - 1.0);
    return out;
}

LengthSpectrum FuchsianGroup::primitive_length_spectrum(double l_max) const {
    if (l_max > limits_.r_max)
        throw RadiusGuardError("radius exceeds guard: l_max > r_max");
    LengthSpectrum out;
    out.l_max = l_max;
    if (l_max <= 0.0) return out;

    // classes of length <= l_max have a representative whose displacement at
    // the base point exceeds the length by at most ~2 log cosh(covering
    // radius); enumerate with margin and certify by stabilization
    double margin = 3.5;
    std::vector<LengthSpectrumEntry> prev;
    for (int round = 0; round < 3; ++round, margin += 1.0) {
        OrbitView v = orbit_view(l_max + margin);

        // index all enumerated elements for conjugation lookups
        std::unordered_map<std::uint64_t, int> index;
        index.reserve(v.size * 2);
        for (std::size_t i = 0; i < v.size; ++i)
            index.emplace(coarse_fp({v.a[i], v.b[i], v.c[i], v.d[i]}), static_cast<int>(i));

        std::vector<int> uf(v.size);
        for (std::size_t i = 0; i < v.size; ++i) uf[i] = static_cast<int>(i);
        std::function<int(int)> find = [&](int x) {
            while (uf[x] != x) {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            return x;
        };
        auto unite = [&](int x, int y) {
            x = find(x);
            y = find(y);
            if (x != y) uf[x] = y;
        };

        std::vector<El> gens;
        for (const Mobius& g : gens_) gens.push_back({g.a(), g.b(), g.c(), g.d()});
        for (std::size_t i = 0; i < v.size; ++i) {
            const El m{v.a[i], v.b[i], v.c[i], v.d[i]};
            for (const El& g : gens) {
                El cj = mul(mul(g, m), inverse(g));
                normalize(cj);
                auto it = index.find(coarse_fp(cj));
                if (it != index.end()) unite(static_cast<int>(i), it->second);
            }
            El iv = inverse(m);
            normalize(iv);
            auto it = index.find(coarse_fp(iv));
            if (it != index.end()) unite(static_cast<int>(i), it->second);
        }

        // trace clustering of hyperbolic elements with length <= l_max
        std::vector<std::pair<double, int>> hyp;  // (|trace|, element index)
        for (std::size_t i = 0; i < v.size; ++i) {
            const double tr = std::fabs(v.a[i] + v.d[i]);
            if (tr <= 2.0) continue;
            const double ell = 2.0 * acosh1p(0.5 * tr - 1.0);
            if (ell <= l_max + 1e-12) hyp.emplace_back(tr, static_cast<int>(i));
        }
        std::sort(hyp.begin(), hyp.end());

        struct Cluster {
            double trace;
            double length;
            std::vector<int> roots;
        };
        std::vector<Cluster> clusters;
        std::size_t i = 0;
        while (i < hyp.size()) {
            std::size_t j = i;
            while (j + 1 < hyp.size() && hyp[j + 1].first - hyp[j].first < 1e-8) ++j;
            Cluster cl;
            cl.trace = hyp[i].first;
            cl.length = 2.0 * acosh1p(0.5 * cl.trace - 1.0);
            std::vector<int> roots;
            for (std::size_t k = i; k <= j; ++k) roots.push_back(find(hyp[k].second));
            std::sort(roots.begin(), roots.end());
            roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
            cl.roots = std::move(roots);
            clusters.push_back(std::move(cl));
            i = j + 1;
        }

        // primitive filter: drop clusters whose trace matches 2 cosh(k l/2)
        // of a smaller retained length, k >= 2
        std::vector<LengthSpectrumEntry> entries;
        std::vector<double> primitive_lengths;
        for (const Cluster& cl : clusters) {
            bool is_power = false;
            for (double lp : primitive_lengths) {
                for (int k = 2; k * lp <= cl.length + 1e-6; ++k) {
                    if (std::fabs(2.0 * std::cosh(0.5 * k * lp) - cl.trace) < 1e-8) {
                        is_power = true;
                        break;
                    }
                }
                if (is_power) break;
            }
            if (is_power) continue;
            primitive_lengths.push_back(cl.length);
            entries.push_back({cl.length, static_cast<int>(cl.roots.size())});
        }

        if (round > 0 && entries.size() == prev.size()) {
            bool same = true;
            for (std::size_t k = 0; k < entries.size(); ++k)
                if (std::fabs(entries[k].length - prev[k].length) > 1e-9 ||
                    entries[k].multiplicity != prev[k].multiplicity)
                    same = false;
            if (same) {
                out.entries = entries;
                return out;
            }
        }
        prev = entries;
    }
    out.entries = prev;  // stabilization exhausted; report the last round
    return out;
}

}  // namespace selberg
