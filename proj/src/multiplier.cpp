#include "sparsespec/multiplier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "sparsespec/rng.hpp"

namespace sparsespec {

namespace {

constexpr double eta_lo = 0.52;
constexpr double eta_hi = 0.99;

// 20-point Gauss-Legendre on [-1, 1], nodes by Newton on P_20.
struct GaussLegendre {
    std::array<double, 20> node{};
    std::array<double, 20> weight{};

    GaussLegendre() {
        const int n = 20;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = x;
                for (int j = 2; j <= n; ++j) {
                    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16)
                    break;
            }
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            node[static_cast<std::size_t>(i)] = x;
            weight[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }
};

const GaussLegendre& gl20() {
    static const GaussLegendre g;
    return g;
}

double bridge_bump(double t) { // endpoint-flat, positive inside (eta_lo, eta_hi)
    if (t <= eta_lo || t >= eta_hi)
        return 0.0;
    return std::exp(-1.0 / ((t - eta_lo) * (eta_hi - t)));
}

// composite 8-panel Gauss-Legendre of the bridge bump over [eta_lo, x]
double bridge_integral(double x) {
    const auto& g = gl20();
    double acc = 0.0;
    const int panels = 8;
    for (int p = 0; p < panels; ++p) {
        const double a = eta_lo + (x - eta_lo) * p / panels;
        const double b = eta_lo + (x - eta_lo) * (p + 1) / panels;
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        for (int i = 0; i < 20; ++i)
            acc += g.weight[static_cast<std::size_t>(i)] * half *
                   bridge_bump(mid + half * g.node[static_cast<std::size_t>(i)]);
    }
    return acc;
}

double bridge_total() {
    static const double total = bridge_integral(eta_hi);
    return total;
}

} // namespace

double psi_eval(double t) {
    if (t <= -1.0 || t >= 1.0)
        return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

double eta_eval(double x) {
    if (x <= eta_lo)
        return 1.0;
    if (x >= eta_hi)
        return 0.0;
    // clamp away quadrature roundoff at the 1e-15 scale near the ends
    return std::clamp(1.0 - bridge_integral(x) / bridge_total(), 0.0, 1.0);
}

double phi_eval(double x) { return eta_eval(x) - eta_eval(2.0 * x); }

double partition_check(double log2x_lo, double log2x_hi, int samples) {
    if (samples < 2)
        throw Error(errc::bad_input, "partition_check needs at least 2 samples");
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double l2x = log2x_lo + (log2x_hi - log2x_lo) * i / (samples - 1);
        const double x = std::exp2(l2x);
        double sum = 0.0;
        for (int k = -60; k <= 60; ++k)
            sum += phi_eval(std::ldexp(x, k));
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    return worst;
}

std::vector<std::int64_t> MultiplierSpec::support() const {
    std::vector<std::int64_t> out;
    out.reserve(table.size());
    for (const auto& [n, v] : table)
        out.push_back(n);
    return out;
}

std::int64_t MultiplierSpec::max_frequency() const {
    return table.empty() ? 0 : table.rbegin()->first;
}

MultiplierSpec build_m(const SpectrumSpec& spec, const WeightSequence& weights, std::int64_t n_trunc) {
    if (n_trunc > spec.truncation)
        throw Error(errc::bad_input, "multiplier truncation exceeds the spectrum spec");
    if (n_trunc > 60)
        throw Error(errc::truncation_too_large, "multiplier table needs N <= 60");
    if (weights.k_max() < n_trunc)
        throw Error(errc::bad_input, "weights not defined up to N");
    require_radius_hypothesis(spec.radii, n_trunc, "build_m");

    MultiplierSpec m;
    m.spec = spec;
    m.weights = weights;
    m.n_trunc = n_trunc;
    for (std::int64_t k = 0; k <= n_trunc; ++k) {
        const std::size_t s = spec.lambda_block_of(k);
        const double r_s = std::exp2(spec.radii.log2_at(spec.lambda[s]));
        m.r_lambda.push_back(r_s);
        const std::int64_t center = std::int64_t{1} << k;
        const auto reach = static_cast<std::int64_t>(r_s) + 1;
        for (std::int64_t d = -reach; d <= reach; ++d) {
            if (center + d < 1)
                continue;
            if (!is_allowed(center + d, spec))
                continue; // stay inside [2^k - r_k, 2^k + r_k]
            // psi(0) = 1 kept exact so that m(2^k) w_k = 1
            const double value =
                d == 0 ? 1.0 / weights.at(k) : psi_eval(static_cast<double>(d) / r_s) / weights.at(k);
            if (value > 0.0)
                m.table[center + d] = value;
        }
    }
    return m;
}

SampledFunction apply_M(const SpectralVector& nu_hat, const MultiplierSpec& m, std::int64_t grid) {
    if (2 * m.max_frequency() >= grid)
        throw Error(errc::frequency_overflow, "apply_M needs max supported n < G/2");
    SpectralVector out;
    for (const auto& [n, value] : m.table) {
        const cplx c = nu_hat.at(n);
        if (c != cplx{0.0, 0.0})
            out.set(n, value * c);
    }
    return synthesize(out, grid);
}

SampledFunction apply_M(const AtomicMeasure& nu, const MultiplierSpec& m, std::int64_t grid) {
    return apply_M(measure_coeffs(nu, m.support()), m, grid);
}

SampledFunction apply_M(const SampledFunction& f, const MultiplierSpec& m, std::int64_t grid) {
    return apply_M(analyze(f), m, grid);
}

namespace {

double projection_weight(std::int64_t k, std::int64_t n) {
    if (k > 0)
        return phi_eval(std::ldexp(static_cast<double>(n), static_cast<int>(-k)));
    if (k < 0)
        return phi_eval(-std::ldexp(static_cast<double>(n), static_cast<int>(k)));
    return n == 0 ? 1.0 : 0.0;
}

SpectralVector project(const SpectralVector& v, std::int64_t k) {
    SpectralVector out;
    for (const auto& [n, c] : v) {
        const double w = projection_weight(k, n);
        if (w != 0.0)
            out.set(n, w * c);
    }
    return out;
}

// scales k with phi(2^{-k} n) (or the mirrored version) alive on the support
std::vector<std::int64_t> active_scales(const SpectralVector& v) {
    std::set<std::int64_t> ks;
    for (const auto& [n, c] : v) {
        if (n == 0) {
            ks.insert(0);
            continue;
        }
        const double mag = static_cast<double>(n > 0 ? n : -n);
        // 0.26 <= mag / 2^k <= 0.99, widened a step against rounding at the edges
        const auto k_lo = static_cast<std::int64_t>(std::ceil(std::log2(mag / 0.99))) - 1;
        const auto k_hi = static_cast<std::int64_t>(std::floor(std::log2(mag / 0.26))) + 1;
        for (std::int64_t k = std::max<std::int64_t>(1, k_lo); k <= k_hi; ++k)
            ks.insert(n > 0 ? k : -k);
    }
    return {ks.begin(), ks.end()};
}

} // namespace

SampledFunction apply_Pk(const SampledFunction& f, std::int64_t k, std::int64_t grid) {
    return synthesize(project(analyze(f), k), grid);
}

SampledFunction square_function(const SampledFunction& f, std::int64_t grid) {
    const auto v = analyze(f);
    std::vector<double> acc(static_cast<std::size_t>(grid), 0.0);
    for (const std::int64_t k : active_scales(v)) {
        const auto pk = synthesize(project(v, k), grid);
        for (std::size_t j = 0; j < acc.size(); ++j)
            acc[j] += std::norm(pk.samples()[j]);
    }
    auto out = SampledFunction::zeros(grid);
    for (std::size_t j = 0; j < acc.size(); ++j)
        out[static_cast<std::int64_t>(j)] = std::sqrt(acc[j]);
    return out;
}

KernelFamily kernel_family(const MultiplierSpec& m, std::int64_t grid) {
    if (grid < 4 * (std::int64_t{1} << m.n_trunc))
        throw Error(errc::grid_too_coarse, "kernel grid must oversample 2^N by >= 4");
    if (m.r_lambda.size() != static_cast<std::size_t>(m.n_trunc) + 1)
        throw Error(errc::bad_input, "multiplier spec not produced by build_m");
    KernelFamily fam;
    fam.grid = grid;
    for (std::int64_t k = 1; k <= m.n_trunc + 1; ++k) {
        const double r_s = m.r_lambda[static_cast<std::size_t>(k - 1)];
        const double inv_w = 1.0 / m.weights.at(k - 1);
        const std::int64_t center = std::int64_t{1} << (k - 1);
        SpectralVector coeffs;
        const auto reach = static_cast<std::int64_t>(r_s) + 1;
        for (std::int64_t d = -reach; d <= reach; ++d) {
            const double value = d == 0 ? inv_w : psi_eval(static_cast<double>(d) / r_s) * inv_w;
            if (value != 0.0)
                coeffs.set(center + d, value);
        }
        fam.k_index.push_back(k);
        fam.kernels.push_back(synthesize(coeffs, grid));
    }
    return fam;
}

SampledFunction kernel_unsimplified(const MultiplierSpec& m, std::int64_t k, std::int64_t grid) {
    SpectralVector coeffs;
    for (const auto& [n, value] : m.table) {
        const double w = projection_weight(k, n);
        if (w != 0.0)
            coeffs.set(n, w * value);
    }
    return synthesize(coeffs, grid);
}

namespace {

// y = +-2^{-j} (1 + u/8) snapped to the grid; scale-spanning sample set for
// the kernel bounds
std::vector<std::int64_t> dyadic_offsets(std::int64_t grid) {
    std::set<std::int64_t> idx;
    const auto jmax = static_cast<std::int64_t>(std::log2(static_cast<double>(grid))) - 2;
    for (std::int64_t j = 2; j <= jmax; ++j) {
        for (int u = 0; u < 8; ++u) {
            const double y = std::exp2(-static_cast<double>(j)) * (1.0 + u / 8.0);
            const auto off = static_cast<std::int64_t>(std::llround(y * static_cast<double>(grid)));
            if (off > 0 && off < grid / 2) {
                idx.insert(off);
                idx.insert(-off);
            }
        }
    }
    return {idx.begin(), idx.end()};
}

} // namespace

std::vector<RBoundFit> r_bound_fit(const std::vector<double>& r_values, std::int64_t grid) {
    std::vector<RBoundFit> out;
    for (const double r : r_values) {
        if (r < 4.0)
            throw Error(errc::bad_input, "r_bound_fit needs r >= 4");
        if (4.0 * r >= static_cast<double>(grid) / 2.0)
            throw Error(errc::grid_too_coarse, "grid too coarse for r");
        SpectralVector coeffs;
        const auto reach = static_cast<std::int64_t>(r) + 1;
        for (std::int64_t d = -reach; d <= reach; ++d) {
            const double value = psi_eval(static_cast<double>(d) / r);
            if (value != 0.0)
                coeffs.set(d, value);
        }
        const auto rs = synthesize(coeffs, grid);

        RBoundFit fit;
        fit.r = r;
        for (std::int64_t j = 0; j < grid; ++j) {
            const double y = rs.x(j);
            fit.c1 = std::max(fit.c1, std::abs(rs[j]) * (1.0 + (r * y) * (r * y)) / r);
        }
        for (const std::int64_t off : dyadic_offsets(grid)) {
            const double y = static_cast<double>(off) / static_cast<double>(grid);
            const double denom_y = r * std::min(r * std::abs(y), 1.0);
            for (std::int64_t j = 0; j < grid; ++j) {
                const double x = rs.x(j);
                if (!(2.0 * std::abs(y) < std::abs(x) && std::abs(x) < 0.5))
                    continue;
                const std::int64_t jshift = ((j - off) % grid + grid) % grid;
                const double diff = std::abs(rs[jshift] - rs[j]);
                fit.c2 = std::max(fit.c2, diff * (1.0 + (r * x) * (r * x)) / denom_y);
            }
        }
        out.push_back(fit);
    }
    return out;
}

HormanderReport hormander_check(const MultiplierSpec& m, std::int64_t grid) {
    HormanderReport rep;
    if (m.table.empty())
        return rep; // zero multiplier, zero kernels
    for (const auto& [n, value] : m.table) {
        double acc = 0.0;
        for (std::int64_t k = 1; k <= m.n_trunc + 2; ++k) {
            const double w = projection_weight(k, n) * value;
            acc += w * w;
        }
        rep.d2 = std::max(rep.d2, acc);
    }

    const auto fam = kernel_family(m, grid);
    const auto offsets = dyadic_offsets(grid);
    const std::int64_t zero_j = grid / 2; // grid index of x = 0

    for (const std::int64_t off : offsets) {
        const double y = static_cast<double>(off) / static_cast<double>(grid);
        const std::int64_t j = ((zero_j + off) % grid + grid) % grid;
        double norm_sq = 0.0;
        for (const auto& ker : fam.kernels)
            norm_sq += std::norm(ker[j]);
        const double val = std::abs(y) * std::sqrt(norm_sq);
        if (val > rep.d3) {
            rep.d3 = val;
            rep.d3_witness_y = y;
        }
    }

    std::vector<double> acc(static_cast<std::size_t>(grid));
    for (const std::int64_t off : offsets) {
        const double y = static_cast<double>(off) / static_cast<double>(grid);
        if (std::abs(y) >= 0.25)
            continue;
        std::fill(acc.begin(), acc.end(), 0.0);
        for (const auto& ker : fam.kernels) {
            const auto& s = ker.samples();
            for (std::int64_t j = 0; j < grid; ++j) {
                const double x = ker.x(j);
                if (!(2.0 * std::abs(y) < std::abs(x) && std::abs(x) < 0.5))
                    continue;
                const std::int64_t jshift = ((j - off) % grid + grid) % grid;
                acc[static_cast<std::size_t>(j)] += std::norm(s[static_cast<std::size_t>(jshift)] - s[static_cast<std::size_t>(j)]);
            }
        }
        double integral = 0.0;
        for (const double a : acc)
            integral += std::sqrt(a);
        integral /= static_cast<double>(grid);
        if (integral > rep.d4) {
            rep.d4 = integral;
            rep.d4_witness_y = y;
        }
    }
    return rep;
}

double TestMeasure::total_variation() const {
    switch (kind) {
    case Kind::atomic: return atoms.total_variation();
    case Kind::fejer: return 1.0;    // nonnegative density with unit mass
    case Kind::density: return 1.0;  // |q|^2 / ||q||_2^2
    }
    return 0.0;
}

SpectralVector TestMeasure::coeffs(const std::vector<std::int64_t>& freqs) const {
    switch (kind) {
    case Kind::atomic:
        return measure_coeffs(atoms, freqs);
    case Kind::fejer: {
        SpectralVector v;
        for (const std::int64_t n : freqs) {
            const double t = 1.0 - std::abs(static_cast<double>(n)) / static_cast<double>(fejer_order);
            if (t > 0.0)
                v.set(n, cplx{t, 0.0});
        }
        return v;
    }
    case Kind::density: {
        SpectralVector v;
        double norm_sq = 0.0;
        for (const auto& q : density_coeffs)
            norm_sq += std::norm(q);
        const auto deg = static_cast<std::int64_t>(density_coeffs.size());
        for (const std::int64_t n : freqs) {
            cplx acc{0.0, 0.0};
            for (std::int64_t l = 0; l < deg; ++l) {
                const std::int64_t j = l + n;
                if (j >= 0 && j < deg)
                    acc += density_coeffs[static_cast<std::size_t>(j)] *
                           std::conj(density_coeffs[static_cast<std::size_t>(l)]);
            }
            if (acc != cplx{0.0, 0.0})
                v.set(n, acc / norm_sq);
        }
        return v;
    }
    }
    return {};
}

std::vector<TestMeasure> standard_test_family(std::uint64_t seed, int count) {
    std::vector<TestMeasure> family;

    TestMeasure unit;
    unit.kind = TestMeasure::Kind::atomic;
    unit.atoms.atoms = {{0.0, cplx{1.0, 0.0}}};
    unit.label = "dirac@0";
    family.push_back(unit);

    for (int i = 0; i < 7; ++i) {
        auto rng = Rng::stream(seed, 1, i);
        TestMeasure t;
        t.kind = TestMeasure::Kind::atomic;
        t.atoms.atoms = {{rng.uniform(-0.5, 0.5), std::polar(1.0, rng.uniform(0.0, 6.28))}};
        t.label = "dirac#" + std::to_string(i);
        family.push_back(t);
    }

    for (const std::int64_t order : {4, 16, 64, 256, 1024, 4096, 16000, 30000}) {
        TestMeasure t;
        t.kind = TestMeasure::Kind::fejer;
        t.fejer_order = order;
        t.label = "fejer#" + std::to_string(order);
        family.push_back(t);
    }

    int i = 0;
    while (static_cast<int>(family.size()) < count) {
        auto rng = Rng::stream(seed, 2, i);
        if (i % 5 < 3) {
            TestMeasure t;
            t.kind = TestMeasure::Kind::atomic;
            const auto n_atoms = rng.uniform_int(2, 64);
            for (std::int64_t a = 0; a < n_atoms; ++a)
                t.atoms.atoms.push_back({rng.uniform(-0.5, 0.5), rng.complex_normal()});
            t.label = "atomic#" + std::to_string(i);
            family.push_back(t);
        } else {
            TestMeasure t;
            t.kind = TestMeasure::Kind::density;
            const auto deg = rng.uniform_int(2, 32);
            for (std::int64_t d = 0; d < deg; ++d)
                t.density_coeffs.push_back(rng.complex_normal());
            t.label = "density#" + std::to_string(i);
            family.push_back(t);
        }
        ++i;
    }
    return family;
}

InterpolationReport interpolation_harness(const MultiplierSpec& m,
                                          const std::vector<TestMeasure>& family, std::int64_t grid) {
    InterpolationReport rep;
    const auto freqs = m.support();
    for (const auto& measure : family) {
        const double tv = measure.total_variation();
        const auto mf = apply_M(measure.coeffs(freqs), m, grid);
        const double l2 = lp_norm(mf, 2.0);
        if (tv <= 1e-14 || l2 <= 1e-14) {
            ++rep.degenerate;
            continue;
        }
        const double interp = lp_norm(mf, 4.0 / 3.0) / (std::sqrt(tv) * std::sqrt(l2));
        if (interp > rep.sup_interp) {
            rep.sup_interp = interp;
            rep.interp_witness = measure.label;
        }
        const double weak = weak_l1(square_function(mf, grid)) / tv;
        if (weak > rep.sup_weak) {
            rep.sup_weak = weak;
            rep.weak_witness = measure.label;
        }
    }
    return rep;
}

std::pair<double, double> lacunary_ratio(int trials, std::int64_t n_trunc, std::uint64_t seed,
                                         std::int64_t grid) {
    if (n_trunc > 16)
        throw Error(errc::bad_input, "lacunary_ratio needs N <= 16");
    if (grid < 4 * (std::int64_t{1} << n_trunc))
        throw Error(errc::grid_too_coarse, "lacunary_ratio grid must oversample 2^N");
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int t = 0; t < trials; ++t) {
        auto rng = Rng::stream(seed, 7, t);
        SpectralVector v;
        for (std::int64_t k = 0; k <= n_trunc; ++k)
            v.set(std::int64_t{1} << k, rng.complex_normal());
        const auto f = synthesize(v, grid);
        const double ratio = lp_norm(f, 4.0 / 3.0) / lp_norm(f, 2.0);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    return {lo, hi};
}

} // namespace sparsespec
