// Acceptance suite: one criterion per function, one PASS/FAIL line each.
// Exit code is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "sparsespec/extension.hpp"
#include "sparsespec/harness.hpp"
#include "sparsespec/multiplier.hpp"
#include "sparsespec/riesz.hpp"
#include "sparsespec/rng.hpp"

using namespace sparsespec;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

struct Criterion {
    bool pass = true;
    std::vector<std::string> notes;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (notes.size() < 8)
                notes.push_back(what);
        }
    }
    void note(const std::string& what) { notes.push_back(what); }
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// ---------------------------------------------------------------- criterion 1

void transform_correctness(Criterion& c) {
    Rng rng(20240801);
    double worst_rt = 0.0, worst_parseval = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::int64_t grid = std::int64_t{1} << rng.uniform_int(4, 16);
        SpectralVector v;
        const auto modes = rng.uniform_int(1, 24);
        for (std::int64_t i = 0; i < modes; ++i)
            v.set(rng.uniform_int(-grid / 2 + 1, grid / 2), rng.complex_normal());
        const auto f = synthesize(v, grid);
        const auto back = analyze(f);
        for (const auto& [n, coef] : v)
            worst_rt = std::max(worst_rt, std::abs(coef - back.at(n)));
        for (const auto& [n, coef] : back)
            if (!v.contains(n))
                worst_rt = std::max(worst_rt, std::abs(coef));
        const double l2 = lp_norm(f, 2.0);
        worst_parseval = std::max(worst_parseval, std::abs(l2 * l2 - v.energy()));
    }
    c.expect(worst_rt <= 1e-12, "round trip deviation " + fmt(worst_rt));
    c.expect(worst_parseval <= 1e-10, "parseval deviation " + fmt(worst_parseval));
    c.note("round-trip " + fmt(worst_rt) + ", parseval " + fmt(worst_parseval));
}

// ---------------------------------------------------------------- criterion 2

void riesz_exactness(Criterion& c) {
    Rng rng(20240802);
    double worst_grid = 0.0, worst_min = 0.0, worst_integral = 0.0;
    bool centers_exact = true, unit_mass_exact = true;
    for (const auto parity : {Parity::even, Parity::odd}) {
        const std::int64_t m_lo = parity == Parity::even ? 0 : 1;
        for (std::int64_t m = m_lo; m <= 7; ++m) {
            for (std::int64_t n = m; n <= std::min<std::int64_t>(m + 5, 7); ++n) {
                for (int ph = 0; ph < 50; ++ph) {
                    std::vector<double> phases;
                    for (std::int64_t k = m; k <= n; ++k)
                        phases.push_back(rng.uniform(-1.0, 1.0));
                    const auto p = RieszProduct::make(parity, m, n, phases);
                    const auto coeffs = riesz_coeffs(p);

                    unit_mass_exact = unit_mass_exact && coeffs.at(0) == cplx{1.0, 0.0};
                    for (std::int64_t k = m; k <= n; ++k)
                        centers_exact = centers_exact &&
                                        coeffs.at(p.factor_frequency(k)) == p.factor_coefficient(k);

                    const std::int64_t grid = next_pow2(4 * p.factor_frequency(n));
                    auto direct = SampledFunction::zeros(grid);
                    for (std::int64_t j = 0; j < grid; ++j) {
                        double value = 1.0;
                        for (std::int64_t k = m; k <= n; ++k)
                            value *= 1.0 + std::cos(two_pi * static_cast<double>(p.factor_frequency(k)) *
                                                    (direct.x(j) + p.phases[static_cast<std::size_t>(k - m)]));
                        direct[j] = value;
                    }
                    const auto sampled = analyze(direct);
                    for (const auto& [freq, coef] : coeffs)
                        worst_grid = std::max(worst_grid, std::abs(coef - sampled.at(freq)));
                    for (const auto& [freq, coef] : sampled)
                        if (!coeffs.contains(freq))
                            worst_grid = std::max(worst_grid, std::abs(coef));

                    const auto [mn, integral] = riesz_l1_check(p, grid);
                    worst_min = std::min(worst_min, mn);
                    worst_integral = std::max(worst_integral, std::abs(integral - 1.0));
                }
            }
        }
    }
    c.expect(worst_grid <= 1e-10, "grid mismatch " + fmt(worst_grid));
    c.expect(unit_mass_exact, "ghat(0) != 1 exactly");
    c.expect(centers_exact, "ghat(F_k) != (1/2) e^{2 pi i F_k alpha_k} exactly");
    c.expect(worst_min >= -1e-9, "grid min " + fmt(worst_min));
    c.expect(worst_integral <= 1e-9, "integral deviation " + fmt(worst_integral));
    c.note("grid dev " + fmt(worst_grid) + ", min " + fmt(worst_min));
}

// ---------------------------------------------------------------- criterion 3

void certificate_soundness(Criterion& c) {
    Rng rng(20240803);
    const std::int64_t grid = std::int64_t{1} << 16;
    double worst_slack = -1e9, worst_residual = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto n_trunc = rng.uniform_int(4, 12);
        auto spec = SpectrumSpec::make(
            RadiusSequence::affine_log(rng.uniform(0.0, 0.9), rng.uniform(-14.0, -11.0), 64),
            n_trunc);
        SpectralVector v;
        for (const auto n : allowed_set(spec))
            v.set(n, rng.complex_normal());
        const auto f = synthesize(v, grid);
        const double sup = sup_norm(f);

        CoefficientSequence a;
        for (std::int64_t k = 0; k <= n_trunc; ++k)
            a.a.push_back(v.at(std::int64_t{1} << k));

        const auto cert = best_window_certificate(a, spec);
        worst_slack = std::max(worst_slack, cert.lower_bound - sup);

        // pairing identity, both parities, aligned phases, whenever the
        // separation 4^M > 10 r_{2N} holds
        const std::int64_t n_win = n_trunc / 2;
        for (const auto parity : {Parity::even, Parity::odd}) {
            std::int64_t m_lo = parity == Parity::even ? 0 : 1;
            while (m_lo <= n_win &&
                   !(2.0 * static_cast<double>(m_lo) >
                     std::log2(10.0) + spec.radii.log2_at(2 * n_win)))
                ++m_lo;
            if (m_lo > n_win)
                continue;
            const auto p = RieszProduct::make(parity, m_lo, n_win,
                                              optimal_phases(v, m_lo, n_win, parity));
            worst_residual = std::max(worst_residual, pairing_verify(f, p, spec));
        }
    }
    c.expect(worst_slack <= 1e-8, "certificate exceeds sup by " + fmt(worst_slack));
    c.expect(worst_residual <= 1e-8, "pairing residual " + fmt(worst_residual));
    c.note("max(lower - sup) " + fmt(worst_slack) + ", residual " + fmt(worst_residual));
}

// ---------------------------------------------------------------- criterion 4

void counterexample_reproduction(Criterion& c) {
    const auto radii = RadiusSequence::affine_log(0.5, -12.0, std::int64_t{1} << 26);
    const auto weights = WeightSequence::constant(1.0, std::int64_t{1} << 26);
    const auto plan = find_blocks(radii, weights, 6);
    c.expect(plan.blocks.size() == 7, "expected blocks s = 0..6");
    const auto summary = counterexample_summary(plan, weights);
    c.expect(summary.weighted_energy <= 4.0 / 3.0 + 1e-9,
             "weighted energy " + fmt(summary.weighted_energy));
    double worst = 0.0;
    for (std::size_t s = 0; s < summary.blocks.size(); ++s) {
        const double lower = summary.blocks[s].l1_sum / 4.0;
        worst = std::max(worst, std::abs(lower - std::exp2(static_cast<double>(s)) / 4.0));
    }
    c.expect(worst <= 1e-9, "certificate bound deviation " + fmt(worst));
    c.note("energy " + fmt(summary.weighted_energy) + ", bound dev " + fmt(worst));
}

// ---------------------------------------------------------------- criterion 5

void solver_validity(Criterion& c) {
    // pinned fhat(2) = 1 with free {1, 3}: optimum is exactly 1
    auto spec = SpectrumSpec::make(RadiusSequence::from_table({-2.0, 0.0}), 1);
    CoefficientSequence pinned;
    pinned.a = {cplx{0.0, 0.0}, cplx{1.0, 0.0}};
    const auto sol = solve(ExtensionProblem::make(pinned, spec));
    c.expect(sol.upper <= 1.0 + 1e-3, "pinned-fhat(2) upper " + fmt(sol.upper));
    c.expect(std::abs(sol.coeffs.at(1)) <= 1e-2 && std::abs(sol.coeffs.at(3)) <= 1e-2,
             "side coefficients not near zero");

    // gradients vs central finite differences
    Rng rng(20240805);
    double worst_fd = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::int64_t grid = 512;
        const int p = 1 << rng.uniform_int(1, 4);
        SpectralVector v;
        for (int i = 0; i < 6; ++i)
            v.set(rng.uniform_int(-40, 40), 0.5 * rng.complex_normal());
        std::vector<std::int64_t> free_set;
        for (const auto& [n, coef] : v) {
            free_set.push_back(n);
            if (free_set.size() == 3)
                break;
        }
        const auto [obj, grad] = stage_objective_and_gradient(v, free_set, grid, p);
        const double h = 1e-6;
        for (std::size_t i = 0; i < free_set.size(); ++i) {
            for (int part = 0; part < 2; ++part) {
                const cplx delta = part == 0 ? cplx{h, 0.0} : cplx{0.0, h};
                SpectralVector vp = v, vm = v;
                vp.set(free_set[i], v.at(free_set[i]) + delta);
                vm.set(free_set[i], v.at(free_set[i]) - delta);
                const double fd = (stage_objective_and_gradient(vp, {}, grid, p).first -
                                   stage_objective_and_gradient(vm, {}, grid, p).first) /
                                  (2.0 * h);
                const double an = part == 0 ? grad[i].real() : grad[i].imag();
                if (std::abs(fd) > 1e-12)
                    worst_fd = std::max(worst_fd, std::abs(an - fd) / std::max(std::abs(fd), 1e-12));
            }
        }
    }
    c.expect(worst_fd <= 1e-5, "finite-difference relative error " + fmt(worst_fd));

    // structural feasibility and the sandwich on random solved instances
    auto bounded = SpectrumSpec::make(RadiusSequence::affine_log(1.0, -11.0, 64), 12);
    const auto allowed = allowed_set(bounded);
    for (int trial = 0; trial < 3; ++trial) {
        auto rng2 = Rng::stream(20240806, trial);
        CoefficientSequence a;
        for (int k = 0; k <= 12; ++k)
            a.a.push_back(0.4 * rng2.complex_normal());
        const auto s = solve(ExtensionProblem::make(a, bounded));
        for (const auto& [n, coef] : s.coeffs)
            c.expect(std::binary_search(allowed.begin(), allowed.end(), n),
                     "coefficient outside the allowed set");
        for (std::int64_t k = 0; k <= 12; ++k)
            c.expect(s.coeffs.at(std::int64_t{1} << k) == a.a[static_cast<std::size_t>(k)],
                     "pinned coefficient drifted");
        c.expect(s.lower.lower_bound <= s.upper + 1e-6, "lower exceeds upper");
    }
    c.note("upper " + fmt(sol.upper) + ", fd err " + fmt(worst_fd));
}

// ---------------------------------------------------------------- criterion 6

double median_ratio(const std::vector<ScalingRow>& rows, std::int64_t n) {
    std::vector<double> v;
    for (const auto& row : rows)
        if (row.n_trunc == n)
            v.push_back(row.ratio);
    std::sort(v.begin(), v.end());
    return v.size() % 2 == 1 ? v[v.size() / 2]
                             : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
}

void dichotomy(Criterion& c) {
    const std::uint64_t seed = 20240806;
    const std::vector<std::int64_t> n_list{8, 12};

    const auto bounded_rows =
        scaling_study(WeightSequence::constant(1.0, 64),
                      RadiusSequence::affine_log(1.0, -11.0, 64), n_list, 20, seed, 2);
    const double b8 = median_ratio(bounded_rows, 8);
    const double b12 = median_ratio(bounded_rows, 12);
    c.expect(b12 <= 1.2 * b8, "bounded family grew " + fmt(b12 / b8));

    // decaying weights make the same condition sum blow up geometrically at
    // desk scale, which is what the divergent branch of the dichotomy needs
    const auto divergent_rows =
        scaling_study(WeightSequence::affine_log(-0.25, 0.0, 64),
                      RadiusSequence::affine_log(0.5, -12.0, 64), n_list, 20, seed, 2);
    const double d8 = median_ratio(divergent_rows, 8);
    const double d12 = median_ratio(divergent_rows, 12);
    c.expect(d12 >= 1.5 * d8, "divergent family grew only " + fmt(d12 / d8));
    c.note("bounded x" + fmt(b12 / b8) + ", divergent x" + fmt(d12 / d8));
}

// ---------------------------------------------------------------- criterion 7

void bump_contracts(Criterion& c) {
    c.expect(psi_eval(0.0) == 1.0, "psi(0) != 1");
    c.expect(std::abs(psi_eval(0.5) - std::exp(-1.0 / 3.0)) <= 1e-12, "psi(0.5) deviation");
    const double partition = partition_check(-20.0, 20.0, 10000);
    c.expect(partition <= 1e-10, "partition deviation " + fmt(partition));
    for (int i = 0; i <= 32; ++i) {
        const double x = 0.5 - 1.0 / 300.0 + (2.0 / 300.0) * i / 32.0;
        c.expect(phi_eval(x) == 1.0, "phi plateau fails at x = " + fmt(x));
    }
    c.expect(phi_eval(0.25) == 0.0, "phi(0.25) != 0");
    c.expect(phi_eval(0.995) == 0.0, "phi(0.995) != 0");
    c.note("partition deviation " + fmt(partition));
}

// ---------------------------------------------------------------- criterion 8

void kernel_stability(Criterion& c) {
    const std::int64_t grid = std::int64_t{1} << 16;
    const auto fits = r_bound_fit({8.0, 32.0, 128.0}, grid);
    double c1_lo = 1e300, c1_hi = 0.0, c2_lo = 1e300, c2_hi = 0.0;
    for (const auto& fit : fits) {
        c1_lo = std::min(c1_lo, fit.c1);
        c1_hi = std::max(c1_hi, fit.c1);
        c2_lo = std::min(c2_lo, fit.c2);
        c2_hi = std::max(c2_hi, fit.c2);
    }
    c.expect(c1_hi <= 2.0 * c1_lo, "C1 spread " + fmt(c1_hi / c1_lo));
    c.expect(c2_hi <= 2.0 * c2_lo, "C2 spread " + fmt(c2_hi / c2_lo));

    double d3_lo = 1e300, d3_hi = 0.0, d4_lo = 1e300, d4_hi = 0.0;
    for (const std::int64_t n_trunc : {10, 12, 14}) {
        auto spec = SpectrumSpec::make(RadiusSequence::affine_log(1.0, -11.0, 64), n_trunc);
        const auto m = build_m(spec, WeightSequence::constant(1.0, 64), n_trunc);
        const auto rep = hormander_check(m, grid);
        d3_lo = std::min(d3_lo, rep.d3);
        d3_hi = std::max(d3_hi, rep.d3);
        d4_lo = std::min(d4_lo, rep.d4);
        d4_hi = std::max(d4_hi, rep.d4);
    }
    c.expect(d3_hi <= 2.0 * d3_lo, "D3 spread " + fmt(d3_hi / d3_lo));
    c.expect(d4_hi <= 2.0 * d4_lo, "D4 spread " + fmt(d4_hi / d4_lo));
    c.note("C1 x" + fmt(c1_hi / c1_lo) + ", C2 x" + fmt(c2_hi / c2_lo) + ", D3 x" +
           fmt(d3_hi / d3_lo) + ", D4 x" + fmt(d4_hi / d4_lo));
}

// ---------------------------------------------------------------- criterion 9

void inequality_harness(Criterion& c) {
    const std::uint64_t seed = 20240809;
    auto spec = SpectrumSpec::make(RadiusSequence::affine_log(1.0, -11.0, 64), 12);
    const auto m = build_m(spec, WeightSequence::constant(1.0, 64), 12);
    const auto family = standard_test_family(seed, 200);
    c.expect(family.size() >= 200, "family too small");

    const auto coarse = interpolation_harness(m, family, std::int64_t{1} << 15);
    const auto fine = interpolation_harness(m, family, std::int64_t{1} << 16);
    c.expect(std::isfinite(coarse.sup_interp) && std::isfinite(fine.sup_interp),
             "interpolation ratio not finite");
    c.expect(std::isfinite(coarse.sup_weak) && std::isfinite(fine.sup_weak),
             "weak ratio not finite");
    const double interp_shift =
        std::abs(fine.sup_interp - coarse.sup_interp) / std::max(coarse.sup_interp, 1e-300);
    const double weak_shift =
        std::abs(fine.sup_weak - coarse.sup_weak) / std::max(coarse.sup_weak, 1e-300);
    c.expect(interp_shift < 0.05, "interpolation ratio moved " + fmt(100 * interp_shift) + "%");
    c.expect(weak_shift < 0.05, "weak ratio moved " + fmt(100 * weak_shift) + "%");

    const auto [lac_min, lac_max] = lacunary_ratio(100, 12, seed, std::int64_t{1} << 16);
    c.expect(lac_min >= 0.2, "lacunary min ratio " + fmt(lac_min));
    c.expect(lac_max <= 1.0 + 1e-9, "lacunary max ratio " + fmt(lac_max));
    c.note("interp " + fmt(fine.sup_interp) + " (moved " + fmt(100 * interp_shift) + "%), weak " +
           fmt(fine.sup_weak) + " (moved " + fmt(100 * weak_shift) + "%), lacunary [" +
           fmt(lac_min) + ", " + fmt(lac_max) + "]");
}

// --------------------------------------------------------------- criterion 10

void determinism(Criterion& c) {
    auto strip = [](json r) {
        r.erase("timings");
        return r.dump();
    };
    {
        json config{{"radii", {{"kind", "affine-log"}, {"slope", 0.5}, {"offset", -12.0}}},
                    {"weights", {{"kind", "const"}, {"value", 1.0}}},
                    {"N", 256}};
        c.expect(strip(run_command("check-condition", config)) ==
                     strip(run_command("check-condition", config)),
                 "check-condition not reproducible");
    }
    {
        json config{{"radii", {{"kind", "affine-log"}, {"slope", 0.5}, {"offset", -12.0}}},
                    {"coeffs", {{"a", {{0.4, 0.2}, {-0.3, 0.6}}}}},
                    {"N", 1},
                    {"seed", 11}};
        c.expect(strip(run_command("synthesize", config)) ==
                     strip(run_command("synthesize", config)),
                 "synthesize not reproducible");
    }
    {
        json config{{"radii", {{"kind", "affine-log"}, {"slope", 0.5}, {"offset", -12.0}}},
                    {"weights", {{"kind", "const"}, {"value", 1.0}}},
                    {"n_list", {6}},
                    {"trials", 3},
                    {"seed", 4}};
        c.expect(strip(run_command("scaling-study", config)) ==
                     strip(run_command("scaling-study", config)),
                 "scaling-study not reproducible");
    }
    {
        json config{{"radii", {{"kind", "affine-log"}, {"slope", 0.5}, {"offset", -12.0}}},
                    {"weights", {{"kind", "const"}, {"value", 1.0}}},
                    {"s_max", 3},
                    {"k_max", 65536}};
        c.expect(strip(run_command("counterexample", config)) ==
                     strip(run_command("counterexample", config)),
                 "counterexample not reproducible");
    }
}

struct Entry {
    int id;
    const char* name;
    std::function<void(Criterion&)> fn;
};

} // namespace

int main() {
    const std::vector<Entry> entries{
        {1, "transform correctness (round trip 1e-12, Parseval 1e-10)", transform_correctness},
        {2, "Riesz product exactness", riesz_exactness},
        {3, "certificate soundness and pairing identity", certificate_soundness},
        {4, "counterexample reproduction (blocks s = 0..6)", counterexample_reproduction},
        {5, "solver validity (pinned instance, gradients, feasibility)", solver_validity},
        {6, "dichotomy at desk scale (bounded <= +20%, divergent >= +50%)", dichotomy},
        {7, "bump function contracts", bump_contracts},
        {8, "kernel bound stability (factor 2)", kernel_stability},
        {9, "inequality harness (5% grid stability, lacunary ratios)", inequality_harness},
        {10, "determinism (byte-identical reports modulo timings)", determinism},
    };

    int failures = 0;
    for (const auto& entry : entries) {
        Criterion c;
        const auto start = std::chrono::steady_clock::now();
        try {
            entry.fn(c);
        } catch (const std::exception& e) {
            c.pass = false;
            c.notes.push_back(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %2d: %s (%.1fs)\n", c.pass ? "PASS" : "FAIL", entry.id,
                    entry.name, secs);
        for (const auto& note : c.notes)
            std::printf("        - %s\n", note.c_str());
        if (!c.pass)
            ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(entries.size()) - failures,
                entries.size());
    return failures;
}
