#include "sparsespec/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "sparsespec/rng.hpp"

namespace sparsespec {

namespace {

constexpr double log2_of_10 = 3.321928094887362;

std::vector<int> default_schedule() { return {2, 4, 8, 16, 32, 64, 128, 256, 512, 1024}; }

// Raw-bin workspace: frequencies live in [1, 2^{N+1}] so bin index equals the
// frequency; the grid shift x_j = j/G - 1/2 folds in as (-1)^n.
struct Workspace {
    std::int64_t grid = 0;
    std::vector<cplx> pinned_bins;
    std::vector<std::int64_t> free_idx;
    std::vector<double> free_sign;
    std::vector<cplx> bins;
    std::vector<cplx> samples;
    std::vector<cplx> field;

    void to_samples(const std::vector<cplx>& x) {
        bins = pinned_bins;
        for (std::size_t i = 0; i < free_idx.size(); ++i)
            bins[static_cast<std::size_t>(free_idx[i])] += x[i] * free_sign[i];
        samples = bins;
        detail::fft_backward_inplace(samples);
    }

    // (1/G) sum (|f_j| / s)^p
    double objective(const std::vector<cplx>& x, int p, double inv_s) {
        to_samples(x);
        double acc = 0.0;
        const double inv_s2 = inv_s * inv_s;
        const double half_p = 0.5 * static_cast<double>(p);
        for (const auto& z : samples)
            acc += std::pow(std::norm(z) * inv_s2, half_p);
        return acc / static_cast<double>(grid);
    }

    // gradient of the scaled objective in packed real coordinates
    std::vector<cplx> gradient(int p, double inv_s) {
        const double inv_s2 = inv_s * inv_s;
        const double half_pm2 = 0.5 * static_cast<double>(p - 2);
        field.resize(samples.size());
        for (std::size_t j = 0; j < samples.size(); ++j)
            field[j] = std::pow(std::norm(samples[j]) * inv_s2, half_pm2) * samples[j];
        detail::fft_forward_inplace(field);
        std::vector<cplx> g(free_idx.size());
        const double scale = static_cast<double>(p) * inv_s2 / static_cast<double>(grid);
        for (std::size_t i = 0; i < free_idx.size(); ++i)
            g[i] = scale * free_sign[i] * field[static_cast<std::size_t>(free_idx[i])];
        return g;
    }
};

double sign_of(std::int64_t n) { return n % 2 == 0 ? 1.0 : -1.0; }

SpectralVector assemble(const SpectralVector& pinned_sv, const std::vector<std::int64_t>& free_idx,
                        const std::vector<cplx>& x) {
    SpectralVector sv = pinned_sv;
    for (std::size_t i = 0; i < free_idx.size(); ++i)
        sv.set(free_idx[i], x[i]);
    return sv;
}

double refined_sup(const SpectralVector& sv, std::int64_t grid) {
    return sup_norm(synthesize(sv, 4 * grid));
}

} // namespace

ExtensionProblem ExtensionProblem::make(CoefficientSequence pinned, SpectrumSpec spec,
                                        std::int64_t grid) {
    ExtensionProblem p;
    if (pinned.a.empty())
        throw Error(errc::bad_input, "no pinned coefficients");
    if (pinned.top_index() > spec.truncation)
        throw Error(errc::bad_input, "pinned index " + std::to_string(pinned.top_index()) +
                                         " exceeds truncation N = " + std::to_string(spec.truncation));
    const std::int64_t min_grid = 4 * (std::int64_t{1} << (spec.truncation + 1));
    p.grid = grid == 0 ? min_grid : grid;
    if (p.grid < min_grid || !is_pow2(p.grid))
        throw Error(errc::bad_input, "grid must be a power of two >= 4*2^(N+1)");
    p.pinned = std::move(pinned);
    p.spec = std::move(spec);
    p.p_schedule = default_schedule();
    return p;
}

SpectralVector initial_guess(const ExtensionProblem& problem) {
    SpectralVector sv;
    for (std::int64_t k = 0; k <= problem.pinned.top_index(); ++k)
        sv.set(std::int64_t{1} << k, problem.pinned.a[static_cast<std::size_t>(k)]);
    return sv;
}

std::pair<double, std::vector<cplx>> stage_objective_and_gradient(
    const SpectralVector& coeffs, const std::vector<std::int64_t>& free_set, std::int64_t grid,
    int p) {
    if (p < 2 || p % 2 != 0)
        throw Error(errc::bad_exponent, "stage objective needs even p >= 2");
    const auto f = synthesize(coeffs, grid);
    double obj = 0.0;
    for (const auto& z : f.samples())
        obj += std::pow(std::norm(z), 0.5 * p);
    obj /= static_cast<double>(grid);

    auto field = SampledFunction::zeros(grid);
    for (std::int64_t j = 0; j < grid; ++j)
        field[j] = std::pow(std::norm(f[j]), 0.5 * (p - 2)) * f[j];
    const auto transformed = analyze(field);
    std::vector<cplx> g;
    g.reserve(free_set.size());
    for (const auto n : free_set)
        g.push_back(static_cast<double>(p) * transformed.at(n));
    return {obj, g};
}

ExtensionSolution solve(const ExtensionProblem& problem) {
    const auto& spec = problem.spec;
    const auto allowed = allowed_set(spec);
    const auto pinned_sv = initial_guess(problem);

    std::vector<std::int64_t> free_idx;
    for (const auto n : allowed)
        if (!pinned_sv.contains(n) && !((n & (n - 1)) == 0 && n <= (std::int64_t{1} << spec.truncation)))
            free_idx.push_back(n);

    ExtensionSolution sol;
    sol.coeffs = pinned_sv;
    sol.upper = refined_sup(pinned_sv, problem.grid);

    if (!free_idx.empty()) {
        Workspace ws;
        ws.grid = problem.grid;
        ws.pinned_bins.assign(static_cast<std::size_t>(problem.grid), cplx{0.0, 0.0});
        for (const auto& [n, c] : pinned_sv)
            ws.pinned_bins[static_cast<std::size_t>(n)] = c * sign_of(n);
        ws.free_idx = free_idx;
        for (const auto n : free_idx)
            ws.free_sign.push_back(sign_of(n));

        std::vector<cplx> x(free_idx.size(), cplx{0.0, 0.0});

        for (const int p : problem.p_schedule) {
            ws.to_samples(x);
            double s0 = 0.0;
            for (const auto& z : ws.samples)
                s0 = std::max(s0, std::abs(z));
            if (s0 <= 0.0)
                break; // identically zero, nothing to minimize
            const double inv_s = 1.0 / s0;

            std::vector<cplx> x_cur = x;
            std::vector<cplx> y = x;
            double t_mom = 1.0;
            // curvature of the scaled objective is ~ p^2 / s0^2; backtracking
            // refines the constant from there
            double step = s0 * s0 / static_cast<double>(p);
            double f_cur = ws.objective(x_cur, p, inv_s);
            double lp_prev = s0 * std::pow(f_cur, 1.0 / p);
            int stall = 0;
            int iters = 0;

            for (int iter = 0; iter < problem.max_iters; ++iter) {
                ++iters;
                double f_y = ws.objective(y, p, inv_s);
                if (!std::isfinite(f_y)) { // momentum overshot, restart from the last accepted point
                    y = x_cur;
                    t_mom = 1.0;
                    f_y = f_cur;
                }
                ws.to_samples(y);
                const auto g = ws.gradient(p, inv_s);
                double gnorm2 = 0.0;
                for (const auto& gi : g)
                    gnorm2 += std::norm(gi);
                // below float resolution no line search step can decrease F
                if (gnorm2 <= 1e-20 * std::max(1.0, f_y * f_y))
                    break;

                std::vector<cplx> x_new(x_cur.size());
                double f_new = std::numeric_limits<double>::infinity();
                bool accepted = false;
                for (int halve = 0; halve <= 60; ++halve) {
                    for (std::size_t i = 0; i < x_new.size(); ++i)
                        x_new[i] = y[i] - step * g[i];
                    f_new = ws.objective(x_new, p, inv_s);
                    if (std::isfinite(f_new) && f_new <= f_y - 0.5 * step * gnorm2) {
                        accepted = true;
                        break;
                    }
                    step *= 0.5;
                }
                if (!accepted) {
                    if (!std::isfinite(f_new))
                        throw Error(errc::diverged, "objective lost finiteness during line search");
                    break; // decrease below float resolution: stage done
                }
                step *= 1.5;

                const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_mom * t_mom));
                if (f_new > f_cur) { // monotone restart
                    y = x_new;
                    t_mom = 1.0;
                } else {
                    for (std::size_t i = 0; i < x_new.size(); ++i)
                        y[i] = x_new[i] + ((t_mom - 1.0) / t_next) * (x_new[i] - x_cur[i]);
                    t_mom = t_next;
                }
                x_cur = x_new;
                f_cur = std::min(f_cur, f_new);

                const double lp_now = s0 * std::pow(f_new, 1.0 / p);
                if (std::abs(lp_prev - lp_now) <= problem.tol * std::max(lp_now, 1e-300)) {
                    if (++stall >= 3)
                        break;
                } else {
                    stall = 0;
                }
                lp_prev = lp_now;
            }

            x = x_cur;
            sol.history.push_back({p, lp_prev, iters});

            const auto sv = assemble(pinned_sv, free_idx, x);
            const double upper = refined_sup(sv, problem.grid);
            if (upper < sol.upper) {
                sol.upper = upper;
                sol.coeffs = sv;
            }
        }
    }

    sol.lower = best_window_certificate(problem.pinned, spec);
    return sol;
}

CertificateResult best_window_certificate(const CoefficientSequence& a, const SpectrumSpec& spec) {
    CertificateResult best;
    if (!radius_hypothesis_ok(spec.radii, std::min(spec.truncation, spec.radii.k_max())))
        return best;
    for (std::int64_t nc = 0; 2 * nc <= spec.truncation; ++nc) {
        const double l2r = spec.radii.log2_at(2 * nc);
        auto m_min = std::max<std::int64_t>(
            0, static_cast<std::int64_t>(std::floor((log2_of_10 + l2r) / 2.0)) + 1);
        while (!(2.0 * static_cast<double>(m_min) > log2_of_10 + l2r))
            ++m_min;
        if (m_min > nc)
            continue;
        const auto cert = certificate_bound(a, spec, m_min, nc);
        if (cert.lower_bound > best.lower_bound)
            best = cert;
    }
    return best;
}

SandwichReport sandwich_report(const ExtensionSolution& solution, const CoefficientSequence& a,
                               const SpectrumSpec& spec, std::int64_t m, std::int64_t n) {
    SandwichReport rep;
    rep.lower = certificate_bound(a, spec, m, n).lower_bound;
    rep.upper = solution.upper;
    if (rep.lower <= 1e-12 && rep.upper <= 1e-12)
        rep.gap = 1.0; // zero data, unit gap by convention
    else
        rep.gap = rep.upper / std::max(rep.lower, 1e-12);
    return rep;
}

std::vector<ScalingRow> scaling_study(const WeightSequence& weights, const RadiusSequence& radii,
                                      const std::vector<std::int64_t>& n_list, int trials,
                                      std::uint64_t seed, int jobs) {
    if (trials < 1)
        throw Error(errc::bad_input, "scaling_study needs trials >= 1");
    const auto total = n_list.size() * static_cast<std::size_t>(trials);
    std::vector<ScalingRow> rows(total);

    auto run_one = [&](std::size_t flat) {
        const std::int64_t n_trunc = n_list[flat / static_cast<std::size_t>(trials)];
        const int trial = static_cast<int>(flat % static_cast<std::size_t>(trials));
        auto rng = Rng::stream(seed, static_cast<std::uint64_t>(n_trunc),
                               static_cast<std::uint64_t>(trial));
        // uniform direction on the constraint ellipsoid sum |a_k w_k|^2 = 1:
        // Gaussian in the b_k = a_k w_k coordinates, then normalized
        CoefficientSequence a;
        for (std::int64_t k = 0; k <= n_trunc; ++k)
            a.a.push_back(rng.complex_normal() / weights.at(k));
        const double energy = a.weighted_energy(weights);
        const double inv = 1.0 / std::sqrt(energy);
        for (auto& c : a.a)
            c *= inv;
        auto spec = SpectrumSpec::make(radii, n_trunc);
        auto sol = solve(ExtensionProblem::make(std::move(a), std::move(spec)));
        rows[flat] = {n_trunc, trial, sol.upper};
    };

    jobs = std::max(1, jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < total; ++i)
            run_one(i);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < jobs; ++w)
            pool.emplace_back([&, w]() {
                for (std::size_t i = static_cast<std::size_t>(w); i < total;
                     i += static_cast<std::size_t>(jobs))
                    run_one(i);
            });
        for (auto& th : pool)
            th.join();
    }
    return rows;
}

} // namespace sparsespec
