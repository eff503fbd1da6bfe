#include "sparsespec/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sparsespec {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double log2_of_10 = 3.321928094887362;
} // namespace

RieszProduct RieszProduct::make(Parity parity, std::int64_t m, std::int64_t n,
                                const std::vector<double>& raw_phases) {
    if (m > n)
        throw Error(errc::bad_input, "Riesz product needs M <= N");
    if (parity == Parity::odd && m < 1)
        throw Error(errc::bad_input, "odd-parity Riesz products need M >= 1 (4^0/2 is not an integer)");
    if (parity == Parity::even && m < 0)
        throw Error(errc::bad_input, "Riesz product needs M >= 0");
    if (n > 30)
        throw Error(errc::range_too_wide, "factor frequency 4^N overflows for N > 30");
    if (n - m > 12)
        throw Error(errc::range_too_wide, "expansion has 3^(N-M+1) terms; N-M <= 12 required");
    if (raw_phases.size() != static_cast<std::size_t>(n - m + 1))
        throw Error(errc::bad_input, "expected " + std::to_string(n - m + 1) + " phases");

    RieszProduct p;
    p.parity = parity;
    p.m = m;
    p.n = n;
    p.phases.reserve(raw_phases.size());
    for (std::int64_t k = m; k <= n; ++k) {
        const double f = static_cast<double>(p.factor_frequency(k));
        const double alpha = raw_phases[static_cast<std::size_t>(k - m)];
        double turns = alpha * f;
        turns -= std::floor(turns); // F_k alpha mod 1, in [0, 1)
        p.phases.push_back(turns / f);
    }
    return p;
}

std::int64_t RieszProduct::factor_frequency(std::int64_t k) const {
    return parity == Parity::even ? (std::int64_t{1} << (2 * k)) : (std::int64_t{1} << (2 * k - 1));
}

cplx RieszProduct::factor_coefficient(std::int64_t k) const {
    const double turns = phases[static_cast<std::size_t>(k - m)] *
                         static_cast<double>(factor_frequency(k));
    return std::polar(0.5, two_pi * turns);
}

SpectralVector riesz_coeffs(const RieszProduct& p) {
    SpectralVector acc;
    acc.set(0, cplx{1.0, 0.0});
    for (std::int64_t k = p.m; k <= p.n; ++k) {
        const std::int64_t f = p.factor_frequency(k);
        const cplx c = p.factor_coefficient(k);
        SpectralVector next;
        for (const auto& [freq, val] : acc) {
            next.add(freq, val);
            next.add(freq + f, val * c);
            next.add(freq - f, val * std::conj(c));
        }
        acc = std::move(next);
    }
    return acc;
}

std::pair<double, double> riesz_l1_check(const RieszProduct& p, std::int64_t grid) {
    if (grid < 4 * p.factor_frequency(p.n))
        throw Error(errc::grid_too_coarse, "riesz_l1_check needs G >= 4 F_N, got G = " + std::to_string(grid));
    const auto g = synthesize(riesz_coeffs(p), grid);
    double min_value = std::numeric_limits<double>::infinity();
    cplx mean{0.0, 0.0};
    for (const auto& z : g.samples()) {
        min_value = std::min(min_value, z.real());
        mean += z;
    }
    mean /= static_cast<double>(grid);
    return {min_value, mean.real()};
}

std::vector<double> optimal_phases(const SpectralVector& a_hat, std::int64_t m, std::int64_t n,
                                   Parity parity) {
    std::vector<double> out;
    for (std::int64_t k = m; k <= n; ++k) {
        const std::int64_t f =
            parity == Parity::even ? (std::int64_t{1} << (2 * k)) : (std::int64_t{1} << (2 * k - 1));
        const cplx z = a_hat.at(f);
        if (std::abs(z) == 0.0) {
            out.push_back(0.0);
            continue;
        }
        double turns = std::arg(z) / two_pi;
        turns -= std::floor(turns);
        out.push_back(turns / static_cast<double>(f));
    }
    return out;
}

CertificateResult certificate_bound(const CoefficientSequence& a, const SpectrumSpec& spec,
                                    std::int64_t m, std::int64_t n) {
    if (m < 0 || m > n)
        throw Error(errc::bad_input, "certificate window needs 0 <= M <= N");
    if (2 * n > spec.truncation)
        throw Error(errc::bad_input, "certificate window [2M, 2N] exceeds the spec truncation");
    require_radius_hypothesis(spec.radii, std::min(spec.truncation, spec.radii.k_max()), "certificate_bound");
    if (!(2.0 * static_cast<double>(m) > log2_of_10 + spec.radii.log2_at(2 * n)))
        throw Error(errc::separation_violated,
                    "certificate needs 4^M > 10 r_{2N}: M = " + std::to_string(m) +
                        ", log2 r_{2N} = " + std::to_string(spec.radii.log2_at(2 * n)));

    CertificateResult res;
    res.m = m;
    res.n = n;
    // even indices of [2M, 2N] come from the even-parity product, the odd
    // indices 2j-1, j = M+1..N, from the odd-parity one
    for (std::int64_t j = m; j <= n; ++j)
        res.even_contrib += std::abs(2 * j <= a.top_index() ? a.a[static_cast<std::size_t>(2 * j)] : cplx{});
    for (std::int64_t j = m + 1; j <= n; ++j)
        res.odd_contrib += std::abs(2 * j - 1 <= a.top_index() ? a.a[static_cast<std::size_t>(2 * j - 1)] : cplx{});
    res.lower_bound = 0.25 * (res.even_contrib + res.odd_contrib);
    return res;
}

double pairing_verify(const SampledFunction& f, const RieszProduct& p, const SpectrumSpec& spec) {
    require_radius_hypothesis(spec.radii, std::min(spec.truncation, spec.radii.k_max()), "pairing_verify");
    const std::int64_t win_hi = std::min(2 * p.n, spec.radii.k_max());
    if (!(2.0 * static_cast<double>(p.m) > log2_of_10 + spec.radii.log2_at(win_hi)))
        throw Error(errc::separation_violated, "pairing identity needs 4^M > 10 r_{2N}");

    const auto f_hat = analyze(f);
    double scale = 0.0;
    for (const auto& [freq, c] : f_hat)
        scale = std::max(scale, std::abs(c));
    for (const auto& [freq, c] : f_hat)
        if (std::abs(c) > 1e-12 * std::max(1.0, scale) && !is_allowed(freq, spec))
            throw Error(errc::bad_input,
                        "pairing_verify needs spectrum inside the allowed set; offender n = " +
                            std::to_string(freq));

    const auto coeffs = riesz_coeffs(p);
    if (2 * coeffs.max_abs_frequency() > f.grid_size())
        throw Error(errc::grid_too_coarse, "grid does not resolve the Riesz product");
    const auto g = synthesize(coeffs, f.grid_size());

    cplx spectral{0.0, 0.0};
    for (std::int64_t k = p.m; k <= p.n; ++k) {
        const double turns = p.phases[static_cast<std::size_t>(k - p.m)] *
                             static_cast<double>(p.factor_frequency(k));
        spectral += f_hat.at(p.factor_frequency(k)) * std::polar(1.0, -two_pi * turns);
    }
    spectral *= 0.5;
    return std::abs(pairing(f, g) - spectral);
}

} // namespace sparsespec
