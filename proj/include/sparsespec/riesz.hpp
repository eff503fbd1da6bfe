#ifndef SPARSESPEC_RIESZ_HPP
#define SPARSESPEC_RIESZ_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "sparsespec/spectrum.hpp"
#include "sparsespec/torus.hpp"

namespace sparsespec {

enum class Parity { even, odd };

// Product of factors 1 + cos(2 pi F_k (x + alpha_k)), k = M..N, with
// F_k = 4^k (even parity, hits coefficient indices 2k) or F_k = 4^k / 2
// (odd parity, hits indices 2k-1; needs M >= 1 so F_M stays an integer).
struct RieszProduct {
    Parity parity = Parity::even;
    std::int64_t m = 0;
    std::int64_t n = 0;
    std::vector<double> phases; // stored reduced mod 1/F_k

    static RieszProduct make(Parity parity, std::int64_t m, std::int64_t n,
                             const std::vector<double>& raw_phases);

    std::int64_t factor_frequency(std::int64_t k) const;
    // 1/2 e^{2 pi i F_k alpha_k}, computed from the stored reduced phase
    cplx factor_coefficient(std::int64_t k) const;
};

struct CertificateResult {
    double lower_bound = 0.0;
    std::int64_t m = 0;
    std::int64_t n = 0;
    double even_contrib = 0.0; // sum over |a| at even indices of [2M, 2N]
    double odd_contrib = 0.0;  // odd indices
};

// Exact sparse Fourier expansion via iterated sparse convolution.  ghat(0)=1
// and ghat(F_k) = factor_coefficient(k) exactly; every other entry is a
// product of factor coefficients at a sum of distinct +-F_j.
SpectralVector riesz_coeffs(const RieszProduct& p);

// (min over grid, integral): nonnegativity and unit mass of the product,
// checked numerically.  Needs G >= 4 F_N.
std::pair<double, double> riesz_l1_check(const RieszProduct& p, std::int64_t grid);

// Phases aligning the pairing: F_k alpha_k = arg(a_hat(F_k)) / 2pi (mod 1),
// zero coefficient gives phase 0.
std::vector<double> optimal_phases(const SpectralVector& a_hat, std::int64_t m, std::int64_t n,
                                   Parity parity);

// lower_bound = (1/4) sum_{k=2M}^{2N} |a_k|, a valid sup-norm lower bound for
// every continuous f with fhat(2^k) = a_k and spectrum in the allowed set.
// Purely arithmetic; checks 4^M > 10 r_{2N} (log scale) and the standing
// radius hypothesis.
CertificateResult certificate_bound(const CoefficientSequence& a, const SpectrumSpec& spec,
                                    std::int64_t m, std::int64_t n);

// | pairing(f, g) - (1/2) sum_k fhat(F_k) e^{-2 pi i F_k alpha_k} | for a
// band-limited f with spectrum in the allowed set.
double pairing_verify(const SampledFunction& f, const RieszProduct& p, const SpectrumSpec& spec);

} // namespace sparsespec

#endif
