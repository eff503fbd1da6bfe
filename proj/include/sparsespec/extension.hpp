#ifndef SPARSESPEC_EXTENSION_HPP
#define SPARSESPEC_EXTENSION_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "sparsespec/riesz.hpp"
#include "sparsespec/spectrum.hpp"
#include "sparsespec/torus.hpp"

namespace sparsespec {

// Minimize the sup-norm over trigonometric polynomials with spectrum in the
// allowed set and pinned coefficients fhat(2^k) = a_k, via L^p escalation.
struct ExtensionProblem {
    CoefficientSequence pinned;
    SpectrumSpec spec;
    std::int64_t grid = 0;          // >= 4 * 2^{N+1}
    std::vector<int> p_schedule;    // increasing even integers
    int max_iters = 300;            // per stage
    double tol = 1e-9;              // relative decrease of objective^{1/p}

    static ExtensionProblem make(CoefficientSequence pinned, SpectrumSpec spec,
                                 std::int64_t grid = 0);
};

struct StageRecord {
    int p = 0;
    double lp = 0.0; // ||f||_p at stage end
    int iters = 0;
};

struct ExtensionSolution {
    SpectralVector coeffs;   // support inside the allowed set, pinned exact
    double upper = 0.0;      // sup-norm on the refined grid 4G
    CertificateResult lower; // zero if no valid certificate window exists
    std::vector<StageRecord> history;
};

// Trivial extension: pinned coefficients only, free coefficients zero.
SpectralVector initial_guess(const ExtensionProblem& problem);

// objective = (1/G) sum |f_j|^p and the gradient with respect to the packed
// real coordinates of each free coefficient:
//   g_n = d obj / d Re(c_n) + i * d obj / d Im(c_n) = p * analyze(|f|^{p-2} f)(n)
std::pair<double, std::vector<cplx>> stage_objective_and_gradient(
    const SpectralVector& coeffs, const std::vector<std::int64_t>& free_set, std::int64_t grid,
    int p);

ExtensionSolution solve(const ExtensionProblem& problem);

// Largest certificate lower bound over all admissible windows [2M, 2N];
// zero result when the radii admit no valid window.
CertificateResult best_window_certificate(const CoefficientSequence& a, const SpectrumSpec& spec);

struct SandwichReport {
    double lower = 0.0;
    double upper = 0.0;
    double gap = 1.0;
};

// Certificate lower bound for the pinned data against the solver's upper
// estimate; gap quantifies the constant between the two routes.
SandwichReport sandwich_report(const ExtensionSolution& solution, const CoefficientSequence& a,
                               const SpectrumSpec& spec, std::int64_t m, std::int64_t n);

struct ScalingRow {
    std::int64_t n_trunc = 0;
    int trial = 0;
    double ratio = 0.0; // upper for a normalized to sum |a_k w_k|^2 = 1
};

std::vector<ScalingRow> scaling_study(const WeightSequence& weights, const RadiusSequence& radii,
                                      const std::vector<std::int64_t>& n_list, int trials,
                                      std::uint64_t seed, int jobs = 1);

} // namespace sparsespec

#endif
