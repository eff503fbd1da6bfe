#ifndef SPARSESPEC_MULTIPLIER_HPP
#define SPARSESPEC_MULTIPLIER_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sparsespec/spectrum.hpp"
#include "sparsespec/torus.hpp"

namespace sparsespec {

// psi(t) = exp(1 - 1/(1-t^2)) on (-1, 1), zero outside.  psi(0) = 1.
double psi_eval(double t);

// Smooth monotone step: 1 on (-inf, 0.52], 0 on [0.99, inf); the bridge is a
// normalized integral of the endpoint-flat bump exp(-1/((t-a)(b-t))).
double eta_eval(double x);

// phi(x) = eta(x) - eta(2x): supported in [0.26, 0.99], equal to 1 around
// x = 1/2, and sum_k phi(2^k x) = 1 for x > 0.
double phi_eval(double x);

// max over log-uniform samples x in [2^lo, 2^hi] of |sum_{|k|<=60} phi(2^k x) - 1|
double partition_check(double log2x_lo, double log2x_hi, int samples);

// The smoothed weighted window profile m(n) of the multiplier M:
// m(n) = psi((n - 2^k)/r_{lambda_s}) / w_k on the window of 2^k, k <= N.
struct MultiplierSpec {
    SpectrumSpec spec;
    WeightSequence weights;
    std::int64_t n_trunc = 0;
    std::map<std::int64_t, double> table;
    std::vector<double> r_lambda; // r_{lambda_s(k)} for k = 0..N

    double at(std::int64_t freq) const {
        auto it = table.find(freq);
        return it == table.end() ? 0.0 : it->second;
    }
    std::vector<std::int64_t> support() const;
    std::int64_t max_frequency() const;
};

MultiplierSpec build_m(const SpectrumSpec& spec, const WeightSequence& weights, std::int64_t n_trunc);

// (M nu)(t) = sum_{n>=1} m(n) nu_hat(n) e^{2 pi i n t}
SampledFunction apply_M(const SpectralVector& nu_hat, const MultiplierSpec& m, std::int64_t grid);
SampledFunction apply_M(const AtomicMeasure& nu, const MultiplierSpec& m, std::int64_t grid);
SampledFunction apply_M(const SampledFunction& f, const MultiplierSpec& m, std::int64_t grid);

// Littlewood-Paley projection: phi(2^{-k} n) for k > 0, phi(-2^k n) for
// k < 0, the mean for k = 0.
SampledFunction apply_Pk(const SampledFunction& f, std::int64_t k, std::int64_t grid);

// Sf(t) = (sum_k |P_k f(t)|^2)^{1/2}
SampledFunction square_function(const SampledFunction& f, std::int64_t grid);

// Kernels K_k of the vector-valued convolution operator TM, stored through
// the simplified closed form (1/w_{k-1}) e^{2 pi i 2^{k-1} x} R_s(x).
struct KernelFamily {
    std::int64_t grid = 0;
    std::vector<std::int64_t> k_index;     // 1..N+1
    std::vector<SampledFunction> kernels;  // samples of K_k
};

KernelFamily kernel_family(const MultiplierSpec& m, std::int64_t grid);

// Direct evaluation sum_n phi(2^{-k} n) m(n) e^{2 pi i n x}; cross-checks the
// stored simplification.
SampledFunction kernel_unsimplified(const MultiplierSpec& m, std::int64_t k, std::int64_t grid);

// Fitted constants of |R_s(y)| <= C1 r / (1 + (r|y|)^2) and
// |R_s(x-y) - R_s(x)| <= C2 r min(r|y|, 1) / (1 + (r|x|)^2) over the grid.
struct RBoundFit {
    double r = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
};
std::vector<RBoundFit> r_bound_fit(const std::vector<double>& r_values, std::int64_t grid);

// Grid-measured analogues of the sufficient kernel conditions: the L2
// operator-norm bound, sup |y| ||K(y)||, and the smoothness integral.
struct HormanderReport {
    double d2 = 0.0; // max_n sum_k (phi(2^{-k} n) m(n))^2
    double d3 = 0.0; // sup over dyadic y of |y| ||K(y)||_{l2}
    double d4 = 0.0; // sup over dyadic y of int_{2|y|<|x|<1/2} ||K(x-y)-K(x)|| dx
    double d3_witness_y = 0.0;
    double d4_witness_y = 0.0;
};

HormanderReport hormander_check(const MultiplierSpec& m, std::int64_t grid);

// Measures whose coefficients are known in closed form, so the same test
// family is reproducible exactly across grids.
struct TestMeasure {
    enum class Kind { atomic, fejer, density };
    Kind kind = Kind::atomic;
    AtomicMeasure atoms;
    std::int64_t fejer_order = 0;
    std::vector<cplx> density_coeffs; // density |q|^2 / ||q||_2^2
    std::string label;

    double total_variation() const;
    SpectralVector coeffs(const std::vector<std::int64_t>& freqs) const;
};

// Diracs, random atomic measures (<= 64 atoms), Fejer densities, random
// L1-normalized densities, at least `count` in total.
std::vector<TestMeasure> standard_test_family(std::uint64_t seed, int count);

struct InterpolationReport {
    double sup_interp = 0.0; // ||M nu||_{4/3} / (TV^{1/2} ||M nu||_2^{1/2})
    double sup_weak = 0.0;   // weak_l1(S(M nu)) / TV
    int degenerate = 0;
    std::string interp_witness;
    std::string weak_witness;
};

InterpolationReport interpolation_harness(const MultiplierSpec& m,
                                          const std::vector<TestMeasure>& family, std::int64_t grid);

// min/max over trials of ||f||_{4/3} / ||f||_2 for random lacunary
// f = sum b_k e^{2 pi i 2^k x}.
std::pair<double, double> lacunary_ratio(int trials, std::int64_t n_trunc, std::uint64_t seed,
                                         std::int64_t grid);

} // namespace sparsespec

#endif
