#ifndef SPARSESPEC_SPECTRUM_HPP
#define SPARSESPEC_SPECTRUM_HPP

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "sparsespec/errors.hpp"
#include "sparsespec/torus.hpp"

namespace sparsespec {

// Radii r_k of the spectral windows [2^k - r_k, 2^k + r_k], stored and
// compared exclusively in log2 scale: the block constructions push k into
// the millions, where 2^k and r_k are far outside double range.
class RadiusSequence {
public:
    static RadiusSequence from_table(std::vector<double> log2_r);
    // log2 r_k = slope*k + offset.  k_max is clipped where slope > 1 would
    // break the structural bound r_k <= 2^{k-1}.
    static RadiusSequence affine_log(double slope, double offset, std::int64_t k_max);

    double log2_at(std::int64_t k) const;
    std::int64_t k_max() const { return k_max_; }

private:
    enum class Kind { table, affine };
    Kind kind_ = Kind::table;
    std::vector<double> table_;
    double slope_ = 0.0;
    double offset_ = 0.0;
    std::int64_t k_max_ = -1;
};

// Positive weights w_k; the k < 0 convention w_k = infinity enters through
// inv_sq(k) = 0 there.
class WeightSequence {
public:
    static WeightSequence from_table(std::vector<double> w);
    static WeightSequence constant(double value, std::int64_t k_max);
    // log2 w_k = slope*k + offset
    static WeightSequence affine_log(double slope, double offset, std::int64_t k_max);

    double at(std::int64_t k) const;
    double inv_sq(std::int64_t k) const;
    std::int64_t k_max() const { return k_max_; }

private:
    enum class Kind { table, constant, affine };
    Kind kind_ = Kind::table;
    std::vector<double> table_;
    double value_ = 1.0;
    double value_inv_sq_ = 1.0; // the block scans hit inv_sq tens of millions of times
    double slope_ = 0.0;
    double offset_ = 0.0;
    std::int64_t k_max_ = -1;
};

// Construction accepts any nondecreasing radii with r_k <= 2^{k-1}; the
// theorem-level operations (certificates, multiplier kernels) additionally
// demand the standing hypothesis r_k < 2^{k-10} and check it through these.
bool radius_hypothesis_ok(const RadiusSequence& radii, std::int64_t k_hi);
void require_radius_hypothesis(const RadiusSequence& radii, std::int64_t k_hi, const char* where);

// lambda_0 = 0 and r_{lambda_{s+1}-1} < 2^{lambda_s} <= r_{lambda_{s+1}}.
// Stops at k_max; a short result signals radii that stay bounded in range.
std::vector<std::int64_t> lambda_sequence(const RadiusSequence& radii, std::int64_t k_max);

// Truncated sparse-spectrum description: radii, pinned range 0..N, and the
// lambda grouping derived from the radii.
struct SpectrumSpec {
    RadiusSequence radii;
    std::int64_t truncation = 0; // N
    std::vector<std::int64_t> lambda;

    static SpectrumSpec make(RadiusSequence radii, std::int64_t truncation);

    // index s with lambda_s <= k < lambda_{s+1} (last stored block if beyond)
    std::size_t lambda_block_of(std::int64_t k) const;
    // lambda values <= N followed by the sentinel N+1; consecutive pairs
    // delimit the blocks partitioning [0, N]
    std::vector<std::int64_t> block_boundaries() const;
};

// true iff n lies in some window [2^k - r_k, 2^k + r_k], k <= N.  Only the
// two candidates k = floor(log2 n), k = floor(log2 n)+1 can match because
// r_k < 2^{k-10}.
bool is_allowed(std::int64_t n, const SpectrumSpec& spec);

// All integers of [1, 2^{N+1}] in the allowed set, sorted.
std::vector<std::int64_t> allowed_set(const SpectrumSpec& spec);

// B_N = max_{0<=k<=N} sum_{n=max(0,[log2 r_k])}^{k} w_n^{-2}
double condition_value(const RadiusSequence& radii, const WeightSequence& weights, std::int64_t n);

// Growth test standing in for "the sup diverges": B_{2N} >= B_N + 1 at the
// probed N (clipped to the available range).  A flag, never a proof.
bool condition_diverging(const RadiusSequence& radii, const WeightSequence& weights, std::int64_t n);

// Finitely supported pinned coefficients a_0..a_N.
struct CoefficientSequence {
    std::vector<cplx> a;

    std::int64_t top_index() const { return static_cast<std::int64_t>(a.size()) - 1; }
    double weighted_energy(const WeightSequence& w) const;
    double l1_over(std::int64_t k_lo, std::int64_t k_hi) const;
};

// sum_s (block l1 sum)^2 and max_s block l1 sum, blocks delimited by the
// spec's lambda sequence.
std::pair<double, double> block_functional(const CoefficientSequence& a, const SpectrumSpec& spec);

// Same sums over explicit boundaries b_0 < b_1 < ... (block s = [b_s, b_{s+1}-1]).
std::vector<double> block_l1_sums(const CoefficientSequence& a, const std::vector<std::int64_t>& boundaries);

// Certificate windows [2M_s, 2N_s]: 4^{M_s} > 10 r_{2N_s}, pairwise disjoint
// and increasing.
struct BlockPlan {
    struct Block {
        std::int64_t m;
        std::int64_t n;
    };
    std::vector<Block> blocks;

    void validate(const RadiusSequence& radii) const;
};

// Greedy first-fit scan for blocks with sum_{k=2M_s}^{2N_s} w_k^{-2} > 16^s,
// s = 0..s_max.  Both defining inequalities are re-verified on the result.
BlockPlan find_blocks(const RadiusSequence& radii, const WeightSequence& weights, int s_max);

// a_k = 2^s w_k^{-2} / sum_{n in block s} w_n^{-2} on block s, else 0.
// Dense output; refuses astronomically long plans (use the summary instead).
CoefficientSequence build_counterexample(const BlockPlan& plan, const WeightSequence& weights);

// Streaming per-block bookkeeping of the same construction; works at any k.
struct CounterexampleSummary {
    struct Block {
        std::int64_t m;
        std::int64_t n;
        double weight_sum;  // sum of w^{-2} over [2M, 2N]
        double l1_sum;      // sum |a_k| = 2^s up to roundoff
        double energy_term; // 4^s / weight_sum
    };
    std::vector<Block> blocks;
    double weighted_energy = 0.0;
};

CounterexampleSummary counterexample_summary(const BlockPlan& plan, const WeightSequence& weights);

} // namespace sparsespec

#endif
