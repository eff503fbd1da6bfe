#include "sparsespec/spectrum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace sparsespec {

namespace {

constexpr double log2_of_10 = 3.321928094887362;

// Neumaier-compensated accumulator for the long block sums: the counterexample
// contracts are checked at 1e-12 over tens of millions of terms.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

std::int64_t floor_log2(std::int64_t n) { // n >= 1
    return static_cast<std::int64_t>(std::bit_width(static_cast<std::uint64_t>(n))) - 1;
}

} // namespace

RadiusSequence RadiusSequence::from_table(std::vector<double> log2_r) {
    if (log2_r.empty())
        throw Error(errc::bad_input, "radius table is empty");
    for (std::size_t k = 0; k < log2_r.size(); ++k) {
        if (std::isnan(log2_r[k]))
            throw Error(errc::bad_input, "radius table holds NaN at k=" + std::to_string(k));
        // structural bound: keeps every window inside (2^{k-1}, 3*2^{k-1})
        if (!(log2_r[k] <= static_cast<double>(k) - 1.0))
            throw Error(errc::bad_input, "radius bound r_k <= 2^(k-1) fails at k=" + std::to_string(k));
        if (k > 0 && log2_r[k] < log2_r[k - 1])
            throw Error(errc::bad_input, "radius sequence must be nondecreasing, violated at k=" + std::to_string(k));
    }
    RadiusSequence r;
    r.kind_ = Kind::table;
    r.k_max_ = static_cast<std::int64_t>(log2_r.size()) - 1;
    r.table_ = std::move(log2_r);
    return r;
}

RadiusSequence RadiusSequence::affine_log(double slope, double offset, std::int64_t k_max) {
    if (slope < 0.0)
        throw Error(errc::bad_input, "affine-log radii need slope >= 0 (nondecreasing radii)");
    if (!(offset <= -1.0))
        throw Error(errc::bad_input, "affine-log radii need offset <= -1 so that r_0 <= 1/2");
    if (k_max < 0)
        throw Error(errc::bad_input, "affine-log radii need k_max >= 0");
    if (slope > 1.0) {
        // keep slope*k + offset <= k - 1
        const auto cap = static_cast<std::int64_t>(std::floor((-1.0 - offset) / (slope - 1.0)));
        k_max = std::min(k_max, cap);
        if (k_max < 0)
            throw Error(errc::bad_input, "affine-log radii violate r_k <= 2^{k-1} for every k");
    }
    RadiusSequence r;
    r.kind_ = Kind::affine;
    r.slope_ = slope;
    r.offset_ = offset;
    r.k_max_ = k_max;
    return r;
}

bool radius_hypothesis_ok(const RadiusSequence& radii, std::int64_t k_hi) {
    k_hi = std::min(k_hi, radii.k_max());
    for (std::int64_t k = 0; k <= k_hi; ++k)
        if (!(radii.log2_at(k) < static_cast<double>(k) - 10.0))
            return false;
    return true;
}

void require_radius_hypothesis(const RadiusSequence& radii, std::int64_t k_hi, const char* where) {
    if (!radius_hypothesis_ok(radii, k_hi))
        throw Error(errc::separation_violated,
                    std::string(where) + " requires the standing hypothesis r_k < 2^{k-10} up to k=" +
                        std::to_string(std::min(k_hi, radii.k_max())));
}

double RadiusSequence::log2_at(std::int64_t k) const {
    if (k < 0 || k > k_max_)
        throw Error(errc::bad_input, "radius index " + std::to_string(k) + " out of range [0, " +
                                         std::to_string(k_max_) + "]");
    if (kind_ == Kind::table)
        return table_[static_cast<std::size_t>(k)];
    return slope_ * static_cast<double>(k) + offset_;
}

WeightSequence WeightSequence::from_table(std::vector<double> w) {
    if (w.empty())
        throw Error(errc::bad_input, "weight table is empty");
    for (std::size_t k = 0; k < w.size(); ++k)
        if (!(w[k] > 0.0) || !std::isfinite(w[k]))
            throw Error(errc::bad_input, "weights must be strictly positive and finite, bad entry at k=" +
                                             std::to_string(k));
    WeightSequence s;
    s.kind_ = Kind::table;
    s.k_max_ = static_cast<std::int64_t>(w.size()) - 1;
    s.table_ = std::move(w);
    return s;
}

WeightSequence WeightSequence::constant(double value, std::int64_t k_max) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw Error(errc::bad_input, "constant weight must be strictly positive and finite");
    if (k_max < 0)
        throw Error(errc::bad_input, "constant weights need k_max >= 0");
    WeightSequence s;
    s.kind_ = Kind::constant;
    s.value_ = value;
    s.value_inv_sq_ = 1.0 / (value * value);
    s.k_max_ = k_max;
    return s;
}

WeightSequence WeightSequence::affine_log(double slope, double offset, std::int64_t k_max) {
    if (k_max < 0)
        throw Error(errc::bad_input, "affine-log weights need k_max >= 0");
    WeightSequence s;
    s.kind_ = Kind::affine;
    s.slope_ = slope;
    s.offset_ = offset;
    s.k_max_ = k_max;
    // reject overflow to 0/inf inside the range
    if (!std::isfinite(s.at(0)) || !(s.at(0) > 0.0) || !std::isfinite(s.at(k_max)) || !(s.at(k_max) > 0.0))
        throw Error(errc::bad_input, "affine-log weights leave (0, inf) within k range");
    return s;
}

double WeightSequence::at(std::int64_t k) const {
    if (k < 0 || k > k_max_)
        throw Error(errc::bad_input, "weight index " + std::to_string(k) + " out of range [0, " +
                                         std::to_string(k_max_) + "]");
    switch (kind_) {
    case Kind::table: return table_[static_cast<std::size_t>(k)];
    case Kind::constant: return value_;
    case Kind::affine: return std::exp2(slope_ * static_cast<double>(k) + offset_);
    }
    return 1.0;
}

double WeightSequence::inv_sq(std::int64_t k) const {
    if (k < 0)
        return 0.0; // w_k = infinity for k < 0
    if (kind_ == Kind::constant) {
        if (k > k_max_)
            throw Error(errc::bad_input, "weight index " + std::to_string(k) + " out of range");
        return value_inv_sq_;
    }
    const double w = at(k);
    return 1.0 / (w * w);
}

std::vector<std::int64_t> lambda_sequence(const RadiusSequence& radii, std::int64_t k_max) {
    k_max = std::min(k_max, radii.k_max());
    std::vector<std::int64_t> lambda{0};
    std::int64_t probe = 1;
    while (true) {
        const std::int64_t target = lambda.back();
        // r_k <= 2^{k-1} forces the next lambda beyond target
        probe = std::max(probe, target + 1);
        std::int64_t found = -1;
        for (; probe <= k_max; ++probe) {
            if (radii.log2_at(probe) >= static_cast<double>(target)) {
                found = probe;
                break;
            }
        }
        if (found < 0)
            break;
        lambda.push_back(found);
    }
    return lambda;
}

SpectrumSpec SpectrumSpec::make(RadiusSequence radii, std::int64_t truncation) {
    if (truncation < 0)
        throw Error(errc::bad_input, "truncation N must be >= 0");
    if (radii.k_max() < truncation)
        throw Error(errc::bad_input, "radii defined up to k=" + std::to_string(radii.k_max()) +
                                         " but truncation N=" + std::to_string(truncation));
    SpectrumSpec spec;
    spec.lambda = lambda_sequence(radii, radii.k_max());
    spec.radii = std::move(radii);
    spec.truncation = truncation;
    // re-check the defining two-sided inequality for every stored step
    for (std::size_t s = 0; s + 1 < spec.lambda.size(); ++s) {
        const auto next = spec.lambda[s + 1];
        const double target = static_cast<double>(spec.lambda[s]);
        if (!(spec.radii.log2_at(next) >= target) || !(spec.radii.log2_at(next - 1) < target))
            throw Error(errc::bad_input, "lambda recursion violated at s=" + std::to_string(s));
    }
    return spec;
}

std::size_t SpectrumSpec::lambda_block_of(std::int64_t k) const {
    std::size_t s = 0;
    while (s + 1 < lambda.size() && lambda[s + 1] <= k)
        ++s;
    return s;
}

std::vector<std::int64_t> SpectrumSpec::block_boundaries() const {
    std::vector<std::int64_t> b;
    for (const auto l : lambda)
        if (l <= truncation)
            b.push_back(l);
    b.push_back(truncation + 1);
    return b;
}

bool is_allowed(std::int64_t n, const SpectrumSpec& spec) {
    if (n < 1)
        return false;
    const std::int64_t k0 = floor_log2(n);
    for (std::int64_t k = k0; k <= k0 + 1; ++k) {
        if (k < 0 || k > spec.truncation || k > 62)
            continue;
        const std::int64_t center = std::int64_t{1} << k;
        const std::int64_t dist = std::abs(n - center);
        if (dist == 0)
            return true;
        if (std::log2(static_cast<double>(dist)) <= spec.radii.log2_at(k))
            return true;
    }
    return false;
}

std::vector<std::int64_t> allowed_set(const SpectrumSpec& spec) {
    const std::int64_t n_trunc = spec.truncation;
    if (n_trunc > 60)
        throw Error(errc::truncation_too_large, "allowed_set needs N <= 60, got " + std::to_string(n_trunc));
    std::vector<std::int64_t> out;
    for (std::int64_t k = 0; k <= n_trunc; ++k) {
        const std::int64_t center = std::int64_t{1} << k;
        const double log2r = spec.radii.log2_at(k);
        // overshoot the window by 2 and let the log-scale test decide
        const std::int64_t reach = log2r <= 0.0 ? 2 : static_cast<std::int64_t>(std::exp2(log2r)) + 2;
        if (out.size() + static_cast<std::size_t>(2 * reach + 1) > (std::size_t{1} << 26))
            throw Error(errc::truncation_too_large, "allowed set too large to materialize");
        for (std::int64_t n = std::max<std::int64_t>(1, center - reach); n <= center + reach; ++n)
            if (is_allowed(n, spec))
                out.push_back(n);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double condition_value(const RadiusSequence& radii, const WeightSequence& weights, std::int64_t n) {
    if (n < 0)
        throw Error(errc::bad_input, "condition_value needs N >= 0");
    if (radii.k_max() < n || weights.k_max() < n)
        throw Error(errc::bad_input, "condition_value probes beyond the defined sequences");
    double best = 0.0;
    double window = 0.0;
    std::int64_t start = 0; // window start, nondecreasing since radii are
    for (std::int64_t k = 0; k <= n; ++k) {
        window += weights.inv_sq(k);
        const double l2r = radii.log2_at(k);
        const std::int64_t lo = l2r < 0.0 ? 0 : std::min<std::int64_t>(k, static_cast<std::int64_t>(std::floor(l2r)));
        while (start < lo) {
            window -= weights.inv_sq(start);
            ++start;
        }
        best = std::max(best, window);
    }
    return best;
}

bool condition_diverging(const RadiusSequence& radii, const WeightSequence& weights, std::int64_t n) {
    const std::int64_t cap = std::min(radii.k_max(), weights.k_max());
    const std::int64_t probe = std::min(n, cap / 2);
    const double b1 = condition_value(radii, weights, probe);
    const double b2 = condition_value(radii, weights, 2 * probe);
    return b2 >= b1 + 1.0;
}

double CoefficientSequence::weighted_energy(const WeightSequence& w) const {
    CompensatedSum acc;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double wk = w.at(static_cast<std::int64_t>(k));
        acc.add(std::norm(a[k]) * wk * wk);
    }
    return acc.value();
}

double CoefficientSequence::l1_over(std::int64_t k_lo, std::int64_t k_hi) const {
    CompensatedSum acc;
    for (std::int64_t k = std::max<std::int64_t>(0, k_lo); k <= std::min(k_hi, top_index()); ++k)
        acc.add(std::abs(a[static_cast<std::size_t>(k)]));
    return acc.value();
}

std::vector<double> block_l1_sums(const CoefficientSequence& a, const std::vector<std::int64_t>& boundaries) {
    std::vector<double> sums;
    for (std::size_t s = 0; s + 1 < boundaries.size(); ++s)
        sums.push_back(a.l1_over(boundaries[s], boundaries[s + 1] - 1));
    return sums;
}

std::pair<double, double> block_functional(const CoefficientSequence& a, const SpectrumSpec& spec) {
    if (a.top_index() > spec.truncation)
        throw Error(errc::bad_input, "coefficients extend beyond the spec truncation");
    const auto sums = block_l1_sums(a, spec.block_boundaries());
    double sumsq = 0.0;
    double sup = 0.0;
    for (const double s : sums) {
        sumsq += s * s;
        sup = std::max(sup, s);
    }
    return {sumsq, sup};
}

void BlockPlan::validate(const RadiusSequence& radii) const {
    std::int64_t prev_end = -1;
    for (std::size_t s = 0; s < blocks.size(); ++s) {
        const auto [m, n] = blocks[s];
        if (m < 1 || m >= n)
            throw Error(errc::bad_input, "block " + std::to_string(s) + " needs 1 <= M < N");
        if (2 * m <= prev_end)
            throw Error(errc::bad_input, "block intervals [2M, 2N] must be disjoint and increasing");
        // log-scale form of 4^M > 10 r_{2N}
        if (!(2.0 * static_cast<double>(m) > log2_of_10 + radii.log2_at(2 * n)))
            throw Error(errc::separation_violated,
                        "4^M > 10 r_{2N} fails for block " + std::to_string(s));
        prev_end = 2 * n;
    }
}

BlockPlan find_blocks(const RadiusSequence& radii, const WeightSequence& weights, int s_max) {
    if (s_max < 0)
        throw Error(errc::bad_input, "find_blocks needs s_max >= 0");
    const std::int64_t k_cap = std::min(radii.k_max(), weights.k_max());
    BlockPlan plan;
    std::int64_t lo = 2; // smallest admissible 2M (M >= 1)

    // sliding window [2M(e), e]; both ends only move right
    std::int64_t win_lo = 2;
    std::int64_t win_hi = 1; // exclusive of nothing: window currently empty
    double window = 0.0;
    auto advance_to = [&](std::int64_t new_lo, std::int64_t new_hi) {
        while (win_hi < new_hi) {
            ++win_hi;
            if (win_hi >= win_lo)
                window += weights.inv_sq(win_hi);
        }
        while (win_lo < new_lo) {
            if (win_lo <= win_hi)
                window -= weights.inv_sq(win_lo);
            ++win_lo;
        }
    };

    for (int s = 0; s <= s_max; ++s) {
        const double threshold = std::exp2(4.0 * s); // 16^s
        bool found = false;
        for (std::int64_t e = std::max<std::int64_t>(lo + 2, 4) & ~std::int64_t{1}; e <= k_cap; e += 2) {
            const double l2r = radii.log2_at(e);
            std::int64_t m2 = std::max<std::int64_t>(lo, 2);
            if (l2r >= -10.0)
                m2 = std::max(m2, 10 + static_cast<std::int64_t>(std::floor(l2r)));
            const std::int64_t m = (m2 + 1) / 2;
            const std::int64_t n = e / 2;
            if (m >= n)
                continue;
            advance_to(2 * m, e);
            if (window > threshold) {
                plan.blocks.push_back({m, n});
                lo = e + 1;
                found = true;
                break;
            }
        }
        if (!found)
            throw Error(errc::blocks_not_found,
                        "no block with weight sum > 16^" + std::to_string(s) + " within k <= " +
                            std::to_string(k_cap) + "; radii/weights not divergent enough");
    }

    plan.validate(radii);
    // re-verify the weight-sum inequality with a fresh compensated sum
    for (std::size_t s = 0; s < plan.blocks.size(); ++s) {
        CompensatedSum acc;
        for (std::int64_t k = 2 * plan.blocks[s].m; k <= 2 * plan.blocks[s].n; ++k)
            acc.add(weights.inv_sq(k));
        if (!(acc.value() > std::exp2(4.0 * static_cast<double>(s))))
            throw Error(errc::blocks_not_found, "post-check failed: block weight sum <= 16^s");
    }
    return plan;
}

CoefficientSequence build_counterexample(const BlockPlan& plan, const WeightSequence& weights) {
    if (plan.blocks.empty())
        throw Error(errc::bad_input, "empty block plan");
    const std::int64_t top = 2 * plan.blocks.back().n;
    if (top > (std::int64_t{1} << 22))
        throw Error(errc::truncation_too_large,
                    "dense counterexample would need " + std::to_string(top + 1) +
                        " coefficients; use counterexample_summary");
    CoefficientSequence seq;
    seq.a.assign(static_cast<std::size_t>(top) + 1, cplx{0.0, 0.0});
    for (std::size_t s = 0; s < plan.blocks.size(); ++s) {
        const auto [m, n] = plan.blocks[s];
        CompensatedSum wsum;
        for (std::int64_t k = 2 * m; k <= 2 * n; ++k)
            wsum.add(weights.inv_sq(k));
        const double scale = std::exp2(static_cast<double>(s)) / wsum.value();
        for (std::int64_t k = 2 * m; k <= 2 * n; ++k)
            seq.a[static_cast<std::size_t>(k)] = scale * weights.inv_sq(k);
    }
    return seq;
}

CounterexampleSummary counterexample_summary(const BlockPlan& plan, const WeightSequence& weights) {
    CounterexampleSummary out;
    CompensatedSum energy;
    for (std::size_t s = 0; s < plan.blocks.size(); ++s) {
        const auto [m, n] = plan.blocks[s];
        CompensatedSum wsum;
        for (std::int64_t k = 2 * m; k <= 2 * n; ++k)
            wsum.add(weights.inv_sq(k));
        const double two_s = std::exp2(static_cast<double>(s));
        const double scale = two_s / wsum.value();
        CompensatedSum l1;
        for (std::int64_t k = 2 * m; k <= 2 * n; ++k)
            l1.add(scale * weights.inv_sq(k));
        const double energy_term = two_s * two_s / wsum.value();
        out.blocks.push_back({m, n, wsum.value(), l1.value(), energy_term});
        energy.add(energy_term);
    }
    out.weighted_energy = energy.value();
    return out;
}

} // namespace sparsespec
