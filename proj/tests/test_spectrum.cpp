#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "sparsespec/rng.hpp"
#include "sparsespec/spectrum.hpp"

using namespace sparsespec;

namespace {

RadiusSequence sentinel_then_linear(std::int64_t start, std::int64_t k_max) {
    // log2 r_k = k - start for k >= start, effectively -infinity below
    std::vector<double> t;
    for (std::int64_t k = 0; k <= k_max; ++k)
        t.push_back(k < start ? -1e9 : static_cast<double>(k - start));
    return RadiusSequence::from_table(std::move(t));
}

// direct two-loop evaluation of B_N, no sliding window
double condition_value_brute(const RadiusSequence& r, const WeightSequence& w, std::int64_t n) {
    double best = 0.0;
    for (std::int64_t k = 0; k <= n; ++k) {
        const double l2r = r.log2_at(k);
        std::int64_t lo = 0;
        if (l2r >= 0.0)
            lo = static_cast<std::int64_t>(std::floor(l2r));
        double s = 0.0;
        for (std::int64_t i = lo; i <= k; ++i)
            s += w.inv_sq(i);
        best = std::max(best, s);
    }
    return best;
}

} // namespace

TEST_CASE("radius sequence validation") {
    CHECK_THROWS_AS(RadiusSequence::from_table({0.0}), Error);            // r_0 = 1 > 1/2
    CHECK_THROWS_AS(RadiusSequence::from_table({-3.0, -4.0}), Error);     // decreasing
    CHECK_NOTHROW(RadiusSequence::from_table({-2.0, -2.0, -2.0, 1.0}));   // r_3 = 2 <= 4
    CHECK_THROWS_AS(RadiusSequence::affine_log(-0.5, -12.0, 40), Error);
    auto steep = RadiusSequence::affine_log(2.0, -12.0, 1000); // capped where r_k <= 2^{k-1} fails
    CHECK(steep.k_max() == 11);
    CHECK(radius_hypothesis_ok(RadiusSequence::affine_log(0.5, -12.0, 64), 64));
    CHECK(!radius_hypothesis_ok(RadiusSequence::from_table({-2.0, -2.0, -2.0, 1.0}), 3));
}

TEST_CASE("weight sequence conventions") {
    auto w = WeightSequence::from_table({1.0, 2.0});
    CHECK(w.inv_sq(-5) == 0.0); // w_k = infinity below zero
    CHECK(w.inv_sq(1) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(WeightSequence::from_table({1.0, 0.0}), Error);
    CHECK_THROWS_AS(WeightSequence::from_table({}), Error);
    auto g = WeightSequence::affine_log(-0.25, 0.0, 16);
    CHECK(g.at(4) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("is_allowed window membership") {
    auto spec = SpectrumSpec::make(RadiusSequence::affine_log(0.5, -12.0, 40), 10);
    CHECK(is_allowed(32, spec));        // 2^5 is a center
    CHECK(is_allowed(1, spec));
    CHECK(!is_allowed(33, spec));       // r_5 tiny
    CHECK(!is_allowed(0, spec));
    CHECK(!is_allowed(-8, spec));

    std::vector<double> t(15, -1e9);
    for (std::int64_t k = 1; k < 15; ++k)
        t[static_cast<std::size_t>(k)] = -12.0 + static_cast<double>(k) * 0.5;
    t[14] = std::log2(3.0); // r_14 = 3 exactly
    auto spec14 = SpectrumSpec::make(RadiusSequence::from_table(t), 14);
    CHECK(is_allowed((std::int64_t{1} << 14) + 3, spec14)); // boundary point included
    CHECK(!is_allowed((std::int64_t{1} << 14) + 4, spec14));
    CHECK(is_allowed((std::int64_t{1} << 14) - 3, spec14));
}

TEST_CASE("is_allowed respects truncation") {
    auto spec = SpectrumSpec::make(RadiusSequence::affine_log(0.5, -12.0, 40), 5);
    CHECK(is_allowed(32, spec));
    CHECK(!is_allowed(64, spec)); // k = 6 > N
}

TEST_CASE("allowed_set enumeration") {
    auto tiny = SpectrumSpec::make(RadiusSequence::from_table({-2.0, -2.0, -2.0}), 2);
    CHECK(allowed_set(tiny) == std::vector<std::int64_t>{1, 2, 4});

    auto spec = SpectrumSpec::make(RadiusSequence::from_table({-2.0, -2.0, -2.0, 1.0}), 3);
    CHECK(allowed_set(spec) == std::vector<std::int64_t>{1, 2, 4, 6, 7, 8, 9, 10});
}

TEST_CASE("allowed_set against direct scan oracle") {
    Rng rng(17);
    for (int trial = 0; trial < 8; ++trial) {
        const double slope = rng.uniform(0.0, 0.9);
        const double offset = rng.uniform(-14.0, -9.0);
        const auto n_trunc = rng.uniform_int(3, 10);
        auto spec = SpectrumSpec::make(RadiusSequence::affine_log(slope, offset, 64), n_trunc);
        std::vector<std::int64_t> brute;
        for (std::int64_t n = 1; n <= (std::int64_t{1} << (n_trunc + 1)); ++n)
            if (is_allowed(n, spec))
                brute.push_back(n);
        CHECK(allowed_set(spec) == brute);
        // centers always present
        for (std::int64_t k = 0; k <= n_trunc; ++k) {
            const auto set = allowed_set(spec);
            CHECK(std::find(set.begin(), set.end(), std::int64_t{1} << k) != set.end());
        }
    }
}

TEST_CASE("lambda sequence frozen families") {
    auto lam1 = lambda_sequence(RadiusSequence::affine_log(1.0, -11.0, 40), 40);
    CHECK(lam1 == std::vector<std::int64_t>{0, 11, 22, 33});

    auto lam2 = lambda_sequence(sentinel_then_linear(22, 70), 70);
    CHECK(lam2 == std::vector<std::int64_t>{0, 22, 44, 66});

    std::vector<double> flat(41, -13.0);
    auto lam3 = lambda_sequence(RadiusSequence::from_table(flat), 40);
    CHECK(lam3.size() <= 2); // recursion stalls for bounded radii
    CHECK(lam3.front() == 0);
}

TEST_CASE("lambda sequence two-sided inequality oracle") {
    Rng rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        const double slope = rng.uniform(0.3, 1.0);
        const double offset = rng.uniform(-16.0, -11.0);
        auto radii = RadiusSequence::affine_log(slope, offset, 200);
        auto lam = lambda_sequence(radii, 200);
        REQUIRE(lam.front() == 0);
        for (std::size_t s = 0; s + 1 < lam.size(); ++s) {
            CHECK(lam[s + 1] > lam[s]);
            CHECK(radii.log2_at(lam[s + 1]) >= static_cast<double>(lam[s]));
            CHECK(radii.log2_at(lam[s + 1] - 1) < static_cast<double>(lam[s]));
        }
    }
}

TEST_CASE("condition value frozen cases") {
    auto ones40 = WeightSequence::constant(1.0, 4096);
    CHECK(condition_value(RadiusSequence::affine_log(1.0, -11.0, 4096), ones40, 40) ==
          doctest::Approx(12.0).epsilon(1e-14));

    auto r0 = RadiusSequence::from_table({-2.0});
    CHECK(condition_value(r0, WeightSequence::from_table({1.0}), 0) == doctest::Approx(1.0));

    auto half = RadiusSequence::affine_log(0.5, -12.0, 4096);
    CHECK(condition_value(half, ones40, 40) == doctest::Approx(33.0).epsilon(1e-14));

    CHECK(condition_diverging(half, ones40, 512));
    CHECK(!condition_diverging(RadiusSequence::affine_log(1.0, -11.0, 4096), ones40, 512));
}

TEST_CASE("condition value against brute force, monotone in N") {
    Rng rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        const double slope = rng.uniform(0.2, 1.0);
        const double offset = rng.uniform(-15.0, -11.0);
        auto radii = RadiusSequence::affine_log(slope, offset, 128);
        std::vector<double> wt;
        for (int k = 0; k <= 128; ++k)
            wt.push_back(std::exp2(rng.uniform(-1.0, 1.0)));
        auto weights = WeightSequence::from_table(wt);
        double prev = 0.0;
        for (std::int64_t n : {5, 17, 60, 128}) {
            const double b = condition_value(radii, weights, n);
            CHECK(b == doctest::Approx(condition_value_brute(radii, weights, n)).epsilon(1e-11));
            CHECK(b >= prev - 1e-12);
            prev = b;
        }
    }
}

TEST_CASE("find_blocks satisfies both inequalities") {
    auto radii = RadiusSequence::affine_log(0.5, -12.0, 8192);
    auto ones = WeightSequence::constant(1.0, 8192);
    auto plan = find_blocks(radii, ones, 3);
    REQUIRE(plan.blocks.size() == 4);
    std::int64_t prev_end = -1;
    for (std::size_t s = 0; s < plan.blocks.size(); ++s) {
        const auto [m, n] = plan.blocks[s];
        CHECK(m >= 1);
        CHECK(m < n);
        CHECK(2 * m > prev_end);
        CHECK(2.0 * static_cast<double>(m) > std::log2(10.0) + radii.log2_at(2 * n));
        double wsum = 0.0;
        for (std::int64_t k = 2 * m; k <= 2 * n; ++k)
            wsum += ones.inv_sq(k);
        CHECK(wsum > std::pow(16.0, static_cast<double>(s)));
        prev_end = 2 * n;
    }

    auto single = find_blocks(radii, ones, 0);
    REQUIRE(single.blocks.size() == 1);
    CHECK(2 * single.blocks[0].n - 2 * single.blocks[0].m + 1 >= 2);

    auto huge = WeightSequence::constant(1e8, 8192);
    CHECK_THROWS_AS(find_blocks(radii, huge, 0), Error);
}

TEST_CASE("counterexample construction") {
    BlockPlan plan;
    plan.blocks = {{2, 4}};
    auto ones = WeightSequence::constant(1.0, 64);
    auto a = build_counterexample(plan, ones);
    for (std::int64_t k = 4; k <= 8; ++k)
        CHECK(std::abs(a.a[static_cast<std::size_t>(k)] - cplx{0.2, 0.0}) < 1e-15);
    CHECK(a.l1_over(4, 8) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(a.weighted_energy(ones) == doctest::Approx(0.2).epsilon(1e-14));

    BlockPlan two;
    two.blocks = {{2, 4}, {6, 9}};
    auto b = build_counterexample(two, ones);
    CHECK(b.l1_over(4, 8) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(b.l1_over(12, 18) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(b.weighted_energy(ones) == doctest::Approx(1.0 / 5.0 + 4.0 / 7.0).epsilon(1e-13));

    auto summary = counterexample_summary(two, ones);
    REQUIRE(summary.blocks.size() == 2);
    CHECK(summary.blocks[0].l1_sum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(summary.blocks[1].l1_sum == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(summary.weighted_energy == doctest::Approx(b.weighted_energy(ones)).epsilon(1e-13));
}

TEST_CASE("counterexample blocks from divergent family stay under the energy cap") {
    auto radii = RadiusSequence::affine_log(0.5, -12.0, 1 << 16);
    auto ones = WeightSequence::constant(1.0, 1 << 16);
    auto plan = find_blocks(radii, ones, 3);
    auto summary = counterexample_summary(plan, ones);
    CHECK(summary.weighted_energy <= 4.0 / 3.0 + 1e-9);
    for (std::size_t s = 0; s < summary.blocks.size(); ++s)
        CHECK(summary.blocks[s].l1_sum == doctest::Approx(std::exp2(static_cast<double>(s))).epsilon(1e-12));

    // random positive weights keep the guarantees as well
    Rng rng(43);
    std::vector<double> wt;
    for (int k = 0; k <= (1 << 16); ++k)
        wt.push_back(std::exp2(rng.uniform(-0.5, 0.5)));
    auto weights = WeightSequence::from_table(wt);
    auto plan2 = find_blocks(radii, weights, 2);
    auto s2 = counterexample_summary(plan2, weights);
    CHECK(s2.weighted_energy <= 4.0 / 3.0 + 1e-9);
    for (std::size_t s = 0; s < s2.blocks.size(); ++s)
        CHECK(s2.blocks[s].l1_sum == doctest::Approx(std::exp2(static_cast<double>(s))).epsilon(1e-12));
}

TEST_CASE("block functional") {
    auto spec = SpectrumSpec::make(RadiusSequence::affine_log(1.0, -11.0, 64), 12);
    CoefficientSequence single;
    single.a = {cplx{1.0, 0.0}};
    auto [sq1, sup1] = block_functional(single, spec);
    CHECK(sq1 == doctest::Approx(1.0));
    CHECK(sup1 == doctest::Approx(1.0));

    CoefficientSequence blocky;
    blocky.a.assign(13, cplx{0.0, 0.0});
    blocky.a[11] = 1.0;
    blocky.a[12] = 1.0; // lambda blocks are [0,10], [11,12]
    auto [sq2, sup2] = block_functional(blocky, spec);
    CHECK(sq2 == doctest::Approx(4.0));
    CHECK(sup2 == doctest::Approx(2.0));

    Rng rng(53);
    CoefficientSequence random_a;
    for (int k = 0; k <= 12; ++k)
        random_a.a.push_back(rng.complex_normal());
    const auto boundaries = spec.block_boundaries();
    double sq = 0.0, sup = 0.0;
    for (std::size_t s = 0; s + 1 < boundaries.size(); ++s) {
        double acc = 0.0;
        for (std::int64_t k = boundaries[s]; k < boundaries[s + 1]; ++k)
            acc += std::abs(random_a.a[static_cast<std::size_t>(k)]);
        sq += acc * acc;
        sup = std::max(sup, acc);
    }
    auto [sq3, sup3] = block_functional(random_a, spec);
    CHECK(sq3 == doctest::Approx(sq).epsilon(1e-12));
    CHECK(sup3 == doctest::Approx(sup).epsilon(1e-12));
}
