#include "sparsespec/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "sparsespec/extension.hpp"
#include "sparsespec/multiplier.hpp"
#include "sparsespec/rng.hpp"

namespace sparsespec {

namespace {

struct CheckList {
    json items = json::array();
    json overrides;
    bool all_pass = true;

    explicit CheckList(const json& config) : overrides(config.value("tol_overrides", json::object())) {}

    double tol_of(const std::string& name, double fallback) const {
        if (overrides.contains(name))
            return overrides.at(name).get<double>();
        return fallback;
    }

    // pass iff value <= tol
    void bound(const std::string& name, double value, double default_tol) {
        const double tol = tol_of(name, default_tol);
        const bool ok = value <= tol;
        items.push_back({{"name", name}, {"value", value}, {"tol", tol}, {"pass", ok}});
        all_pass = all_pass && ok;
    }

    void flag(const std::string& name, double value, bool ok) {
        items.push_back({{"name", name}, {"value", value}, {"tol", nullptr}, {"pass", ok}});
        all_pass = all_pass && ok;
    }
};

json report_skeleton(const std::string& command, const json& config) {
    return {{"artifact", "sparsespec"},
            {"version", artifact_version},
            {"command", command},
            {"rng", Rng::name()},
            {"config", config}};
}

void finish(json& report, CheckList&& checks,
            std::chrono::steady_clock::time_point started) {
    report["checks"] = std::move(checks.items);
    report["pass"] = checks.all_pass;
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();
    report["timings"] = {{"total_ms", elapsed}};
}

RadiusSequence load_radii(const json& config, std::int64_t default_k_max) {
    if (!config.contains("radii"))
        throw Error(errc::bad_input, "config missing field \"radii\"");
    return radii_from_json(config.at("radii"), default_k_max);
}

WeightSequence load_weights(const json& config, std::int64_t default_k_max) {
    if (!config.contains("weights"))
        throw Error(errc::bad_input, "config missing field \"weights\"");
    return weights_from_json(config.at("weights"), default_k_max);
}

CoefficientSequence load_coeffs(json& config) {
    if (config.contains("coeffs_file")) {
        const auto path = config.at("coeffs_file").get<std::string>();
        auto loaded = load_json_file(path);
        config["coeffs"] = loaded; // echo what was actually used
        return coefficients_from_json(loaded);
    }
    if (config.contains("coeffs"))
        return coefficients_from_json(config.at("coeffs"));
    throw Error(errc::bad_input, "config missing field \"coeffs\" (or \"coeffs_file\")");
}

void merge_tol_overrides(json& config) {
    if (!config.contains("tol_overrides_file"))
        return;
    auto loaded = load_json_file(config.at("tol_overrides_file").get<std::string>());
    json merged = config.value("tol_overrides", json::object());
    for (const auto& [key, value] : loaded.items())
        merged[key] = value;
    config["tol_overrides"] = merged;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n == 0)
        return 0.0;
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string csv_escape_free(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

// ------------------------------------------------------------------ commands

json cmd_check_condition(json config) {
    const auto started = std::chrono::steady_clock::now();
    const std::int64_t k_max = config.value("k_max", std::int64_t{4096});
    config["k_max"] = k_max;
    const auto radii = load_radii(config, k_max);
    const auto weights = load_weights(config, k_max);
    const std::int64_t cap = std::min(radii.k_max(), weights.k_max());
    const std::int64_t probe = config.value("N", std::min<std::int64_t>(cap, 2048));
    if (probe > cap)
        throw Error(errc::bad_input, "probe N exceeds the defined sequence range");
    config["N"] = probe;

    json ladder = json::array();
    for (std::int64_t n = 8; n <= probe; n *= 2)
        ladder.push_back({n, condition_value(radii, weights, n)});
    if (ladder.empty() || ladder.back().at(0).get<std::int64_t>() != probe)
        ladder.push_back({probe, condition_value(radii, weights, probe)});

    const bool diverging = condition_diverging(radii, weights, probe);
    auto lambda = lambda_sequence(radii, cap);
    if (lambda.size() > 64)
        lambda.resize(64);

    auto report = report_skeleton("check-condition", config);
    report["results"] = {{"B", condition_value(radii, weights, probe)},
                         {"ladder", ladder},
                         {"flag", diverging ? "diverging" : "bounded"},
                         {"lambda", lambda}};
    CheckList checks(config);
    checks.flag("condition_value_finite", report["results"]["B"].get<double>(),
                std::isfinite(report["results"]["B"].get<double>()));
    finish(report, std::move(checks), started);
    return report;
}

json cmd_synthesize(json config) {
    const auto started = std::chrono::steady_clock::now();
    auto a = load_coeffs(config);
    const std::int64_t n_trunc = config.value("N", a.top_index());
    config["N"] = n_trunc;
    if (a.top_index() > n_trunc)
        throw Error(errc::bad_input, "pinned coefficient index " + std::to_string(a.top_index()) +
                                         " exceeds truncation N = " + std::to_string(n_trunc));
    const std::int64_t k_max = config.value("k_max", std::max<std::int64_t>(64, n_trunc + 2));
    config["k_max"] = k_max;
    const auto radii = load_radii(config, k_max);
    auto weights = config.contains("weights") ? load_weights(config, k_max)
                                              : WeightSequence::constant(1.0, k_max);

    auto spec = SpectrumSpec::make(radii, n_trunc);
    auto problem = ExtensionProblem::make(a, spec, config.value("G", std::int64_t{0}));
    config["G"] = problem.grid;
    if (config.contains("p_schedule")) {
        problem.p_schedule.clear();
        for (const auto& p : config.at("p_schedule"))
            problem.p_schedule.push_back(p.get<int>());
    }
    problem.max_iters = config.value("max_iters", problem.max_iters);
    problem.tol = config.value("tol", problem.tol);

    const auto sol = solve(problem);

    const double lower = sol.lower.lower_bound;
    const double gap = (lower <= 1e-12 && sol.upper <= 1e-12) ? 1.0
                                                              : sol.upper / std::max(lower, 1e-12);
    const auto [block_sumsq, block_sup] = block_functional(a, spec);
    double a_max = 0.0;
    double weighted_energy = a.weighted_energy(weights);
    for (const auto& c : a.a)
        a_max = std::max(a_max, std::abs(c));

    json history = json::array();
    for (const auto& h : sol.history)
        history.push_back({h.p, h.lp, h.iters});

    auto report = report_skeleton("synthesize", config);
    report["results"] = {
        {"upper", sol.upper},
        {"lower", to_json(sol.lower)},
        {"gap", gap},
        {"history", history},
        {"allowed_count", allowed_set(spec).size()},
        {"condition_B", condition_value(radii, weights, std::min(n_trunc, weights.k_max()))},
        {"weighted_energy", weighted_energy},
        {"block_functional", {{"sum_of_squares", block_sumsq}, {"sup_block", block_sup}}},
        {"necessary_ratio", sol.upper > 0.0 ? block_sup / sol.upper : 0.0},
        {"conjecture_ratio", sol.upper > 0.0 ? block_sumsq / (sol.upper * sol.upper) : 0.0}};

    CheckList checks(config);
    checks.bound("upper_vs_pinned_max", a_max - sol.upper, 1e-9);
    checks.bound("lower_le_upper", lower - sol.upper, 1e-6);

    if (config.contains("out")) {
        json solution = {{"coeffs", to_json(sol.coeffs)},
                         {"upper", sol.upper},
                         {"lower", to_json(sol.lower)},
                         {"history", history}};
        write_text_file(config.at("out").get<std::string>(), solution.dump(2) + "\n");
    }
    if (config.contains("samples")) {
        const auto f = synthesize(sol.coeffs, problem.grid);
        std::ostringstream csv;
        csv << "x,re,im,abs\n";
        csv.precision(17);
        for (std::int64_t j = 0; j < problem.grid; ++j)
            csv << f.x(j) << ',' << f[j].real() << ',' << f[j].imag() << ',' << std::abs(f[j])
                << '\n';
        write_text_file(config.at("samples").get<std::string>(), csv.str());
    }

    finish(report, std::move(checks), started);
    return report;
}

json cmd_certify(json config) {
    const auto started = std::chrono::steady_clock::now();
    auto a = load_coeffs(config);
    if (!config.contains("window_m") || !config.contains("window_n"))
        throw Error(errc::bad_input, "config missing field \"window_m\"/\"window_n\"");
    const std::int64_t m = config.at("window_m").get<std::int64_t>();
    const std::int64_t n = config.at("window_n").get<std::int64_t>();
    const std::int64_t n_trunc = config.value("N", std::max(a.top_index(), 2 * n));
    config["N"] = n_trunc;
    const std::int64_t k_max = config.value("k_max", std::max<std::int64_t>(64, n_trunc + 2));
    config["k_max"] = k_max;
    const auto radii = load_radii(config, k_max);
    auto spec = SpectrumSpec::make(radii, n_trunc);

    const auto cert = certificate_bound(a, spec, m, n);

    auto report = report_skeleton("certify", config);
    report["results"] = {{"certificate", to_json(cert)}};
    CheckList checks(config);
    checks.flag("lower_bound_nonnegative", cert.lower_bound, cert.lower_bound >= 0.0);
    if (config.contains("out"))
        write_text_file(config.at("out").get<std::string>(), to_json(cert).dump(2) + "\n");
    finish(report, std::move(checks), started);
    return report;
}

json cmd_counterexample(json config) {
    const auto started = std::chrono::steady_clock::now();
    const int s_max = config.value("s_max", 3);
    if (s_max < 0 || s_max > 7)
        throw Error(errc::bad_input, "s_max must lie in [0, 7] (block ends grow like 2*16^s)");
    config["s_max"] = s_max;
    const std::int64_t k_max = config.value("k_max", std::int64_t{1} << 26);
    config["k_max"] = k_max;
    const auto radii = load_radii(config, k_max);
    const auto weights = load_weights(config, k_max);

    const auto plan = find_blocks(radii, weights, s_max);
    const auto summary = counterexample_summary(plan, weights);

    json blocks = json::array();
    double worst_l1_dev = 0.0;
    double worst_lower_dev = 0.0;
    for (std::size_t s = 0; s < summary.blocks.size(); ++s) {
        const auto& b = summary.blocks[s];
        const double two_s = std::exp2(static_cast<double>(s));
        worst_l1_dev = std::max(worst_l1_dev, std::abs(b.l1_sum - two_s));
        worst_lower_dev = std::max(worst_lower_dev, std::abs(b.l1_sum / 4.0 - two_s / 4.0));
        blocks.push_back({{"s", s},
                          {"M", b.m},
                          {"N", b.n},
                          {"weight_sum", b.weight_sum},
                          {"block_l1", b.l1_sum},
                          {"lower_bound", b.l1_sum / 4.0}});
    }

    auto report = report_skeleton("counterexample", config);
    report["results"] = {{"blocks", blocks}, {"weighted_energy", summary.weighted_energy}};
    CheckList checks(config);
    checks.bound("energy_cap", summary.weighted_energy - 4.0 / 3.0, 1e-9);
    checks.bound("block_l1_deviation", worst_l1_dev, 1e-9);
    checks.bound("lower_bound_deviation", worst_lower_dev, 1e-9);
    finish(report, std::move(checks), started);
    if (config.contains("out"))
        write_text_file(config.at("out").get<std::string>(), report.dump(2) + "\n");
    return report;
}

json cmd_verify_multiplier(json config) {
    const auto started = std::chrono::steady_clock::now();
    const std::int64_t n_trunc = config.value("N", std::int64_t{12});
    config["N"] = n_trunc;
    const std::int64_t grid = config.value("G", std::int64_t{65536});
    config["G"] = grid;
    const auto seed = config.value("seed", std::uint64_t{1});
    config["seed"] = seed;
    const int family_count = config.value("family_count", 200);
    config["family_count"] = family_count;
    const std::int64_t k_max = config.value("k_max", std::max<std::int64_t>(64, 4 * n_trunc));
    config["k_max"] = k_max;

    const auto radii = load_radii(config, k_max);
    const auto weights = load_weights(config, k_max);
    auto spec = SpectrumSpec::make(radii, n_trunc);
    const auto m = build_m(spec, weights, n_trunc);

    CheckList checks(config);

    // bump contracts
    const double psi0_dev = std::abs(psi_eval(0.0) - 1.0);
    const double psi_half_dev = std::abs(psi_eval(0.5) - std::exp(-1.0 / 3.0));
    const int partition_samples = config.value("partition_samples", 10000);
    config["partition_samples"] = partition_samples;
    const double partition_dev = partition_check(-20.0, 20.0, partition_samples);
    double plateau_dev = 0.0;
    for (int i = 0; i <= 32; ++i) {
        const double x = 0.5 - 1.0 / 300.0 + (2.0 / 300.0) * i / 32.0;
        plateau_dev = std::max(plateau_dev, std::abs(phi_eval(x) - 1.0));
    }
    const double support_dev = std::max(std::abs(phi_eval(0.25)), std::abs(phi_eval(0.995)));
    checks.bound("psi_at_0", psi0_dev, 0.0);
    checks.bound("psi_at_half", psi_half_dev, 1e-12);
    checks.bound("partition_deviation", partition_dev, 1e-10);
    checks.bound("phi_plateau", plateau_dev, 0.0);
    checks.bound("phi_support", support_dev, 0.0);

    // multiplier table
    double center_dev = 0.0;
    bool support_allowed = true;
    for (std::int64_t k = 0; k <= n_trunc; ++k)
        center_dev = std::max(center_dev,
                              std::abs(m.at(std::int64_t{1} << k) * weights.at(k) - 1.0));
    for (const auto& [n, value] : m.table)
        support_allowed = support_allowed && is_allowed(n, spec) && value >= 0.0;
    checks.bound("m_center_identity", center_dev, 1e-15);
    checks.flag("m_support_allowed", static_cast<double>(m.table.size()), support_allowed);

    // reconstruction of a seeded random polynomial from its projections
    {
        auto rng = Rng::stream(seed, 11);
        const std::int64_t g_rec = 4096;
        SpectralVector v;
        for (int i = 0; i < 24; ++i)
            v.set(rng.uniform_int(-g_rec / 4, g_rec / 4), rng.complex_normal());
        const auto f = synthesize(v, g_rec);
        auto acc = SampledFunction::zeros(g_rec);
        for (std::int64_t k = -14; k <= 14; ++k) {
            const auto pk = apply_Pk(f, k, g_rec);
            for (std::int64_t j = 0; j < g_rec; ++j)
                acc[j] += pk[j];
        }
        double rec_dev = 0.0;
        for (std::int64_t j = 0; j < g_rec; ++j)
            rec_dev = std::max(rec_dev, std::abs(acc[j] - f[j]));
        checks.bound("reconstruction_residual", rec_dev, 1e-10);
    }

    // kernels: stored simplification vs direct definition
    double kernel_dev = 0.0;
    const auto fam = kernel_family(m, grid);
    for (std::size_t i = 0; i < fam.kernels.size(); ++i) {
        const auto direct = kernel_unsimplified(m, fam.k_index[i], grid);
        for (std::int64_t j = 0; j < grid; ++j)
            kernel_dev = std::max(kernel_dev, std::abs(fam.kernels[i][j] - direct[j]));
    }
    checks.bound("kernel_consistency", kernel_dev, 1e-9);

    // fitted constants
    std::vector<double> r_values{8.0, 32.0, 128.0};
    if (config.contains("r_values")) {
        r_values.clear();
        for (const auto& r : config.at("r_values"))
            r_values.push_back(r.get<double>());
    }
    config["r_values"] = r_values;
    const auto fits = r_bound_fit(r_values, grid);
    json fit_rows = json::array();
    for (const auto& fit : fits)
        fit_rows.push_back({{"r", fit.r}, {"C1", fit.c1}, {"C2", fit.c2}});

    const auto horm = hormander_check(m, grid);
    checks.flag("D2_finite", horm.d2, std::isfinite(horm.d2));
    checks.flag("D3_finite", horm.d3, std::isfinite(horm.d3));
    checks.flag("D4_finite", horm.d4, std::isfinite(horm.d4));

    const auto family = standard_test_family(seed, family_count);
    const auto interp = interpolation_harness(m, family, grid);
    checks.flag("interp_ratio_finite", interp.sup_interp, std::isfinite(interp.sup_interp));
    checks.flag("weak_ratio_finite", interp.sup_weak, std::isfinite(interp.sup_weak));

    const int lacunary_trials = config.value("lacunary_trials", 100);
    config["lacunary_trials"] = lacunary_trials;
    std::int64_t lacunary_default = 12;
    while (grid < 4 * (std::int64_t{1} << lacunary_default))
        --lacunary_default;
    const std::int64_t lacunary_n = config.value("lacunary_n", lacunary_default);
    config["lacunary_n"] = lacunary_n;
    const auto [lac_min, lac_max] = lacunary_ratio(lacunary_trials, lacunary_n, seed, grid);
    checks.bound("lacunary_max_ratio", lac_max - 1.0, 1e-9);
    checks.flag("lacunary_min_ratio", lac_min, lac_min >= config.value("lacunary_min", 0.2));

    auto report = report_skeleton("verify-multiplier", config);
    report["results"] = {
        {"condition_B", condition_value(radii, weights, std::min(n_trunc, weights.k_max()))},
        {"psi", {{"at_0", psi_eval(0.0)}, {"at_half", psi_eval(0.5)}}},
        {"partition_deviation", partition_dev},
        {"kernel_consistency", kernel_dev},
        {"r_bound", fit_rows},
        {"hormander",
         {{"D2", horm.d2},
          {"D3", horm.d3},
          {"D4", horm.d4},
          {"D3_witness_y", horm.d3_witness_y},
          {"D4_witness_y", horm.d4_witness_y}}},
        {"interpolation",
         {{"sup_interp", interp.sup_interp},
          {"sup_weak", interp.sup_weak},
          {"interp_witness", interp.interp_witness},
          {"weak_witness", interp.weak_witness},
          {"degenerate", interp.degenerate},
          {"family_size", family.size()}}},
        {"lacunary", {{"min_ratio", lac_min}, {"max_ratio", lac_max}}}};

    if (config.contains("csv")) {
        std::ostringstream csv;
        csv << "y,k_norm\n";
        csv.precision(17);
        const std::int64_t zero_j = grid / 2;
        for (std::int64_t off = 1; off < grid / 2; off = std::max(off + 1, off * 9 / 8)) {
            const double y = static_cast<double>(off) / static_cast<double>(grid);
            double norm_sq = 0.0;
            for (const auto& ker : fam.kernels)
                norm_sq += std::norm(ker[(zero_j + off) % grid]);
            csv << csv_escape_free(y) << ',' << csv_escape_free(std::sqrt(norm_sq)) << '\n';
        }
        write_text_file(config.at("csv").get<std::string>(), csv.str());
    }

    finish(report, std::move(checks), started);
    if (config.contains("out"))
        write_text_file(config.at("out").get<std::string>(), report.dump(2) + "\n");
    return report;
}

json cmd_scaling_study(json config) {
    const auto started = std::chrono::steady_clock::now();
    std::vector<std::int64_t> n_list{8, 10, 12};
    if (config.contains("n_list")) {
        n_list.clear();
        for (const auto& n : config.at("n_list"))
            n_list.push_back(n.get<std::int64_t>());
    }
    config["n_list"] = n_list;
    const int trials = config.value("trials", 20);
    config["trials"] = trials;
    const auto seed = config.value("seed", std::uint64_t{1});
    config["seed"] = seed;
    const int jobs = config.value("jobs", 1);
    config["jobs"] = jobs;
    std::int64_t need_k = 64;
    for (const auto n : n_list)
        need_k = std::max(need_k, n + 2);
    const std::int64_t k_max = config.value("k_max", need_k);
    config["k_max"] = k_max;

    const auto radii = load_radii(config, k_max);
    const auto weights = load_weights(config, k_max);

    const auto rows = scaling_study(weights, radii, n_list, trials, seed, jobs);

    json row_json = json::array();
    for (const auto& row : rows)
        row_json.push_back({row.n_trunc, row.trial, row.ratio});
    json medians = json::array();
    for (const auto n : n_list) {
        std::vector<double> ratios;
        for (const auto& row : rows)
            if (row.n_trunc == n)
                ratios.push_back(row.ratio);
        medians.push_back({n, median_of(ratios)});
    }

    auto report = report_skeleton("scaling-study", config);
    report["results"] = {{"rows", row_json}, {"medians", medians}};
    CheckList checks(config);
    bool finite = true;
    for (const auto& row : rows)
        finite = finite && std::isfinite(row.ratio) && row.ratio > 0.0;
    checks.flag("ratios_finite", static_cast<double>(rows.size()), finite);

    if (config.contains("csv")) {
        std::ostringstream csv;
        csv << "N,trial,ratio\n";
        csv.precision(17);
        for (const auto& row : rows)
            csv << row.n_trunc << ',' << row.trial << ',' << row.ratio << '\n';
        write_text_file(config.at("csv").get<std::string>(), csv.str());
    }

    finish(report, std::move(checks), started);
    if (config.contains("out"))
        write_text_file(config.at("out").get<std::string>(), report.dump(2) + "\n");
    return report;
}

} // namespace

json run_command(const std::string& command, json config) {
    if (!config.is_object())
        throw Error(errc::bad_input, "config must be a JSON object");
    merge_tol_overrides(config);
    if (command == "check-condition")
        return cmd_check_condition(std::move(config));
    if (command == "synthesize")
        return cmd_synthesize(std::move(config));
    if (command == "certify")
        return cmd_certify(std::move(config));
    if (command == "counterexample")
        return cmd_counterexample(std::move(config));
    if (command == "verify-multiplier")
        return cmd_verify_multiplier(std::move(config));
    if (command == "scaling-study")
        return cmd_scaling_study(std::move(config));
    throw Error(errc::bad_input, "unknown command \"" + command + "\"");
}

} // namespace sparsespec
