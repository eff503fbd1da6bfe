// Command-line front end: parses flags, assembles the JSON config, and calls
// the shared library through the C API in sparsespec.h.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sparsespec.h"

namespace {

using nlohmann::json;

json parse_json_or_die(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::cerr << "error: malformed JSON for " << what << ": " << e.what() << "\n";
        std::exit(SS_ERROR_INPUT);
    }
}

json load_file_or_die(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open \"" << path << "\"\n";
        std::exit(SS_ERROR_INPUT);
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_json_or_die(text, path);
}

struct CommonOpts {
    std::string radii_file, radii_gen;
    std::string weights_file, weights_gen;
    std::int64_t n_trunc = -1;
    std::int64_t grid = 0;
    std::int64_t k_max = -1;
    std::uint64_t seed = 1;
    int jobs = 1;
    std::string out, csv, tol_overrides;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_weights) {
    cmd->add_option("--radii-file", o.radii_file, "JSON file with {\"log2_r\": [...]}");
    cmd->add_option("--radii-gen", o.radii_gen,
                    "inline generator, e.g. {\"kind\":\"affine-log\",\"slope\":0.5,\"offset\":-12}");
    if (needs_weights) {
        cmd->add_option("--weights-file", o.weights_file, "JSON file with {\"w\": [...]}");
        cmd->add_option("--weights-gen", o.weights_gen,
                        "inline generator, e.g. {\"kind\":\"const\",\"value\":1.0}");
    }
    cmd->add_option("-N,--truncation", o.n_trunc, "truncation index N");
    cmd->add_option("-G,--grid", o.grid, "grid size (power of two)");
    cmd->add_option("--k-max", o.k_max, "sequence length for generators");
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--jobs", o.jobs, "trial-level parallelism");
    cmd->add_option("--out", o.out, "output JSON path");
    cmd->add_option("--csv", o.csv, "output CSV path");
    cmd->add_option("--tol-overrides", o.tol_overrides, "JSON file of check-name -> tolerance");
}

json config_from(const CommonOpts& o) {
    json config = json::object();
    if (!o.radii_file.empty())
        config["radii"] = load_file_or_die(o.radii_file);
    else if (!o.radii_gen.empty())
        config["radii"] = parse_json_or_die(o.radii_gen, "--radii-gen");
    if (!o.weights_file.empty())
        config["weights"] = load_file_or_die(o.weights_file);
    else if (!o.weights_gen.empty())
        config["weights"] = parse_json_or_die(o.weights_gen, "--weights-gen");
    if (o.n_trunc >= 0)
        config["N"] = o.n_trunc;
    if (o.grid > 0)
        config["G"] = o.grid;
    if (o.k_max >= 0)
        config["k_max"] = o.k_max;
    config["seed"] = o.seed;
    if (o.jobs != 1)
        config["jobs"] = o.jobs;
    if (!o.out.empty())
        config["out"] = o.out;
    if (!o.csv.empty())
        config["csv"] = o.csv;
    if (!o.tol_overrides.empty())
        config["tol_overrides_file"] = o.tol_overrides;
    return config;
}

int run(const std::string& command, const json& config) {
    char* report = nullptr;
    char* error = nullptr;
    const ss_status status =
        ss_run_command(command.c_str(), config.dump().c_str(), &report, &error);
    if (status != SS_OK) {
        std::cerr << "error: " << (error ? error : "unknown failure") << "\n";
        ss_string_free(report);
        ss_string_free(error);
        return static_cast<int>(status);
    }
    if (report)
        std::cout << report;
    ss_string_free(report);
    ss_string_free(error);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparsespec: sparse lacunary spectrum toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ss_version()));

    CommonOpts check_o, synth_o, cert_o, counter_o, verify_o, scaling_o;
    std::string synth_coeffs, synth_samples, cert_coeffs;
    std::int64_t cert_m = -1, cert_n = -1;
    int counter_smax = 3;
    int verify_family = 200, verify_lacunary_trials = 100;
    std::int64_t verify_lacunary_n = -1;
    std::vector<double> verify_r_values;
    std::vector<std::int64_t> scaling_nlist;
    int scaling_trials = 20;
    int synth_max_iters = -1;
    double synth_tol = -1.0;

    auto* check = app.add_subcommand("check-condition",
                                     "evaluate the weight/radius condition value B and its growth");
    add_common(check, check_o, true);

    auto* synth = app.add_subcommand("synthesize",
                                     "minimal sup-norm extension with pinned lacunary coefficients");
    add_common(synth, synth_o, true);
    synth->add_option("--coeffs", synth_coeffs, "JSON file with {\"a\": [[re,im],...]}")->required();
    synth->add_option("--samples", synth_samples, "CSV dump of the synthesized samples");
    synth->add_option("--max-iters", synth_max_iters, "iterations per stage");
    synth->add_option("--tol", synth_tol, "relative stage convergence tolerance");

    auto* cert = app.add_subcommand("certify", "Riesz-product lower-bound certificate");
    add_common(cert, cert_o, false);
    cert->add_option("--coeffs", cert_coeffs, "JSON file with {\"a\": [[re,im],...]}")->required();
    cert->add_option("--window-m", cert_m, "certificate window start M")->required();
    cert->add_option("--window-n", cert_n, "certificate window end N")->required();

    auto* counter = app.add_subcommand("counterexample",
                                       "build the divergent-condition counterexample blocks");
    add_common(counter, counter_o, true);
    counter->add_option("--s-max", counter_smax, "last block index");

    auto* verify = app.add_subcommand("verify-multiplier",
                                      "verify bump, multiplier, kernel, and inequality bounds");
    add_common(verify, verify_o, true);
    verify->add_option("--report", verify_o.out, "report JSON path (alias of --out)");
    verify->add_option("--family-count", verify_family, "test measure family size");
    verify->add_option("--r-values", verify_r_values, "radii for the R_s bound fits");
    verify->add_option("--lacunary-trials", verify_lacunary_trials, "lacunary ratio trials");
    verify->add_option("--lacunary-n", verify_lacunary_n, "lacunary series truncation");

    auto* scaling = app.add_subcommand("scaling-study",
                                       "measured ratio upper/||a w||_2 across truncations");
    add_common(scaling, scaling_o, true);
    scaling->add_option("--n-list", scaling_nlist, "truncations to probe");
    scaling->add_option("--trials", scaling_trials, "trials per truncation");

    CLI11_PARSE(app, argc, argv);

    if (check->parsed())
        return run("check-condition", config_from(check_o));
    if (synth->parsed()) {
        auto config = config_from(synth_o);
        config["coeffs"] = load_file_or_die(synth_coeffs);
        if (!synth_samples.empty())
            config["samples"] = synth_samples;
        if (synth_max_iters > 0)
            config["max_iters"] = synth_max_iters;
        if (synth_tol > 0.0)
            config["tol"] = synth_tol;
        return run("synthesize", config);
    }
    if (cert->parsed()) {
        auto config = config_from(cert_o);
        config["coeffs"] = load_file_or_die(cert_coeffs);
        config["window_m"] = cert_m;
        config["window_n"] = cert_n;
        return run("certify", config);
    }
    if (counter->parsed()) {
        auto config = config_from(counter_o);
        config["s_max"] = counter_smax;
        return run("counterexample", config);
    }
    if (verify->parsed()) {
        auto config = config_from(verify_o);
        config["family_count"] = verify_family;
        config["lacunary_trials"] = verify_lacunary_trials;
        if (verify_lacunary_n >= 0)
            config["lacunary_n"] = verify_lacunary_n;
        if (!verify_r_values.empty())
            config["r_values"] = verify_r_values;
        return run("verify-multiplier", config);
    }
    if (scaling->parsed()) {
        auto config = config_from(scaling_o);
        if (!scaling_nlist.empty())
            config["n_list"] = scaling_nlist;
        config["trials"] = scaling_trials;
        return run("scaling-study", config);
    }
    return 0;
}
