#include "sparsespec/json_io.hpp"

#include <fstream>

namespace sparsespec {

namespace {

void require_field(const json& j, const char* field, const char* what) {
    if (!j.contains(field))
        throw Error(errc::bad_input, std::string(what) + " missing field \"" + field + "\"");
}

} // namespace

json to_json(const SpectralVector& v) {
    json entries = json::array();
    for (const auto& [n, c] : v)
        entries.push_back({{"n", n}, {"re", c.real()}, {"im", c.imag()}});
    return {{"entries", entries}};
}

SpectralVector spectral_from_json(const json& j) {
    require_field(j, "entries", "spectral vector");
    SpectralVector v;
    for (const auto& e : j.at("entries")) {
        require_field(e, "n", "spectral entry");
        v.set(e.at("n").get<std::int64_t>(),
              cplx{e.value("re", 0.0), e.value("im", 0.0)});
    }
    return v;
}

json to_json(const SampledFunction& f) {
    json samples = json::array();
    for (const auto& z : f.samples())
        samples.push_back({z.real(), z.imag()});
    return {{"G", f.grid_size()}, {"samples", samples}};
}

SampledFunction sampled_from_json(const json& j) {
    require_field(j, "G", "sampled function");
    require_field(j, "samples", "sampled function");
    std::vector<cplx> samples;
    for (const auto& s : j.at("samples"))
        samples.emplace_back(s.at(0).get<double>(), s.at(1).get<double>());
    if (static_cast<std::int64_t>(samples.size()) != j.at("G").get<std::int64_t>())
        throw Error(errc::bad_input, "sampled function: G disagrees with the sample count");
    return SampledFunction(std::move(samples));
}

json to_json(const CertificateResult& c) {
    return {{"lower_bound", c.lower_bound},
            {"M", c.m},
            {"N", c.n},
            {"parity_contribs", {c.even_contrib, c.odd_contrib}}};
}

json to_json(const CoefficientSequence& a) {
    json arr = json::array();
    for (const auto& c : a.a)
        arr.push_back({c.real(), c.imag()});
    return {{"a", arr}};
}

CoefficientSequence coefficients_from_json(const json& j) {
    require_field(j, "a", "coefficient file");
    CoefficientSequence a;
    for (const auto& e : j.at("a")) {
        if (e.is_array())
            a.a.emplace_back(e.at(0).get<double>(), e.size() > 1 ? e.at(1).get<double>() : 0.0);
        else
            a.a.emplace_back(e.get<double>(), 0.0);
    }
    return a;
}

RadiusSequence radii_from_json(const json& j, std::int64_t default_k_max) {
    if (j.contains("log2_r")) {
        std::vector<double> t;
        for (const auto& e : j.at("log2_r"))
            t.push_back(e.get<double>());
        return RadiusSequence::from_table(std::move(t));
    }
    if (j.contains("kind")) {
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "affine-log") {
            require_field(j, "slope", "affine-log radii");
            require_field(j, "offset", "affine-log radii");
            return RadiusSequence::affine_log(j.at("slope").get<double>(),
                                              j.at("offset").get<double>(),
                                              j.value("k_max", default_k_max));
        }
        throw Error(errc::bad_input, "unknown radii generator kind \"" + kind + "\"");
    }
    throw Error(errc::bad_input, "radii spec missing field \"log2_r\" (or a generator \"kind\")");
}

WeightSequence weights_from_json(const json& j, std::int64_t default_k_max) {
    if (j.contains("w")) {
        std::vector<double> t;
        for (const auto& e : j.at("w"))
            t.push_back(e.get<double>());
        return WeightSequence::from_table(std::move(t));
    }
    if (j.contains("kind")) {
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "const") {
            require_field(j, "value", "const weights");
            return WeightSequence::constant(j.at("value").get<double>(),
                                            j.value("k_max", default_k_max));
        }
        if (kind == "affine-log") {
            require_field(j, "slope", "affine-log weights");
            require_field(j, "offset", "affine-log weights");
            return WeightSequence::affine_log(j.at("slope").get<double>(),
                                              j.at("offset").get<double>(),
                                              j.value("k_max", default_k_max));
        }
        throw Error(errc::bad_input, "unknown weights generator kind \"" + kind + "\"");
    }
    throw Error(errc::bad_input, "weights spec missing field \"w\" (or a generator \"kind\")");
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(errc::bad_input, "cannot open \"" + path + "\"");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw Error(errc::bad_input, "malformed JSON in \"" + path + "\": " + e.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out)
        throw Error(errc::bad_input, "cannot write \"" + path + "\"");
    out << text;
}

} // namespace sparsespec
