#include "sparsespec.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "sparsespec/harness.hpp"
#include "sparsespec/riesz.hpp"

namespace {

using namespace sparsespec;

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out)
        std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void set_error(char** error_message, const std::string& what) {
    if (error_message)
        *error_message = dup_string(what);
}

template <typename Fn>
ss_status guarded(char** error_message, Fn&& fn) {
    try {
        fn();
        return SS_OK;
    } catch (const Error& e) {
        set_error(error_message, e.what());
        switch (e.exit_status()) {
        case 3: return SS_ERROR_PRECONDITION;
        case 4: return SS_ERROR_DIVERGED;
        default: return SS_ERROR_INPUT;
        }
    } catch (const json::exception& e) {
        set_error(error_message, std::string("json: ") + e.what());
        return SS_ERROR_INPUT;
    } catch (const std::exception& e) {
        set_error(error_message, e.what());
        return SS_ERROR_INTERNAL;
    }
}

} // namespace

struct ss_spectrum {
    SpectrumSpec spec;
    WeightSequence weights;
};

extern "C" {

const char* ss_version(void) { return sparsespec::artifact_version; }

ss_status ss_run_command(const char* command, const char* config_json, char** report_json,
                         char** error_message) {
    if (error_message)
        *error_message = nullptr;
    if (report_json)
        *report_json = nullptr;
    if (!command || !config_json) {
        set_error(error_message, "command and config_json must be non-NULL");
        return SS_ERROR_INPUT;
    }
    return guarded(error_message, [&] {
        json config;
        try {
            config = json::parse(config_json);
        } catch (const json::parse_error& e) {
            throw Error(errc::bad_input, std::string("malformed config JSON: ") + e.what());
        }
        const json report = run_command(command, std::move(config));
        if (report_json)
            *report_json = dup_string(report.dump(2) + "\n");
    });
}

void ss_string_free(char* str) { std::free(str); }

ss_status ss_spectrum_open(const char* spec_json, ss_spectrum** handle, char** error_message) {
    if (error_message)
        *error_message = nullptr;
    if (!spec_json || !handle) {
        set_error(error_message, "spec_json and handle must be non-NULL");
        return SS_ERROR_INPUT;
    }
    *handle = nullptr;
    return guarded(error_message, [&] {
        json j;
        try {
            j = json::parse(spec_json);
        } catch (const json::parse_error& e) {
            throw Error(errc::bad_input, std::string("malformed spec JSON: ") + e.what());
        }
        if (!j.contains("radii"))
            throw Error(errc::bad_input, "spec missing field \"radii\"");
        if (!j.contains("N"))
            throw Error(errc::bad_input, "spec missing field \"N\"");
        const auto n_trunc = j.at("N").get<std::int64_t>();
        const auto k_max = j.value("k_max", std::max<std::int64_t>(4096, n_trunc + 2));
        auto radii = radii_from_json(j.at("radii"), k_max);
        auto weights = j.contains("weights") ? weights_from_json(j.at("weights"), k_max)
                                             : WeightSequence::constant(1.0, k_max);
        auto spec = SpectrumSpec::make(std::move(radii), n_trunc);
        *handle = new ss_spectrum{std::move(spec), std::move(weights)};
    });
}

void ss_spectrum_close(ss_spectrum* handle) { delete handle; }

ss_status ss_spectrum_is_allowed(const ss_spectrum* handle, int64_t n, int* allowed) {
    if (!handle || !allowed)
        return SS_ERROR_INPUT;
    return guarded(nullptr, [&] { *allowed = is_allowed(n, handle->spec) ? 1 : 0; });
}

ss_status ss_spectrum_condition_value(const ss_spectrum* handle, int64_t n_probe, double* value,
                                      int* diverging) {
    if (!handle || !value)
        return SS_ERROR_INPUT;
    return guarded(nullptr, [&] {
        const auto cap = std::min(handle->spec.radii.k_max(), handle->weights.k_max());
        const auto n = std::min<std::int64_t>(n_probe, cap);
        *value = condition_value(handle->spec.radii, handle->weights, n);
        if (diverging)
            *diverging = condition_diverging(handle->spec.radii, handle->weights, n) ? 1 : 0;
    });
}

ss_status ss_spectrum_lambda(const ss_spectrum* handle, int64_t* buffer, size_t capacity,
                             size_t* count) {
    if (!handle || !count)
        return SS_ERROR_INPUT;
    return guarded(nullptr, [&] {
        const auto& lambda = handle->spec.lambda;
        *count = lambda.size();
        if (buffer) {
            const size_t n = std::min(capacity, lambda.size());
            for (size_t i = 0; i < n; ++i)
                buffer[i] = lambda[i];
        }
    });
}

ss_status ss_certificate_lower_bound(const ss_spectrum* handle, const double* a_re,
                                     const double* a_im, size_t count, int64_t window_m,
                                     int64_t window_n, double* lower_bound,
                                     char** error_message) {
    if (error_message)
        *error_message = nullptr;
    if (!handle || !a_re || !lower_bound) {
        set_error(error_message, "handle, a_re and lower_bound must be non-NULL");
        return SS_ERROR_INPUT;
    }
    return guarded(error_message, [&] {
        CoefficientSequence a;
        a.a.reserve(count);
        for (size_t i = 0; i < count; ++i)
            a.a.emplace_back(a_re[i], a_im ? a_im[i] : 0.0);
        *lower_bound = certificate_bound(a, handle->spec, window_m, window_n).lower_bound;
    });
}

} // extern "C"
