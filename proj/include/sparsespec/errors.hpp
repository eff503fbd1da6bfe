#ifndef SPARSESPEC_ERRORS_HPP
#define SPARSESPEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sparsespec {

enum class errc {
    bad_input,
    frequency_overflow,
    bad_exponent,
    grid_mismatch,
    truncation_too_large,
    range_too_wide,
    grid_too_coarse,
    separation_violated,
    blocks_not_found,
    diverged,
};

// All failures surface as Error; exit_status() groups them the way the CLI
// and the C API report them (2 = bad input, 3 = mathematical precondition
// violated, 4 = solver divergence).
class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& msg)
        : std::runtime_error(std::string(code_name(code)) + ": " + msg), code_(code) {}

    errc code() const { return code_; }

    int exit_status() const {
        switch (code_) {
        case errc::separation_violated:
        case errc::blocks_not_found:
            return 3;
        case errc::diverged:
            return 4;
        default:
            return 2;
        }
    }

    static const char* code_name(errc c) {
        switch (c) {
        case errc::bad_input: return "BadInput";
        case errc::frequency_overflow: return "FrequencyOverflow";
        case errc::bad_exponent: return "BadExponent";
        case errc::grid_mismatch: return "GridMismatch";
        case errc::truncation_too_large: return "TruncationTooLarge";
        case errc::range_too_wide: return "RangeTooWide";
        case errc::grid_too_coarse: return "GridTooCoarse";
        case errc::separation_violated: return "SeparationViolated";
        case errc::blocks_not_found: return "BlocksNotFound";
        case errc::diverged: return "Diverged";
        }
        return "Unknown";
    }

private:
    errc code_;
};

} // namespace sparsespec

#endif
