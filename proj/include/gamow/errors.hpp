#pragma once

#include <stdexcept>
#include <string>

namespace gamow {

// Domain error codes shared across the toolkit. The CLI prints the
// name on stderr and exits 1.
enum class errc {
    gap_or_overlap,
    nonpositive_support,
    nonfinite_value,
    overflow,
    degenerate_momentum,
    at_pole,
    not_a_pole,
    boundary_zero,
    search_exhausted,
    mirror_residual_fail,
    degenerate_energies,
    profile_mismatch,
    romo_zero_momentum,
    bad_config,
};

inline const char* errc_name(errc c)
{
    switch (c) {
        case errc::gap_or_overlap:       return "GapOrOverlap";
        case errc::nonpositive_support:  return "NonpositiveSupport";
        case errc::nonfinite_value:      return "NonfiniteValue";
        case errc::overflow:             return "Overflow";
        case errc::degenerate_momentum:  return "DegenerateMomentum";
        case errc::at_pole:              return "AtPole";
        case errc::not_a_pole:           return "NotAPole";
        case errc::boundary_zero:        return "BoundaryZero";
        case errc::search_exhausted:     return "SearchExhausted";
        case errc::mirror_residual_fail: return "MirrorResidualFail";
        case errc::degenerate_energies:  return "DegenerateEnergies";
        case errc::profile_mismatch:     return "ProfileMismatch";
        case errc::romo_zero_momentum:   return "RomoZeroMomentum";
        case errc::bad_config:           return "BadConfig";
    }
    return "Unknown";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& detail)
        : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code)
    {
    }

    errc code() const noexcept { return code_; }
    const char* name() const noexcept { return errc_name(code_); }

private:
    errc code_;
};

} // namespace gamow
