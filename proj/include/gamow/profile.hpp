#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gamow/errors.hpp"

namespace gamow {

// One piecewise-constant piece of the reduced potential u(x) = 2mV(x),
// in units of inverse length squared (hbar = 1).
struct Segment {
    double x_lo;
    double x_hi;
    double u;
};

// Compact-support piecewise-constant potential on [0, L]. Identically
// zero outside the support. Immutable after construction.
class PotentialProfile {
public:
    static constexpr double contiguity_tol = 1e-12;

    const std::vector<Segment>& segments() const { return segments_; }
    double support_end() const { return L_; }

    // Display-only mass scale; reduced units keep 2m = 1 internally.
    double display_mass() const { return mass_; }
    void set_display_mass(double m) { mass_ = m; }

    double u_at(double x) const
    {
        if (x < 0.0 || x > L_) return 0.0;
        for (const auto& s : segments_)
            if (x >= s.x_lo && x <= s.x_hi) return s.u;
        return 0.0;
    }

    // Index of the segment containing x in [0, L].
    std::size_t segment_index(double x) const
    {
        for (std::size_t i = 0; i + 1 < segments_.size(); ++i)
            if (x < segments_[i].x_hi) return i;
        return segments_.size() - 1;
    }

    double max_abs_u() const
    {
        double m = 0.0;
        for (const auto& s : segments_) m = std::max(m, std::abs(s.u));
        return m;
    }

    bool same_as(const PotentialProfile& other) const
    {
        if (segments_.size() != other.segments_.size()) return false;
        for (std::size_t i = 0; i < segments_.size(); ++i) {
            const auto& a = segments_[i];
            const auto& b = other.segments_[i];
            if (a.x_lo != b.x_lo || a.x_hi != b.x_hi || a.u != b.u) return false;
        }
        return true;
    }

    friend PotentialProfile build_profile(const std::vector<Segment>& segments);

private:
    std::vector<Segment> segments_;
    double L_ = 0.0;
    double mass_ = 0.5; // 2m = 1
};

inline PotentialProfile build_profile(const std::vector<Segment>& segments)
{
    if (segments.empty())
        throw error(errc::nonpositive_support, "no segments");
    for (const auto& s : segments)
        if (!std::isfinite(s.x_lo) || !std::isfinite(s.x_hi) || !std::isfinite(s.u))
            throw error(errc::nonfinite_value, "segment with non-finite entry");
    if (std::abs(segments.front().x_lo) > PotentialProfile::contiguity_tol)
        throw error(errc::gap_or_overlap, "first segment must start at x = 0");
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (segments[i].x_hi <= segments[i].x_lo)
            throw error(errc::gap_or_overlap, "segment " + std::to_string(i) + " has x_hi <= x_lo");
        if (i + 1 < segments.size() &&
            std::abs(segments[i].x_hi - segments[i + 1].x_lo) > PotentialProfile::contiguity_tol)
            throw error(errc::gap_or_overlap,
                        "gap or overlap between segments " + std::to_string(i) + " and " + std::to_string(i + 1));
    }
    double L = segments.back().x_hi;
    if (!(L > 0.0))
        throw error(errc::nonpositive_support, "support end L must be positive");

    PotentialProfile p;
    p.segments_ = segments;
    p.segments_.front().x_lo = 0.0;
    p.L_ = L;
    return p;
}

inline PotentialProfile square_barrier(double u0, double L)
{
    if (!std::isfinite(u0))
        throw error(errc::nonfinite_value, "barrier height must be finite");
    if (!(L > 0.0) || !std::isfinite(L))
        throw error(errc::nonpositive_support, "support end L must be positive");
    return build_profile({{0.0, L, u0}});
}

} // namespace gamow
