#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "gamow/poles.hpp"
#include "gamow/quad.hpp"

namespace gamow {

enum class Family { gamow_out, gamow_in, bound, scattering };

inline const char* family_name(Family f)
{
    switch (f) {
        case Family::gamow_out:  return "gamow_out";
        case Family::gamow_in:   return "gamow_in";
        case Family::bound:      return "bound";
        case Family::scattering: return "scattering";
    }
    return "?";
}

// One exterior exponential c e^{ikx}.
struct TailTerm {
    complex coeff;
    complex k;
};

// Wavefunction as interior per-segment plane waves plus exterior
// exponential tails. Immutable after construction.
struct PlanewaveState {
    Family family;
    complex momentum;
    std::vector<TailTerm> left_tail;  // valid for x <= 0
    std::vector<TailTerm> right_tail; // valid for x >= L
    struct SegmentWave {
        complex a, b; // a e^{iq(x-x_lo)} + b e^{-iq(x-x_lo)}
        complex q;
        double x_lo, x_hi;
    };
    std::vector<SegmentWave> interior;
    PotentialProfile profile;

    complex value(double x) const
    {
        const double L = profile.support_end();
        if (x <= 0.0) return tail_value(left_tail, x);
        if (x >= L) return tail_value(right_tail, x);
        const auto& s = interior[profile.segment_index(x)];
        complex ph = complex(0.0, 1.0) * s.q * (x - s.x_lo);
        return s.a * std::exp(ph) + s.b * std::exp(-ph);
    }

    complex derivative(double x) const
    {
        const double L = profile.support_end();
        if (x <= 0.0) return tail_derivative(left_tail, x);
        if (x >= L) return tail_derivative(right_tail, x);
        const auto& s = interior[profile.segment_index(x)];
        complex iq = complex(0.0, 1.0) * s.q;
        complex ph = iq * (x - s.x_lo);
        return iq * (s.a * std::exp(ph) - s.b * std::exp(-ph));
    }

    static complex tail_value(const std::vector<TailTerm>& tail, double x)
    {
        complex v{0.0, 0.0};
        for (const auto& t : tail) v += t.coeff * std::exp(complex(0.0, 1.0) * t.k * x);
        return v;
    }

    static complex tail_derivative(const std::vector<TailTerm>& tail, double x)
    {
        complex v{0.0, 0.0};
        for (const auto& t : tail)
            v += t.coeff * complex(0.0, 1.0) * t.k * std::exp(complex(0.0, 1.0) * t.k * x);
        return v;
    }
};

inline complex eval_state(const PlanewaveState& state, double x) { return state.value(x); }

namespace detail {

// Fill interior segment waves from (psi, psi') at x = L, walking the
// segments right to left with the inverse propagators. Returns
// (psi(0), psi'(0)).
inline std::pair<complex, complex> interior_from_right(const PotentialProfile& profile, complex p,
                                                       complex psiL, complex dpsiL,
                                                       std::vector<PlanewaveState::SegmentWave>& out)
{
    const auto& segs = profile.segments();
    out.assign(segs.size(), {});
    complex psi = psiL, dpsi = dpsiL;
    const complex p2 = p * p;
    for (std::size_t i = segs.size(); i-- > 0;) {
        const auto& s = segs[i];
        auto P = segment_propagator(p2 - s.u, s.x_hi - s.x_lo);
        // inverse of [[a,b],[c,d]] with det 1
        complex psi_lo = P.d * psi - P.b * dpsi;
        complex dpsi_lo = -P.c * psi + P.a * dpsi;
        complex q = std::sqrt(p2 - s.u);
        complex iq = complex(0.0, 1.0) * q;
        auto& w = out[i];
        w.q = q;
        w.x_lo = s.x_lo;
        w.x_hi = s.x_hi;
        w.a = 0.5 * (psi_lo + dpsi_lo / iq);
        w.b = 0.5 * (psi_lo - dpsi_lo / iq);
        psi = psi_lo;
        dpsi = dpsi_lo;
    }
    return {psi, dpsi};
}

inline void conjugate_in_place(PlanewaveState& s)
{
    for (auto& t : s.left_tail) t = {std::conj(t.coeff), -std::conj(t.k)};
    for (auto& t : s.right_tail) t = {std::conj(t.coeff), -std::conj(t.k)};
    for (auto& w : s.interior) {
        complex a = std::conj(w.b), b = std::conj(w.a);
        w.a = a;
        w.b = b;
        w.q = std::conj(w.q);
    }
}

inline void verify_pole(const PotentialProfile& profile, complex p)
{
    double r = std::abs(jost_outgoing(profile, p));
    if (r > 1e-8 * pole_residual_scale(profile, p))
        throw error(errc::not_a_pole, "outgoing-condition residual too large at the given momentum");
}

// Outgoing solution normalized to T = 1, built by back-propagation from
// the right tail.
inline PlanewaveState gamow_out_at(const PotentialProfile& profile, complex p)
{
    verify_pole(profile, p);
    const double L = profile.support_end();
    PlanewaveState st;
    st.family = Family::gamow_out;
    st.momentum = p;
    st.profile = profile;
    complex psiL = std::exp(complex(0.0, 1.0) * p * L);
    auto [psi0, dpsi0] = interior_from_right(profile, p, psiL, complex(0.0, 1.0) * p * psiL, st.interior);
    (void)dpsi0;
    st.left_tail = {{psi0, -p}};
    st.right_tail = {{complex(1.0, 0.0), p}};
    return st;
}

} // namespace detail

enum class Direction { out, in };

// Gamow state of a resonance pole. direction == out gives the proper
// (Outgoing) solution u_n with T_n = 1. direction == in gives the
// Incoming state: the same spatial solution carrying the reversed
// first-sheet momentum label -p_n. Mirror poles (Re p < 0) are built by
// conjugating the T = 1 state at -p^*, which makes u_{-n} = u_n^* hold
// to rounding.
inline PlanewaveState gamow_state(const PotentialProfile& profile, const Pole& pole,
                                  Direction direction = Direction::out)
{
    if (pole.kind != PoleKind::resonance)
        throw error(errc::not_a_pole, "gamow_state requires a resonance pole");
    complex p = pole.momentum;
    PlanewaveState st;
    if (p.real() < 0.0) {
        st = detail::gamow_out_at(profile, -std::conj(p));
        detail::conjugate_in_place(st);
        st.momentum = p;
    } else {
        st = detail::gamow_out_at(profile, p);
    }
    if (direction == Direction::in) {
        st.family = Family::gamow_in;
        st.momentum = -st.momentum; // first-sheet label; tails unchanged
    }
    return st;
}

// Bound state with unit conventional norm <phi|phi> = 1.
inline PlanewaveState bound_state(const PotentialProfile& profile, const Pole& pole)
{
    if (pole.kind != PoleKind::bound)
        throw error(errc::not_a_pole, "bound_state requires a bound pole");
    complex p = pole.momentum; // iq, q > 0
    PlanewaveState st = detail::gamow_out_at(profile, p);
    st.family = Family::bound;

    const double q = p.imag();
    const double L = profile.support_end();
    // tails analytic, interior by quadrature
    double norm2 = std::norm(st.left_tail[0].coeff) / (2.0 * q) +
                   std::norm(st.right_tail[0].coeff) * std::exp(-2.0 * q * L) / (2.0 * q);
    norm2 += integrate_adaptive([&](double x) { return complex(std::norm(st.value(x)), 0.0); },
                                0.0, L, 1e-13)
                 .value.real();
    const double s = 1.0 / std::sqrt(norm2);
    for (auto& t : st.left_tail) t.coeff *= s;
    for (auto& t : st.right_tail) t.coeff *= s;
    for (auto& w : st.interior) {
        w.a *= s;
        w.b *= s;
    }
    return st;
}

inline PlanewaveState scattering_state(const PotentialProfile& profile, double p,
                                       Side side = Side::left)
{
    if (!(p > 0.0)) throw error(errc::bad_config, "scattering momentum must be real positive");
    auto amp = scattering_amplitudes(profile, complex(p, 0.0), side);
    PlanewaveState st;
    st.family = Family::scattering;
    st.momentum = complex(p, 0.0);
    st.profile = profile;

    complex psi0, dpsi0;
    const complex ip(0.0, p);
    if (side == Side::left) {
        st.left_tail = {{complex(1.0, 0.0), complex(p, 0.0)}, {amp.R, complex(-p, 0.0)}};
        st.right_tail = {{amp.T, complex(p, 0.0)}};
        psi0 = 1.0 + amp.R;
        dpsi0 = ip * (1.0 - amp.R);
    } else {
        st.left_tail = {{amp.T, complex(-p, 0.0)}};
        st.right_tail = {{complex(1.0, 0.0), complex(-p, 0.0)}, {amp.R, complex(p, 0.0)}};
        psi0 = amp.T;
        dpsi0 = -ip * amp.T;
    }
    // forward propagation segment by segment
    const complex p2 = complex(p, 0.0) * complex(p, 0.0);
    complex psi = psi0, dpsi = dpsi0;
    st.interior.reserve(profile.segments().size());
    for (const auto& seg : profile.segments()) {
        complex q = std::sqrt(p2 - seg.u);
        complex iq = complex(0.0, 1.0) * q;
        PlanewaveState::SegmentWave w;
        w.q = q;
        w.x_lo = seg.x_lo;
        w.x_hi = seg.x_hi;
        w.a = 0.5 * (psi + dpsi / iq);
        w.b = 0.5 * (psi - dpsi / iq);
        st.interior.push_back(w);
        auto P = detail::segment_propagator(p2 - seg.u, seg.x_hi - seg.x_lo);
        complex psi_hi = P.a * psi + P.b * dpsi;
        complex dpsi_hi = P.c * psi + P.d * dpsi;
        psi = psi_hi;
        dpsi = dpsi_hi;
    }
    return st;
}

// int_0^L (a or a^*) b dx from boundary data only, via the generalized
// Wronskian identity. Valid for any pair of state families sharing the
// profile; throws DegenerateEnergies when the effective momenta squared
// coincide (caller falls back to quadrature).
inline complex interior_overlap_boundary(const PlanewaveState& a, const PlanewaveState& b,
                                         bool conjugate_first = true)
{
    if (!a.profile.same_as(b.profile))
        throw error(errc::profile_mismatch, "states built on different profiles");
    const double L = a.profile.support_end();
    complex ka2 = a.momentum * a.momentum;
    if (conjugate_first) ka2 = std::conj(ka2);
    complex kb2 = b.momentum * b.momentum;
    complex denom = ka2 - kb2;
    double scale = std::max({std::abs(ka2), std::abs(kb2), 1.0});
    if (std::abs(denom) < 1e-12 * scale)
        throw error(errc::degenerate_energies, "equal effective momenta squared; use quadrature");

    auto at = [&](double x, complex& v, complex& d) {
        v = a.value(x);
        d = a.derivative(x);
        if (conjugate_first) {
            v = std::conj(v);
            d = std::conj(d);
        }
    };
    complex a0, da0, aL, daL;
    at(0.0, a0, da0);
    at(L, aL, daL);
    complex b0 = b.value(0.0), db0 = b.derivative(0.0);
    complex bL = b.value(L), dbL = b.derivative(L);

    complex wL = aL * dbL - bL * daL;
    complex w0 = a0 * db0 - b0 * da0;
    return (wL - w0) / denom;
}

// Zel'dovich complex norm N_n = i (u^2(a) + u^2(b)) / (2 p_n) +
// int_a^b u^2 dx, independent of a <= 0 and b >= L by the outgoing BCs.
inline complex zeldovich_norm(const PlanewaveState& state, double a, double b)
{
    if (state.family != Family::gamow_out)
        throw error(errc::bad_config, "zeldovich_norm is defined for outgoing Gamow states");
    const double L = state.profile.support_end();
    if (a > 0.0 || b < L) throw error(errc::bad_config, "require a <= 0 and b >= L");
    const complex p = state.momentum;
    const complex i(0.0, 1.0);

    // The boundary term i u^2(a)/(2p) cancels the analytic tail
    // extension R^2 int_a^0 e^{-2ipx} dx exactly, leaving i R^2/(2p);
    // same on the right. Summing the combined forms avoids the
    // catastrophic cancellation of the separate pieces (each grows like
    // e^{2|Im p| |a|}) and makes the result exactly independent of the
    // cut points, as the outgoing boundary conditions demand.
    complex R = state.left_tail[0].coeff, T = state.right_tail[0].coeff;
    complex N = i * (R * R + T * T * std::exp(2.0 * i * p * L)) / (2.0 * p);

    // interior [0, L]: same-momentum overlap is degenerate, use quadrature
    complex sq = integrate_adaptive([&](double x) { complex u = state.value(x); return u * u; },
                                    0.0, L, 1e-13)
                     .value;
    return N + sq;
}

} // namespace gamow
