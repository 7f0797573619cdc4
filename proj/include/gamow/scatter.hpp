#pragma once

#include <cmath>
#include <complex>

#include "gamow/profile.hpp"
#include "gamow/log_complex.hpp"

namespace gamow {

// Relates exterior plane-wave coefficients (A_L, B_L) of
// A e^{ipx} + B e^{-ipx} at x <= 0 to (A_R, B_R) at x >= L.
// det = 1 (Wronskian constancy).
struct TransferMatrix {
    complex m11, m12, m21, m22;

    complex det() const { return m11 * m22 - m12 * m21; }
};

enum class Side { left, right };

namespace detail {

// Propagator of (psi, psi') across one constant-u segment of length d.
// Entries cos(qd), sin(qd)/q, -q^2 * sin(qd)/q are even in q, so the
// branch of q = sqrt(p^2 - u) is irrelevant. Small |qd| goes through a
// series branch (removable p^2 = u singularity).
struct SegmentPropagator {
    complex a, b, c, d; // [psi; psi'] -> [a b; c d][psi; psi']
};

inline SegmentPropagator segment_propagator(complex q2, double len)
{
    complex q = std::sqrt(q2);
    complex qd = q * len;
    SegmentPropagator P;
    if (std::abs(qd) < 1e-6) {
        complex w = q2 * len * len; // (qd)^2
        P.a = 1.0 - w / 2.0 + w * w / 24.0;
        P.b = len * (1.0 - w / 6.0 + w * w / 120.0);
    } else {
        P.a = std::cos(qd);
        P.b = std::sin(qd) / q;
    }
    P.c = -q2 * P.b;
    P.d = P.a;
    return P;
}

} // namespace detail

// Propagator of (psi, psi') from x = 0 to x = L for the full profile.
inline detail::SegmentPropagator interior_propagator(const PotentialProfile& profile, complex p)
{
    detail::SegmentPropagator P{1.0, 0.0, 0.0, 1.0};
    const complex p2 = p * p;
    for (const auto& s : profile.segments()) {
        auto S = detail::segment_propagator(p2 - s.u, s.x_hi - s.x_lo);
        detail::SegmentPropagator R;
        R.a = S.a * P.a + S.b * P.c;
        R.b = S.a * P.b + S.b * P.d;
        R.c = S.c * P.a + S.d * P.c;
        R.d = S.c * P.b + S.d * P.d;
        P = R;
    }
    return P;
}

inline TransferMatrix transfer_matrix(const PotentialProfile& profile, complex p)
{
    if (p == complex(0.0, 0.0))
        throw error(errc::degenerate_momentum, "transfer matrix undefined at p = 0");
    const double L = profile.support_end();
    auto P = interior_propagator(profile, p);

    // M = C_R^{-1} P C_L with C = [[e^{ipx}, e^{-ipx}], [ip e^{ipx}, -ip e^{-ipx}]]
    const complex ip(-p.imag(), p.real());
    const complex Em = std::exp(complex(0.0, -1.0) * p * L); // e^{-ipL}
    const complex Ep = 1.0 / Em;

    // rows of C_R^{-1}
    const complex r11 = 0.5 * Em, r12 = Em / (2.0 * ip);
    const complex r21 = 0.5 * Ep, r22 = -Ep / (2.0 * ip);

    // Q = P C_L
    const complex q11 = P.a + P.b * ip, q12 = P.a - P.b * ip;
    const complex q21 = P.c + P.d * ip, q22 = P.c - P.d * ip;

    TransferMatrix M;
    M.m11 = r11 * q11 + r12 * q21;
    M.m12 = r11 * q12 + r12 * q22;
    M.m21 = r21 * q11 + r22 * q21;
    M.m22 = r21 * q12 + r22 * q22;
    return M;
}

// Jost-type outgoing-condition function. Zeros in the lower half-plane
// are the resonances, zeros on the positive imaginary axis the bound
// states. Equals 1 for the free profile and tends to 1 as p -> +inf.
inline complex jost_outgoing(const PotentialProfile& profile, complex p)
{
    return transfer_matrix(profile, p).m22;
}

struct Amplitudes {
    complex R, T;
};

inline Amplitudes scattering_amplitudes(const PotentialProfile& profile, complex p,
                                        Side side = Side::left)
{
    TransferMatrix M = transfer_matrix(profile, p);
    double scale = std::abs(M.m11) + std::abs(M.m12) + std::abs(M.m21) + std::abs(M.m22);
    if (std::abs(M.m22) < 1e-12 * scale)
        throw error(errc::at_pole, "momentum coincides with an outgoing-condition zero");
    if (side == Side::left)
        return {-M.m21 / M.m22, 1.0 / M.m22};
    return {M.m12 / M.m22, 1.0 / M.m22};
}

} // namespace gamow
