#pragma once

#include <cmath>
#include <complex>

#include "gamow/log_complex.hpp"

namespace gamow {

namespace detail {

// Minimal quad-precision complex arithmetic for the Faddeeva Maclaurin
// series. The largest intermediate term reaches ~1e16 near |z| = 6.5,
// which would cost ~6 digits in double; __float128 keeps the summation
// error below 1e-15 relative.
struct qcomplex {
    __float128 re = 0;
    __float128 im = 0;

    qcomplex() = default;
    qcomplex(__float128 r, __float128 i) : re(r), im(i) {}
    explicit qcomplex(complex z) : re(z.real()), im(z.imag()) {}

    qcomplex operator+(const qcomplex& o) const { return {re + o.re, im + o.im}; }
    qcomplex operator*(const qcomplex& o) const
    {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    qcomplex operator*(__float128 s) const { return {re * s, im * s}; }

    complex to_complex() const { return {static_cast<double>(re), static_cast<double>(im)}; }
    double abs2_d() const
    {
        return static_cast<double>(re * re + im * im);
    }
};

// sqrt(pi) as a double-double sum, exact to quad precision.
inline __float128 q_sqrt_pi()
{
    return static_cast<__float128>(1.772453850905516) + static_cast<__float128>(-7.666586499825799e-17);
}

// w(z) = sum_n (iz)^n / Gamma(n/2 + 1), summed in quad precision.
inline complex faddeeva_series(complex z)
{
    qcomplex iz(complex(-z.imag(), z.real()));
    qcomplex iz2 = iz * iz;

    // even chain: (iz)^{2k}/k!, odd chain: (iz)^{2k+1}/Gamma(k + 3/2)
    qcomplex even(1.0, 0.0);
    qcomplex odd = iz * (static_cast<__float128>(2.0) / q_sqrt_pi());
    qcomplex sum = even + odd;

    for (int k = 1; k < 400; ++k) {
        even = even * iz2 * (static_cast<__float128>(1.0) / static_cast<__float128>(k));
        odd = odd * iz2 * (static_cast<__float128>(1.0) / (static_cast<__float128>(k) + 0.5));
        sum = sum + even + odd;
        if (even.abs2_d() < 1e-80 && odd.abs2_d() < 1e-80) break;
    }
    return sum.to_complex();
}

// Laplace continued fraction, modified Lentz. Requires Im z >= 0 and
// |z| large enough that the neglected e^{-z^2} ridge is below double
// precision (|z| >= ~6.2 near the real axis).
inline complex faddeeva_continued_fraction(complex z)
{
    const double tiny = 1e-290;
    complex f = z, C = z, D = 0.0;
    for (int n = 1; n <= 300; ++n) {
        complex a(-0.5 * n, 0.0);
        D = z + a * D;
        if (std::abs(D) < tiny) D = tiny;
        D = 1.0 / D;
        C = z + a / C;
        if (std::abs(C) < tiny) C = tiny;
        complex delta = C * D;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-17) break;
    }
    return complex(0.0, 1.0 / sqrt_pi) / f;
}

inline constexpr double faddeeva_series_radius = 6.5;

} // namespace detail

// Faddeeva function w(z) = e^{-z^2} erfc(-iz).
//
// Im z >= 0: relative accuracy ~1e-14 (series for |z| <= 6.5, continued
// fraction beyond). Im z < 0: reflection w(z) = 2 e^{-z^2} - w(-z);
// accuracy degrades as e^{-z^2} grows and the call throws Overflow once
// that factor exceeds double range (use big_F for those arguments).
inline complex faddeeva(complex z)
{
    if (std::abs(z) <= detail::faddeeva_series_radius) return detail::faddeeva_series(z);
    if (z.imag() >= 0.0) return detail::faddeeva_continued_fraction(z);
    complex mz2 = -z * z;
    if (mz2.real() > 705.0)
        throw error(errc::overflow, "faddeeva reflection term e^{-z^2} overflows; use big_F");
    return 2.0 * std::exp(mz2) - detail::faddeeva_continued_fraction(-z);
}

// F(zeta) = sqrt(pi) zeta e^{zeta^2} erfc(zeta) in log-magnitude form.
// Total function: exact zero at zeta = 0, no overflow for |zeta| <= 1e6.
// Uses erfc(zeta) = e^{-zeta^2} w(i zeta) for Re zeta >= 0 and the
// reflection erfc(zeta) = 2 - erfc(-zeta) otherwise.
inline LogComplex big_F(complex zeta)
{
    if (zeta == complex(0.0, 0.0)) return LogComplex{};
    complex izeta(-zeta.imag(), zeta.real());
    if (zeta.real() >= 0.0) {
        // i*zeta lies in the upper half-plane: direct, bounded value
        return LogComplex::from(sqrt_pi * zeta * faddeeva(izeta));
    }
    // F = 2 sqrt(pi) zeta e^{zeta^2} - sqrt(pi) zeta w(-i zeta)
    complex z2 = zeta * zeta;
    LogComplex grow = LogComplex::from_log_e(std::log(2.0 * sqrt_pi * std::abs(zeta)) + z2.real(),
                                             std::arg(zeta) + z2.imag());
    LogComplex small = LogComplex::from(-sqrt_pi * zeta * faddeeva(-izeta));
    return grow + small;
}

struct AsymptoticValue {
    complex value;
    bool domain_warning = false; // |arg zeta| >= 3pi/4: series not asymptotic there
};

// Partial sum 1 + sum_{j=1..m} (-1)^j (2j-1)!! / (2 zeta^2)^j of the
// large-|zeta| expansion of F(zeta).
inline AsymptoticValue big_F_asymptotic(complex zeta, int m_terms)
{
    AsymptoticValue out;
    out.domain_warning = std::abs(std::arg(zeta)) >= 0.75 * pi;
    complex inv2z2 = 1.0 / (2.0 * zeta * zeta);
    complex term(1.0, 0.0);
    complex sum(1.0, 0.0);
    for (int j = 1; j <= m_terms; ++j) {
        term *= -static_cast<double>(2 * j - 1) * inv2z2;
        sum += term;
    }
    out.value = sum;
    return out;
}

inline complex faddeeva_zeta_of(complex k, double lambda)
{
    double s = 2.0 * std::sqrt(lambda);
    return complex(0.0, -1.0) * k / s;
}

// J(k, lambda) = int_0^inf e^{-lambda x^2} e^{ikx} dx in log form.
inline LogComplex j_regularized_log(complex k, double lambda)
{
    if (!(lambda > 0.0)) throw error(errc::bad_config, "j_regularized requires lambda > 0");
    if (k == complex(0.0, 0.0))
        return LogComplex::from(complex(0.5 * sqrt_pi / std::sqrt(lambda), 0.0));
    LogComplex F = big_F(faddeeva_zeta_of(k, lambda));
    return F * (complex(0.0, 1.0) / k);
}

// Plain-complex J(k, lambda); throws Overflow when the value exceeds
// double range (callers switch to j_regularized_log).
inline complex j_regularized(complex k, double lambda)
{
    return j_regularized_log(k, lambda).value();
}

enum class TailKind { Finite, Divergent, Distributional, Marginal };

inline const char* tail_kind_name(TailKind k)
{
    switch (k) {
        case TailKind::Finite:         return "Finite";
        case TailKind::Divergent:      return "Divergent";
        case TailKind::Distributional: return "Distributional";
        case TailKind::Marginal:       return "Marginal";
    }
    return "?";
}

// Classification of lim_{lambda->0+} J(k, lambda).
struct TailVerdict {
    TailKind kind;
    complex value{0.0, 0.0}; // i/k when Finite
};

// Width of the Marginal band around the sector boundary rays,
// overridable at runtime (CLI: GAMOW_RAY_TOL).
inline double& marginal_ray_tol()
{
    static double tol = 1e-12;
    return tol;
}

// Sector rule: i/k strictly inside -pi/4 < arg k < 5pi/4 (off the real
// axis), PV/delta distribution for real k != 0, divergent outside the
// closed sector and at k = 0, Marginal on the boundary rays.
inline TailVerdict j_limit(complex k)
{
    if (k == complex(0.0, 0.0)) return {TailKind::Divergent};
    if (k.imag() == 0.0) return {TailKind::Distributional};
    const double theta = std::arg(k);
    const double ray_tol = marginal_ray_tol();
    if (std::abs(theta + 0.25 * pi) < ray_tol || std::abs(theta + 0.75 * pi) < ray_tol)
        return {TailKind::Marginal};
    if (theta > -0.25 * pi || theta < -0.75 * pi)
        return {TailKind::Finite, complex(0.0, 1.0) / k};
    return {TailKind::Divergent};
}

} // namespace gamow
