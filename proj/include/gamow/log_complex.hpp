#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "gamow/errors.hpp"

namespace gamow {

using complex = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double sqrt_pi = 1.77245385090551602729816748334114518;
inline constexpr double ln10 = 2.30258509299404568401799145468436421;

// Complex value stored as (log10 of magnitude, phase). Survives the
// e^{|k|^2/(4 lambda)} growth probed by lambda sweeps, where ordinary
// doubles overflow around 1e308.
struct LogComplex {
    double log10_mag = -std::numeric_limits<double>::infinity(); // zero by default
    double phase = 0.0; // radians in (-pi, pi]

    static LogComplex from(complex v)
    {
        if (v == complex(0.0, 0.0)) return LogComplex{};
        return LogComplex{std::log10(std::abs(v)), std::arg(v)};
    }

    static LogComplex from_log_e(double ln_mag, double phase)
    {
        return LogComplex{ln_mag / ln10, wrap(phase)};
    }

    bool is_zero() const { return std::isinf(log10_mag) && log10_mag < 0; }

    complex value() const
    {
        if (is_zero()) return {0.0, 0.0};
        if (log10_mag > 307.0) throw error(errc::overflow, "LogComplex magnitude exceeds double range");
        double m = std::pow(10.0, log10_mag);
        return {m * std::cos(phase), m * std::sin(phase)};
    }

    // value() without the overflow guard; may return inf.
    complex value_unchecked() const
    {
        if (is_zero()) return {0.0, 0.0};
        double m = std::pow(10.0, log10_mag);
        return {m * std::cos(phase), m * std::sin(phase)};
    }

    static double wrap(double phi)
    {
        phi = std::fmod(phi, 2.0 * pi);
        if (phi > pi) phi -= 2.0 * pi;
        if (phi <= -pi) phi += 2.0 * pi;
        return phi;
    }

    friend LogComplex operator*(const LogComplex& a, const LogComplex& b)
    {
        if (a.is_zero() || b.is_zero()) return LogComplex{};
        return LogComplex{a.log10_mag + b.log10_mag, wrap(a.phase + b.phase)};
    }

    friend LogComplex operator*(const LogComplex& a, complex c)
    {
        return a * LogComplex::from(c);
    }

    friend LogComplex operator+(const LogComplex& a, const LogComplex& b)
    {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        double m = std::max(a.log10_mag, b.log10_mag);
        complex va = std::polar(std::pow(10.0, a.log10_mag - m), a.phase);
        complex vb = std::polar(std::pow(10.0, b.log10_mag - m), b.phase);
        complex s = va + vb;
        if (s == complex(0.0, 0.0)) return LogComplex{};
        return LogComplex{m + std::log10(std::abs(s)), std::arg(s)};
    }
};

inline LogComplex log_sum(const std::vector<LogComplex>& terms)
{
    LogComplex acc;
    for (const auto& t : terms) acc = acc + t;
    return acc;
}

} // namespace gamow
