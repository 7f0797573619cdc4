#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "gamow/scatter.hpp"

namespace gamow {

enum class PoleKind { resonance, bound };

// Labeled zero of the outgoing condition.
struct Pole {
    int label = 0;        // resonances: signed n, |n| >= 1; bound: index i >= 1
    PoleKind kind = PoleKind::resonance;
    complex momentum{0.0, 0.0};
    complex energy{0.0, 0.0}; // p^2 / (2m) in display units
    double residual = 0.0;    // |f(p)| at the root
    bool atypical = false;    // outside the |Re p| > |Im p| octants

    const char* sheet() const { return kind == PoleKind::resonance ? "second" : "first"; }
};

struct Rect {
    double re_lo, re_hi, im_lo, im_hi;

    double width() const { return re_hi - re_lo; }
    double height() const { return im_hi - im_lo; }
    bool contains(complex z, double pad = 0.0) const
    {
        return z.real() >= re_lo - pad && z.real() <= re_hi + pad &&
               z.imag() >= im_lo - pad && z.imag() <= im_hi + pad;
    }
};

namespace detail {

struct BoundaryNearZero {};

// Phase change of f along the straight segment z0 -> z1, refined until
// each step turns by less than ~pi/4.
template <class F>
inline double edge_phase_change(const F& f, complex z0, complex z1, complex f0, complex f1,
                                int depth)
{
    if (std::abs(f0) < 1e-250 || std::abs(f1) < 1e-250) throw BoundaryNearZero{};
    double d = std::arg(f1 / f0);
    if (std::abs(d) < 0.8) return d;
    if (depth >= 44) throw BoundaryNearZero{}; // cannot resolve: zero on (or near) boundary
    complex zm = 0.5 * (z0 + z1);
    complex fm = f(zm);
    return edge_phase_change(f, z0, zm, f0, fm, depth + 1) +
           edge_phase_change(f, zm, z1, fm, f1, depth + 1);
}

template <class F>
inline int winding_number_once(const F& f, const Rect& r)
{
    const complex corners[5] = {
        {r.re_lo, r.im_lo}, {r.re_hi, r.im_lo}, {r.re_hi, r.im_hi}, {r.re_lo, r.im_hi},
        {r.re_lo, r.im_lo}};
    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
        complex a = corners[e], b = corners[e + 1];
        // initial sampling proportional to the expected oscillation
        int n = std::max(8, static_cast<int>(4.0 * std::abs(b - a) * (1.0 + std::abs(b))));
        complex prev = a;
        complex fprev = f(prev);
        for (int i = 1; i <= n; ++i) {
            complex cur = a + (b - a) * (static_cast<double>(i) / n);
            complex fcur = f(cur);
            total += edge_phase_change(f, prev, cur, fprev, fcur, 0);
            prev = cur;
            fprev = fcur;
        }
    }
    return static_cast<int>(std::lround(total / (2.0 * pi)));
}

// Winding number with boundary-zero perturbation retries.
template <class F>
inline int winding_number(const F& f, Rect r)
{
    double eps = 1e-3 * std::max(r.width(), r.height());
    for (int attempt = 0; attempt < 5; ++attempt) {
        try {
            return winding_number_once(f, r);
        } catch (const BoundaryNearZero&) {
            r.re_lo -= eps;
            r.re_hi += eps;
            r.im_lo -= eps;
            r.im_hi += eps;
            eps *= 1.7;
        }
    }
    throw error(errc::boundary_zero, "zero of the outgoing condition on the contour after 5 retries");
}

template <class F>
inline complex numeric_derivative(const F& f, complex z)
{
    double h = 1e-7 * std::max(1.0, std::abs(z));
    return (f(z + complex(h, 0.0)) - f(z - complex(h, 0.0))) / (2.0 * h);
}

template <class F>
inline bool newton_refine(const F& f, complex& z, double& residual)
{
    for (int it = 0; it < 60; ++it) {
        complex fz = f(z);
        complex dz = numeric_derivative(f, z);
        if (dz == complex(0.0, 0.0)) return false;
        complex step = fz / dz;
        z -= step;
        if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(z))) {
            residual = std::abs(f(z));
            return true;
        }
    }
    residual = std::abs(f(z));
    return residual < 1e-10;
}

// Quadtree scan: subdivide until each cell certifies at most one zero,
// then Newton from the cell center.
template <class F>
inline void collect_zeros(const F& f, const Rect& r, std::vector<complex>& out, int depth = 0)
{
    int n = winding_number(f, r);
    if (n == 0) return;
    if (n == 1 && std::max(r.width(), r.height()) < 1.5) {
        complex z(0.5 * (r.re_lo + r.re_hi), 0.5 * (r.im_lo + r.im_hi));
        double residual = 0.0;
        if (newton_refine(f, z, residual) && r.contains(z, 0.3 * std::max(r.width(), r.height()))) {
            out.push_back(z);
            return;
        }
        // Newton escaped: fall through and bisect further
        if (depth >= 40) throw error(errc::search_exhausted, "Newton refinement failed to converge in cell");
    }
    if (depth >= 40) throw error(errc::search_exhausted, "zero cluster could not be separated");
    Rect a = r, b = r;
    if (r.width() >= r.height()) {
        double m = 0.5 * (r.re_lo + r.re_hi);
        a.re_hi = m;
        b.re_lo = m;
    } else {
        double m = 0.5 * (r.im_lo + r.im_hi);
        a.im_hi = m;
        b.im_lo = m;
    }
    collect_zeros(f, a, out, depth + 1);
    collect_zeros(f, b, out, depth + 1);
}

} // namespace detail

// Argument-principle count of outgoing-condition zeros inside rect.
inline int count_zeros(const PotentialProfile& profile, const Rect& rect)
{
    auto f = [&](complex p) { return jost_outgoing(profile, p); };
    return detail::winding_number(f, rect);
}

struct ResonanceSearchOptions {
    double p_im_max = 5.0;
    double re_min = 1e-3;
    double p_re_limit = 300.0; // growth bound before SearchExhausted
};

inline double pole_residual_scale(const PotentialProfile& profile, complex p)
{
    auto f = [&](complex q) { return jost_outgoing(profile, q); };
    return std::max(1.0, std::abs(detail::numeric_derivative(f, p)) * std::abs(p));
}

// First n_max resonances with Re p > 0, ordered by increasing Re p,
// count-certified over the scan rectangle and Newton-refined.
inline std::vector<Pole> find_resonances(const PotentialProfile& profile, int n_max,
                                         ResonanceSearchOptions opts = {})
{
    if (n_max < 1) throw error(errc::bad_config, "n_max must be >= 1");
    auto f = [&](complex p) { return jost_outgoing(profile, p); };

    const double L = profile.support_end();
    double re_max = std::max({2.0 * (n_max + 1) * pi / L, std::sqrt(profile.max_abs_u()) + 5.0, 10.0});
    double im_max = opts.p_im_max;

    std::vector<complex> zeros;
    for (;;) {
        Rect scan{opts.re_min, re_max, -im_max, 0.0};
        zeros.clear();
        detail::collect_zeros(f, scan, zeros);
        // consistency: the cellwise collection must reproduce the total count
        int total = count_zeros(profile, scan);
        if (static_cast<int>(zeros.size()) != total)
            throw error(errc::search_exhausted, "zero collection does not match contour count");
        if (total >= n_max) break;
        if (re_max >= opts.p_re_limit)
            throw error(errc::search_exhausted,
                        "scan window reached its bound with " + std::to_string(total) + " resonances");
        re_max = std::min(opts.p_re_limit, re_max * 1.5);
        im_max = std::min(20.0, im_max + 1.0);
    }

    std::sort(zeros.begin(), zeros.end(), [](complex a, complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return std::abs(a.imag()) < std::abs(b.imag());
    });
    zeros.resize(n_max);

    const double two_m = 2.0 * profile.display_mass();
    std::vector<Pole> poles;
    poles.reserve(n_max);
    for (int i = 0; i < n_max; ++i) {
        Pole p;
        p.label = i + 1;
        p.kind = PoleKind::resonance;
        p.momentum = zeros[i];
        p.energy = zeros[i] * zeros[i] / two_m;
        p.residual = std::abs(f(zeros[i]));
        p.atypical = !(std::abs(zeros[i].real()) > std::abs(zeros[i].imag()));
        poles.push_back(p);
    }
    return poles;
}

// Bound states: real root bracketing of f(iq) on (0, q_max].
inline std::vector<Pole> find_bound_states(const PotentialProfile& profile, double q_max)
{
    if (!(q_max > 0.0)) throw error(errc::bad_config, "q_max must be positive");
    auto g = [&](double q) { return jost_outgoing(profile, complex(0.0, q)).real(); };

    const int n_samples = 4000;
    const double q_lo = q_max / n_samples;
    std::vector<double> roots;
    double prev_q = q_lo, prev_g = g(q_lo);
    for (int i = 2; i <= n_samples; ++i) {
        double q = q_max * i / n_samples;
        double gq = g(q);
        if ((prev_g < 0.0) != (gq < 0.0)) {
            double a = prev_q, b = q, fa = prev_g;
            for (int it = 0; it < 200; ++it) {
                double m = 0.5 * (a + b);
                double fm = g(m);
                if ((fa < 0.0) != (fm < 0.0)) b = m;
                else { a = m; fa = fm; }
                if (b - a < 1e-15 * std::max(1.0, b)) break;
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_q = q;
        prev_g = gq;
    }

    const double two_m = 2.0 * profile.display_mass();
    std::vector<Pole> poles;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        Pole p;
        p.label = static_cast<int>(i) + 1;
        p.kind = PoleKind::bound;
        p.momentum = complex(0.0, roots[i]);
        p.energy = p.momentum * p.momentum / two_m;
        p.residual = std::abs(jost_outgoing(profile, p.momentum));
        poles.push_back(p);
    }
    return poles;
}

// Anti-resonance p_{-n} = -p_n^*, residual re-verified.
inline Pole mirror_pole(const PotentialProfile& profile, const Pole& pole)
{
    if (pole.kind != PoleKind::resonance)
        throw error(errc::bad_config, "mirror_pole requires a resonance");
    Pole m = pole;
    m.label = -pole.label;
    m.momentum = -std::conj(pole.momentum);
    m.energy = std::conj(pole.energy);
    m.residual = std::abs(jost_outgoing(profile, m.momentum));
    if (m.residual > 1e-8 * pole_residual_scale(profile, m.momentum))
        throw error(errc::mirror_residual_fail,
                    "mirror momentum is not a zero of the outgoing condition");
    return m;
}

} // namespace gamow
