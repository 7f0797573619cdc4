#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "gamow/states.hpp"

namespace gamow {

enum class ProductKind { standard, symmetric };
enum class Prescription { zeldovich, romo };

inline const char* product_kind_name(ProductKind k)
{
    return k == ProductKind::standard ? "standard" : "symmetric";
}

inline const char* prescription_name(Prescription p)
{
    return p == Prescription::zeldovich ? "zeldovich" : "romo";
}

// One half-line contribution coeff * int e^{ikx} dx.
struct PairTerm {
    complex coeff;
    complex k;
};

// Splitting of a full-line product into half-line exponentials plus a
// finite [0, L] remainder: left-tail products folded by x -> -x, the
// right-tail int_L^inf rewritten as int_0^inf minus int_0^L with the
// subtraction absorbed into finite_part (the cancellation structure of
// the resonance-pair product).
struct TailTermDecomposition {
    std::vector<PairTerm> terms;       // merged, for the lambda -> 0 classification
    std::vector<PairTerm> left_pairs;  // exact int_0^inf pieces at finite lambda
    std::vector<PairTerm> right_pairs; // exact int_L^inf pieces at finite lambda
    complex finite_part{0.0, 0.0};
    bool finite_part_by_quadrature = false;
};

enum class VerdictKind { Zero, Finite, Divergent, Distributional, Marginal };

inline const char* verdict_kind_name(VerdictKind k)
{
    switch (k) {
        case VerdictKind::Zero:           return "Zero";
        case VerdictKind::Finite:         return "Finite";
        case VerdictKind::Divergent:      return "Divergent";
        case VerdictKind::Distributional: return "Distributional";
        case VerdictKind::Marginal:       return "Marginal";
    }
    return "?";
}

struct TermVerdict {
    complex k;
    TailKind kind;
};

// Classification of the lambda -> 0 limit of a regularized product.
struct ProductVerdict {
    VerdictKind kind;
    complex value{0.0, 0.0};       // Finite only
    double rate_coefficient = 0.0; // Divergent only: coefficient of 1/lambda in ln|v|
    std::vector<TermVerdict> per_term;
    Prescription prescription = Prescription::zeldovich;
};

// Relative threshold below which the analytic sum of Finite terms is
// declared Zero, overridable at runtime (CLI: GAMOW_ZERO_TOL).
inline double& zero_threshold()
{
    static double tol = 1e-9;
    return tol;
}

namespace detail {

inline std::vector<TailTerm> effective_tail(const std::vector<TailTerm>& tail, bool conjugate)
{
    if (!conjugate) return tail;
    std::vector<TailTerm> out;
    out.reserve(tail.size());
    for (const auto& t : tail) out.push_back({std::conj(t.coeff), -std::conj(t.k)});
    return out;
}

inline complex eval_effective(const PlanewaveState& s, double x, bool conjugate)
{
    complex v = s.value(x);
    return conjugate ? std::conj(v) : v;
}

inline void merge_term(std::vector<PairTerm>& terms, complex coeff, complex k)
{
    for (auto& t : terms) {
        if (std::abs(t.k - k) < 1e-9 * std::max(1.0, std::abs(k))) {
            t.coeff += coeff;
            return;
        }
    }
    terms.push_back({coeff, k});
}

} // namespace detail

inline TailTermDecomposition tail_decomposition(const PlanewaveState& a, const PlanewaveState& b,
                                                ProductKind kind)
{
    if (!a.profile.same_as(b.profile))
        throw error(errc::profile_mismatch, "states built on different profiles");
    const bool conj_a = (kind == ProductKind::standard);
    const double L = a.profile.support_end();
    const complex i(0.0, 1.0);

    TailTermDecomposition d;
    auto left_a = detail::effective_tail(a.left_tail, conj_a);
    auto right_a = detail::effective_tail(a.right_tail, conj_a);

    // left: int_-inf^0 e^{i(ka+kb)x} --(x -> -x)--> int_0^inf e^{-i(ka+kb)x}
    for (const auto& ta : left_a)
        for (const auto& tb : b.left_tail)
            detail::merge_term(d.left_pairs, ta.coeff * tb.coeff, -(ta.k + tb.k));
    // right: int_L^inf e^{ikx}, kept unshifted
    for (const auto& ta : right_a)
        for (const auto& tb : b.right_tail)
            detail::merge_term(d.right_pairs, ta.coeff * tb.coeff, ta.k + tb.k);

    for (const auto& t : d.left_pairs) detail::merge_term(d.terms, t.coeff, t.k);
    for (const auto& t : d.right_pairs) detail::merge_term(d.terms, t.coeff, t.k);

    // finite part: int_0^L (a~ b) minus the int_0^L extension of each
    // right-tail exponential
    try {
        d.finite_part = interior_overlap_boundary(a, b, conj_a);
    } catch (const error& e) {
        if (e.code() != errc::degenerate_energies) throw;
        d.finite_part = integrate_adaptive(
                            [&](double x) {
                                return detail::eval_effective(a, x, conj_a) * b.value(x);
                            },
                            0.0, L, 1e-12)
                            .value;
        d.finite_part_by_quadrature = true;
    }
    for (const auto& t : d.right_pairs) {
        complex k = t.k;
        if (std::abs(k) < 1e-14)
            d.finite_part -= t.coeff * L;
        else
            d.finite_part -= t.coeff * (std::exp(i * k * L) - 1.0) / (i * k);
    }
    return d;
}

// Full-line regularized product int e^{-lambda x^2} (a or a^*) b dx.
// Tail pieces are exact closed forms (the right tail keeps its
// 2 i lambda L exponent shift); the interior goes through adaptive
// quadrature with the Gaussian weight.
inline LogComplex product_regularized(const PlanewaveState& a, const PlanewaveState& b,
                                      ProductKind kind, double lambda)
{
    if (!(lambda > 0.0)) throw error(errc::bad_config, "lambda must be positive");
    auto d = tail_decomposition(a, b, kind);
    const bool conj_a = (kind == ProductKind::standard);
    const double L = a.profile.support_end();

    std::vector<LogComplex> pieces;
    for (const auto& t : d.left_pairs) pieces.push_back(gaussian_tail_integral(t.coeff, t.k, 0.0, lambda));
    for (const auto& t : d.right_pairs) pieces.push_back(gaussian_tail_integral(t.coeff, t.k, L, lambda));
    complex interior = integrate_adaptive(
                           [&](double x) {
                               return std::exp(-lambda * x * x) *
                                      detail::eval_effective(a, x, conj_a) * b.value(x);
                           },
                           0.0, L, 1e-13)
                           .value;
    pieces.push_back(LogComplex::from(interior));
    return log_sum(pieces);
}

inline ProductVerdict product_limit(const PlanewaveState& a, const PlanewaveState& b,
                                    ProductKind kind,
                                    Prescription prescription = Prescription::zeldovich)
{
    auto d = tail_decomposition(a, b, kind);
    ProductVerdict v;
    v.prescription = prescription;

    auto finite_sum = [&](bool romo) {
        complex sum = d.finite_part;
        double scale = std::abs(d.finite_part);
        for (const auto& t : d.terms) {
            if (romo && std::abs(t.k) < 1e-14)
                throw error(errc::romo_zero_momentum, "Romo prescription undefined for k = 0");
            complex piece = t.coeff * complex(0.0, 1.0) / t.k;
            sum += piece;
            scale = std::max(scale, std::abs(piece));
        }
        if (std::abs(sum) < zero_threshold() * std::max(scale, 1e-300)) {
            v.kind = VerdictKind::Zero;
        } else {
            v.kind = VerdictKind::Finite;
            v.value = sum;
        }
    };

    if (prescription == Prescription::romo) {
        for (const auto& t : d.terms) v.per_term.push_back({t.k, TailKind::Finite});
        finite_sum(true);
        return v;
    }

    bool any_divergent = false, any_marginal = false, any_distributional = false;
    double rate = 0.0;
    for (const auto& t : d.terms) {
        TailVerdict tv = j_limit(t.k);
        v.per_term.push_back({t.k, tv.kind});
        switch (tv.kind) {
            case TailKind::Divergent:
                any_divergent = true;
                rate = std::max(rate, std::abs((t.k * t.k).real()) / 4.0);
                break;
            case TailKind::Marginal:        any_marginal = true; break;
            case TailKind::Distributional:  any_distributional = true; break;
            case TailKind::Finite:          break;
        }
    }
    if (any_marginal) {
        v.kind = VerdictKind::Marginal; // no limit claimed on boundary rays
    } else if (any_divergent) {
        v.kind = VerdictKind::Divergent;
        v.rate_coefficient = rate;
    } else if (any_distributional) {
        v.kind = VerdictKind::Distributional;
    } else {
        finite_sum(false);
    }
    return v;
}

// Geometric rule behind the cone maps; alias of the tail-limit
// classification.
inline TailVerdict cone_classify(complex k) { return j_limit(k); }

struct SweepRecord {
    std::vector<double> schedule;
    std::vector<LogComplex> values;
    VerdictKind verdict;
    double fitted_decay_slope = std::numeric_limits<double>::quiet_NaN();      // Zero verdicts
    double fitted_growth_coefficient = std::numeric_limits<double>::quiet_NaN(); // Divergent verdicts
};

inline SweepRecord lambda_sweep(const PlanewaveState& a, const PlanewaveState& b, ProductKind kind,
                                const std::vector<double>& schedule)
{
    if (schedule.empty()) throw error(errc::bad_config, "empty lambda schedule");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (!(schedule[i] > 0.0)) throw error(errc::bad_config, "lambda schedule must be positive");
        if (i > 0 && !(schedule[i] < schedule[i - 1]))
            throw error(errc::bad_config, "lambda schedule must be strictly descending");
    }
    SweepRecord rec;
    rec.schedule = schedule;
    for (double lam : schedule) rec.values.push_back(product_regularized(a, b, kind, lam));
    rec.verdict = product_limit(a, b, kind).kind;

    auto fit = [&](auto xs_of) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (std::size_t i = 0; i < schedule.size(); ++i) {
            if (rec.values[i].is_zero()) continue;
            double x = xs_of(schedule[i]);
            double y = rec.values[i].log10_mag * ln10; // ln |v|
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++n;
        }
        if (n < 2) return std::numeric_limits<double>::quiet_NaN();
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    if (rec.verdict == VerdictKind::Zero)
        rec.fitted_decay_slope = fit([](double lam) { return std::log(lam); });
    else if (rec.verdict == VerdictKind::Divergent)
        rec.fitted_growth_coefficient = fit([](double lam) { return 1.0 / lam; });
    return rec;
}

} // namespace gamow
