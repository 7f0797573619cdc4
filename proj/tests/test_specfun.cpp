#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gamow/quad.hpp"
#include "gamow/specfun.hpp"

using namespace gamow;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Independent Maclaurin oracle in long double, usable for |z| <~ 3
// where cancellation stays mild.
complex oracle_w(complex z)
{
    std::complex<long double> iz(-(long double)z.imag(), (long double)z.real());
    std::complex<long double> iz2 = iz * iz;
    const long double sqrt_pi_l = 1.7724538509055160272981674833411452L;
    std::complex<long double> even = 1.0L;
    std::complex<long double> odd = iz * (2.0L / sqrt_pi_l);
    std::complex<long double> sum = even + odd;
    for (int k = 1; k < 200; ++k) {
        even *= iz2 / (long double)k;
        odd *= iz2 / ((long double)k + 0.5L);
        sum += even + odd;
        if (std::abs(even) < 1e-30L && std::abs(odd) < 1e-30L) break;
    }
    return {(double)sum.real(), (double)sum.imag()};
}

void check_rel(complex got, complex want, double tol)
{
    CAPTURE(got, want);
    REQUIRE(std::abs(got - want) <= tol * std::abs(want));
}

} // namespace

TEST_CASE("faddeeva matches multiprecision reference points")
{
    // reference values computed with 40-digit arithmetic from
    // w(z) = e^{-z^2} erfc(-iz)
    check_rel(faddeeva({1, 1}), {0.30474420525691259246, 0.20821893820283162729}, 1e-13);
    check_rel(faddeeva({3, 0.1}), {0.0079426809987699907004, 0.20074234309867737198}, 1e-13);
    check_rel(faddeeva({5, -0.5}), {-0.011900325512477151915, 0.11397271859768673676}, 1e-13);
    check_rel(faddeeva({6.3, 0.01}), {0.000147893038913394244, 0.090727415163492762421}, 1e-13);
    check_rel(faddeeva({0.5, -2}), {-35.635303512001889054, 77.380142375345434942}, 1e-13);
    check_rel(faddeeva({10, 10}), {0.02827946745423245666, 0.028138433276336895631}, 1e-13);
    check_rel(faddeeva({25, 0}), {3.6808558548018006028e-272, 0.022585680912640473204}, 1e-13);
    check_rel(faddeeva({-4, 2}), {0.059686929610445898951, -0.11321005612448819575}, 1e-13);
    check_rel(faddeeva({0, 3}), {0.17900115118138995042, 0.0}, 1e-13);
    check_rel(faddeeva({2, -0.3}), {-0.061872289749043689079, 0.34718816772400709629}, 1e-13);
}

TEST_CASE("faddeeva special values")
{
    REQUIRE_THAT(faddeeva({0, 0}).real(), WithinAbs(1.0, 1e-15));
    REQUIRE_THAT(faddeeva({0, 0}).imag(), WithinAbs(0.0, 1e-15));
    // purely imaginary argument gives a real value
    REQUIRE_THAT(faddeeva({0, 1.5}).imag(), WithinAbs(0.0, 1e-15));
}

TEST_CASE("faddeeva agrees with the long-double series oracle at moderate arguments")
{
    std::mt19937 rng(20240501);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 500; ++i) {
        complex z(u(rng), u(rng));
        complex got = faddeeva(z);
        complex want = oracle_w(z);
        CAPTURE(z);
        REQUIRE(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("faddeeva reflection identity w(z) + w(-z) = 2 e^{-z^2}")
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    for (int i = 0; i < 500; ++i) {
        complex z(u(rng), u(rng));
        complex lhs = faddeeva(z) + faddeeva(-z);
        complex rhs = 2.0 * std::exp(-z * z);
        CAPTURE(z);
        REQUIRE(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("faddeeva conjugate symmetry w(conj(-z)) = conj(w(z))")
{
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int i = 0; i < 2000; ++i) {
        complex z(u(rng), std::abs(u(rng)));
        complex a = faddeeva(std::conj(-z));
        complex b = std::conj(faddeeva(z));
        CAPTURE(z);
        REQUIRE(std::abs(a - b) <= 1e-12 * std::max(1e-300, std::abs(b)));
    }
}

TEST_CASE("faddeeva throws Overflow when the reflection term exceeds double range")
{
    REQUIRE_THROWS_MATCHES(faddeeva({0.5, -40.0}), error,
                           Catch::Matchers::Predicate<error>(
                               [](const error& e) { return e.code() == errc::overflow; }));
}

TEST_CASE("big_F reference points")
{
    check_rel(big_F({1, 0.5}).value(), {0.80617444943656991521, 0.12126172094708484094}, 1e-13);
    check_rel(big_F({50, 0}).value(), {0.99980011988016769826, 0.0}, 1e-13);
    check_rel(big_F({3, -4}).value(), {1.0045078860666930848, -0.019751952539469765324}, 1e-13);
    check_rel(big_F({-2, 1}).value(), {40.134641085124580327, -154.36867952085071847}, 1e-13);
    check_rel(big_F({0.1, 0.1}).value(), {0.17419857476857122217, 0.14075887513281914458}, 1e-13);
}

TEST_CASE("big_F is an exact zero at the origin and survives huge growth in log form")
{
    REQUIRE(big_F({0, 0}).is_zero());
    // F(-50): |F| ~ 2 sqrt(pi) 50 e^{2500}, far beyond double range
    LogComplex f = big_F({-50, 0});
    REQUIRE_THAT(f.log10_mag, WithinAbs(1087.9847796944766361, 1e-9));
    REQUIRE_THAT(std::remainder(f.phase - pi, 2 * pi), WithinAbs(0.0, 1e-9));
    REQUIRE_THROWS_AS(f.value(), error);
}

TEST_CASE("big_F agrees with the series oracle in both half-planes at moderate size")
{
    std::mt19937 rng(31337);
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    for (int i = 0; i < 400; ++i) {
        complex zeta(u(rng), u(rng));
        if (std::abs(zeta) < 1e-3) continue;
        // F = sqrt(pi) zeta w(i zeta), via the oracle series
        complex want = sqrt_pi * zeta * oracle_w(complex(-zeta.imag(), zeta.real()));
        complex got = big_F(zeta).value();
        CAPTURE(zeta);
        REQUIRE(std::abs(got - want) <= 1e-11 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("big_F sector limit: approaches 1 inside |arg zeta| < 3pi/4, blows up outside")
{
    for (double R : {20.0, 50.0, 100.0}) {
        for (double frac : {0.0, 0.3, -0.3, 0.6, -0.6, 0.74, -0.74}) {
            double phi = frac * pi;
            complex zeta = std::polar(R, phi);
            LogComplex f = big_F(zeta);
            CAPTURE(R, frac);
            REQUIRE(std::abs(f.value() - 1.0) <= 1.0 / (R * R));
        }
        for (double frac : {0.82, -0.82, 0.95, -0.95}) {
            complex zeta = std::polar(R, frac * pi);
            LogComplex f = big_F(zeta);
            CAPTURE(R, frac);
            // growth e^{Re zeta^2}: at least e^{0.4 R^2}
            REQUIRE(f.log10_mag > 0.4 * R * R / ln10);
        }
    }
}

TEST_CASE("big_F_asymptotic partial sums")
{
    REQUIRE(big_F_asymptotic({10, 0}, 0).value == complex(1.0, 0.0));
    REQUIRE_THAT(big_F_asymptotic({10, 0}, 1).value.real(), WithinRel(0.995, 1e-15));
    // truncation error bounded by the first omitted term: 105/(2 zeta^2)^4
    complex exact = big_F({10, 0}).value();
    complex approx = big_F_asymptotic({10, 0}, 3).value;
    REQUIRE(std::abs(exact - approx) < 1e-7);
    REQUIRE_FALSE(big_F_asymptotic({10, 0}, 3).domain_warning);
    REQUIRE(big_F_asymptotic({-10, 0}, 3).domain_warning);
    REQUIRE(big_F_asymptotic({-1, 1}, 3).domain_warning); // arg = 3pi/4 exactly
}

TEST_CASE("j_regularized reference points")
{
    check_rel(j_regularized({0, 1}, 1e-8), {0.9999999800000012, 0.0}, 1e-12);
    REQUIRE_THAT(j_regularized({0, 0}, 0.25).real(), WithinRel(sqrt_pi, 1e-14));
    check_rel(j_regularized({3, -0.2}, 0.1), {-0.023773773050235999703, 0.33958879942779921077},
              1e-12);
    check_rel(j_regularized({2, 1}, 0.5), {0.28499020408651991657, 0.36541304399536501043}, 1e-12);
    check_rel(j_regularized({-1, 3}, 0.01), {0.29963987939742013113, -0.09948376266081987109},
              1e-12);
}

TEST_CASE("j_regularized agrees with direct truncated quadrature where representable")
{
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> kre(-4.0, 4.0), kim(-1.0, 3.0), lam(0.3, 2.0);
    for (int i = 0; i < 60; ++i) {
        complex k(kre(rng), kim(rng));
        double lambda = lam(rng);
        // truncate where the Gaussian kills the integrand
        double X = std::sqrt(80.0 / lambda) + std::abs(k.imag()) / lambda;
        complex direct =
            integrate_adaptive([&](double x) { return std::exp(complex(-lambda * x * x, 0.0) +
                                                               complex(0.0, 1.0) * k * x); },
                               0.0, X, 1e-13, 40000)
                .value;
        complex got = j_regularized(k, lambda);
        CAPTURE(k, lambda);
        REQUIRE(std::abs(got - direct) <= 1e-9 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("j_regularized approaches i/k at rate O(lambda) inside the convergence sector")
{
    complex k(0.0, 2.0);
    complex limit = complex(0.0, 1.0) / k;
    double prev = 0.0;
    std::vector<double> lams = {1e-3, 1e-4, 1e-5};
    std::vector<double> errs;
    for (double lam : lams) errs.push_back(std::abs(j_regularized(k, lam) - limit));
    // consecutive ratios ~ 10 (slope 1 in log-log)
    for (std::size_t i = 1; i < errs.size(); ++i) {
        double slope = std::log10(errs[i - 1] / errs[i]);
        REQUIRE_THAT(slope, WithinAbs(1.0, 0.05));
    }
    (void)prev;
}

TEST_CASE("j_limit sector classification")
{
    REQUIRE(j_limit({0, 0}).kind == TailKind::Divergent);
    REQUIRE(j_limit({1, 0}).kind == TailKind::Distributional);
    REQUIRE(j_limit({-2, 0}).kind == TailKind::Distributional);
    REQUIRE(j_limit({0, 1}).kind == TailKind::Finite);
    REQUIRE(j_limit({1, 1e-3}).kind == TailKind::Finite);
    REQUIRE(j_limit({-1, 0.5}).kind == TailKind::Finite);
    REQUIRE(j_limit({0, -1}).kind == TailKind::Divergent);
    REQUIRE(j_limit({-0.01, -1}).kind == TailKind::Divergent);
    REQUIRE(j_limit({1, -1}).kind == TailKind::Marginal);
    REQUIRE(j_limit({-1, -1}).kind == TailKind::Marginal);

    auto fin = j_limit({0, 2});
    REQUIRE_THAT(std::abs(fin.value - complex(0.5, 0.0)), WithinAbs(0.0, 1e-15));
}

TEST_CASE("faddeeva_zeta_of maps momentum to the erfc argument")
{
    complex z = faddeeva_zeta_of({2, 0}, 1.0);
    REQUIRE_THAT(z.real(), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(z.imag(), WithinAbs(-1.0, 1e-15));
}
