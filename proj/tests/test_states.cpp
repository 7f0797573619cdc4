#include <catch2/catch_amalgamated.hpp>

#include "gamow/states.hpp"

using namespace gamow;
using Catch::Matchers::WithinAbs;

namespace {

// residual of psi'' = (u - p^2) psi by central finite differences
double ode_residual(const PlanewaveState& s, complex p, double x)
{
    const double h = 1e-4;
    complex dd = (s.value(x + h) - 2.0 * s.value(x) + s.value(x - h)) / (h * h);
    complex want = (s.profile.u_at(x) - p * p) * s.value(x);
    return std::abs(dd - want) / std::max(1.0, std::abs(want));
}

void check_c1(const PlanewaveState& s, double x, double tol = 1e-10)
{
    const double h = 1e-9;
    CAPTURE(x);
    // extrapolate both one-sided limits to x; any jump would survive
    complex lhs = s.value(x - h) + h * s.derivative(x - h);
    complex rhs = s.value(x + h) - h * s.derivative(x + h);
    REQUIRE(std::abs(lhs - rhs) < tol * std::max(1.0, std::abs(s.value(x))));
    REQUIRE(std::abs(s.derivative(x - h) - s.derivative(x + h)) <
            1e-5 * std::max(1.0, std::abs(s.derivative(x))));
}

} // namespace

TEST_CASE("outgoing Gamow state satisfies its boundary conditions and wave equation")
{
    auto prof = square_barrier(10.0, 1.0);
    auto pole = find_resonances(prof, 1).at(0);
    auto u = gamow_state(prof, pole);
    const complex p = pole.momentum;
    const complex i(0.0, 1.0);

    REQUIRE(u.family == Family::gamow_out);
    REQUIRE(u.momentum == p);
    // purely outgoing with T = 1: psi(L) = e^{ipL}, psi'(L) = ip psi(L)
    REQUIRE(std::abs(u.value(1.0) - std::exp(i * p)) < 1e-12 * std::abs(std::exp(i * p)));
    REQUIRE(std::abs(u.derivative(1.0) - i * p * u.value(1.0)) < 1e-10);
    REQUIRE(std::abs(u.derivative(0.0) + i * p * u.value(0.0)) < 1e-10);
    // frozen multiprecision boundary value
    REQUIRE(std::abs(u.value(0.0) - complex(-2.027133446226761061878, -1.55433445166598867715)) <
            1e-12);

    for (double x : {0.1, 0.35, 0.62, 0.93}) {
        CAPTURE(x);
        REQUIRE(ode_residual(u, p, x) < 1e-6);
    }
    for (double x : {-1.5, 3.0}) REQUIRE(ode_residual(u, p, x) < 1e-6);
    check_c1(u, 0.0);
    check_c1(u, 1.0);
    // the tails really grow (second-sheet signature)
    REQUIRE(std::abs(u.value(10.0)) > std::abs(u.value(2.0)));
    REQUIRE(std::abs(u.value(-10.0)) > std::abs(u.value(-2.0)));
}

TEST_CASE("multi-segment Gamow state is continuous at every junction")
{
    auto prof = build_profile({{0, 0.5, -20}, {0.5, 1.0, 15}});
    auto pole = find_resonances(prof, 1).at(0);
    auto u = gamow_state(prof, pole);
    check_c1(u, 0.0);
    check_c1(u, 0.5);
    check_c1(u, 1.0);
    for (double x : {0.2, 0.45, 0.55, 0.8}) REQUIRE(ode_residual(u, pole.momentum, x) < 1e-6);
}

TEST_CASE("incoming Gamow state shares the spatial function, reverses the label")
{
    auto prof = square_barrier(10.0, 1.0);
    auto pole = find_resonances(prof, 1).at(0);
    auto u = gamow_state(prof, pole, Direction::out);
    auto v = gamow_state(prof, pole, Direction::in);
    REQUIRE(v.family == Family::gamow_in);
    REQUIRE(v.momentum == -u.momentum);
    for (double x : {-2.0, 0.0, 0.3, 0.7, 1.0, 2.5})
        REQUIRE(u.value(x) == v.value(x));
}

TEST_CASE("mirror-pole state is the complex conjugate of the original")
{
    auto prof = square_barrier(10.0, 1.0);
    auto pole = find_resonances(prof, 2).at(1);
    auto mir = mirror_pole(prof, pole);
    auto u = gamow_state(prof, pole);
    auto um = gamow_state(prof, mir);
    REQUIRE(um.momentum == mir.momentum);
    for (double x : {-1.3, 0.0, 0.25, 0.6, 1.0, 1.9}) {
        CAPTURE(x);
        REQUIRE(std::abs(um.value(x) - std::conj(u.value(x))) <
                1e-11 * std::max(1.0, std::abs(u.value(x))));
    }
}

TEST_CASE("a non-pole momentum is rejected")
{
    auto prof = square_barrier(10.0, 1.0);
    Pole fake;
    fake.kind = PoleKind::resonance;
    fake.momentum = {4.0, -1.0};
    REQUIRE_THROWS_MATCHES(gamow_state(prof, fake), error,
                           Catch::Matchers::Predicate<error>(
                               [](const error& e) { return e.code() == errc::not_a_pole; }));
    Pole bnd;
    bnd.kind = PoleKind::bound;
    bnd.momentum = {0.0, 1.0};
    REQUIRE_THROWS_AS(gamow_state(prof, bnd), error);
    REQUIRE_THROWS_AS(bound_state(prof, fake), error);
}

TEST_CASE("bound state is real, decaying, and unit-normalized")
{
    auto prof = square_barrier(-25.0, 1.0);
    auto poles = find_bound_states(prof, 4.999);
    REQUIRE(poles.size() == 2);
    for (const auto& bp : poles) {
        auto phi = bound_state(prof, bp);
        REQUIRE(phi.family == Family::bound);
        const double q = bp.momentum.imag();

        // real up to rounding (construction through real propagators)
        for (double x : {-0.8, 0.2, 0.6, 1.5}) REQUIRE(std::abs(phi.value(x).imag()) < 1e-12);
        // exponential decay on both sides
        REQUIRE(std::abs(phi.value(-3.0)) < std::abs(phi.value(-1.0)));
        REQUIRE(std::abs(phi.value(4.0)) < std::abs(phi.value(2.0)));
        REQUIRE_THAT(std::abs(phi.value(-2.0) / phi.value(-1.0)), WithinAbs(std::exp(-q), 1e-9));

        // independent norm check: brute-force quadrature over a wide box
        double X = 40.0 / q;
        double norm2 = integrate_adaptive(
                           [&](double x) { return complex(std::norm(phi.value(x)), 0.0); }, -X,
                           X + 1.0, 1e-11, 40000)
                           .value.real();
        REQUIRE_THAT(norm2, WithinAbs(1.0, 1e-8));
        check_c1(phi, 0.0);
        check_c1(phi, 1.0);
    }
}

TEST_CASE("scattering state matches its amplitudes and conserves flux")
{
    auto prof = build_profile({{0, 0.4, 8}, {0.4, 1.0, -3}});
    const double p = 2.7;
    auto amp = scattering_amplitudes(prof, {p, 0.0}, Side::left);
    auto s = scattering_state(prof, p, Side::left);
    const complex i(0.0, 1.0);

    for (double x : {-2.0, -0.5}) {
        complex want = std::exp(i * p * x) + amp.R * std::exp(-i * p * x);
        REQUIRE(std::abs(s.value(x) - want) < 1e-12);
    }
    for (double x : {1.0, 2.5}) {
        complex want = amp.T * std::exp(i * p * x);
        REQUIRE(std::abs(s.value(x) - want) < 1e-11);
    }
    check_c1(s, 0.0);
    check_c1(s, 0.4);
    check_c1(s, 1.0);
    for (double x : {0.2, 0.7}) REQUIRE(ode_residual(s, {p, 0.0}, x) < 1e-6);

    auto sr = scattering_state(prof, p, Side::right);
    for (double x : {-1.0, 0.5, 2.0}) REQUIRE(std::isfinite(std::abs(sr.value(x))));
    REQUIRE(std::abs(sr.value(2.0) -
                     (std::exp(-i * p * 2.0) +
                      scattering_amplitudes(prof, {p, 0.0}, Side::right).R * std::exp(i * p * 2.0))) <
            1e-11);

    REQUIRE_THROWS_AS(scattering_state(prof, 0.0), error);
    REQUIRE_THROWS_AS(scattering_state(prof, -2.0), error);
}

TEST_CASE("boundary-data overlap equals direct quadrature")
{
    auto prof = square_barrier(10.0, 1.0);
    auto poles = find_resonances(prof, 2);
    auto u1 = gamow_state(prof, poles[0]);
    auto u2 = gamow_state(prof, poles[1]);

    for (bool conj : {false, true}) {
        complex got = interior_overlap_boundary(u1, u2, conj);
        complex want = integrate_adaptive(
                           [&](double x) {
                               complex a = u1.value(x);
                               if (conj) a = std::conj(a);
                               return a * u2.value(x);
                           },
                           0.0, 1.0, 1e-13)
                           .value;
        CAPTURE(conj);
        REQUIRE(std::abs(got - want) < 1e-10 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("degenerate-energy overlap is refused")
{
    auto prof = square_barrier(10.0, 1.0);
    auto pole = find_resonances(prof, 1).at(0);
    auto u = gamow_state(prof, pole);
    REQUIRE_THROWS_MATCHES(interior_overlap_boundary(u, u, false), error,
                           Catch::Matchers::Predicate<error>([](const error& e) {
                               return e.code() == errc::degenerate_energies;
                           }));
}

TEST_CASE("profile mismatch between states is refused")
{
    auto p1 = square_barrier(10.0, 1.0);
    auto p2 = square_barrier(-25.0, 1.0);
    auto u = gamow_state(p1, find_resonances(p1, 1).at(0));
    auto v = gamow_state(p2, find_resonances(p2, 1).at(0));
    REQUIRE_THROWS_MATCHES(interior_overlap_boundary(u, v), error,
                           Catch::Matchers::Predicate<error>([](const error& e) {
                               return e.code() == errc::profile_mismatch;
                           }));
}

TEST_CASE("Zel'dovich norm is interval-independent and matches the frozen value")
{
    auto prof = square_barrier(10.0, 1.0);
    auto pole = find_resonances(prof, 1).at(0);
    auto u = gamow_state(prof, pole);

    complex n0 = zeldovich_norm(u, 0.0, 1.0);
    // multiprecision reference over [0, L]
    REQUIRE(std::abs(n0 - complex(4.050545003479510072059, -0.8528020681469336940337)) < 1e-11);
    for (auto [a, b] : std::vector<std::pair<double, double>>{{-2.0, 3.0}, {-0.7, 1.0}, {0.0, 5.5}}) {
        CAPTURE(a, b);
        REQUIRE(std::abs(zeldovich_norm(u, a, b) - n0) < 1e-9 * std::abs(n0));
    }
    REQUIRE_THROWS_AS(zeldovich_norm(u, 0.5, 2.0), error);  // a > 0
    REQUIRE_THROWS_AS(zeldovich_norm(u, -1.0, 0.5), error); // b < L
    auto v = gamow_state(prof, pole, Direction::in);
    REQUIRE_THROWS_AS(zeldovich_norm(v, 0.0, 1.0), error);
}
