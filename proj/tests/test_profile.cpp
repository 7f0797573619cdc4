#include <catch2/catch_amalgamated.hpp>

#include "gamow/profile.hpp"

using namespace gamow;

TEST_CASE("single segment square barrier")
{
    auto p = build_profile({{0, 1, 10}});
    REQUIRE(p.support_end() == 1.0);
    REQUIRE(p.segments().size() == 1);
    REQUIRE(p.u_at(0.5) == 10.0);
}

TEST_CASE("gap between segments is rejected")
{
    REQUIRE_THROWS_MATCHES(build_profile({{0, 0.5, 10}, {0.7, 1, 10}}), error,
                           Catch::Matchers::Predicate<error>([](const error& e) {
                               return e.code() == errc::gap_or_overlap;
                           }));
}

TEST_CASE("wells are allowed")
{
    auto p = build_profile({{0, 1, -25}});
    REQUIRE(p.u_at(0.5) == -25.0);
    REQUIRE(p.support_end() == 1.0);
}

TEST_CASE("square_barrier constructors")
{
    auto ref1 = square_barrier(10, 1);
    REQUIRE(ref1.segments().size() == 1);
    REQUIRE(ref1.u_at(0.2) == 10.0);

    auto free = square_barrier(0, 1);
    REQUIRE(free.u_at(0.5) == 0.0);

    auto ref2 = square_barrier(-25, 1);
    REQUIRE(ref2.u_at(0.99) == -25.0);

    REQUIRE_THROWS_AS(square_barrier(10, 0), error);
    REQUIRE_THROWS_AS(square_barrier(10, -2), error);
}

TEST_CASE("non-finite values rejected")
{
    REQUIRE_THROWS_MATCHES(build_profile({{0, 1, std::nan("")}}), error,
                           Catch::Matchers::Predicate<error>([](const error& e) {
                               return e.code() == errc::nonfinite_value;
                           }));
}

TEST_CASE("build then read back is the identity")
{
    std::vector<Segment> segs = {{0, 0.25, 3.5}, {0.25, 0.75, -2.0}, {0.75, 2.0, 7.0}};
    auto p = build_profile(segs);
    REQUIRE(p.segments().size() == segs.size());
    for (std::size_t i = 0; i < segs.size(); ++i) {
        REQUIRE(p.segments()[i].x_lo == segs[i].x_lo);
        REQUIRE(p.segments()[i].x_hi == segs[i].x_hi);
        REQUIRE(p.segments()[i].u == segs[i].u);
    }
    REQUIRE(p.support_end() == 2.0);
}

TEST_CASE("potential is exactly zero outside the support")
{
    auto p = build_profile({{0, 1, 10}, {1, 2, -3}});
    for (double x : {-10.0, -0.001, 2.0001, 5.0, 1e6}) REQUIRE(p.u_at(x) == 0.0);
}
