#include <doctest.h>

#include <cmath>
#include <numbers>

#include "icdecay/legendre.hpp"

using namespace icdecay;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_SUITE("legendre")
{
    TEST_CASE("low orders match closed forms")
    {
        CHECK(legendre_exact(0, Angle(1.234)) == 1.0);
        CHECK(legendre_exact(1, Angle(pi / 3.0)) == Approx(0.5).epsilon(1e-15));
        CHECK(legendre_exact(2, Angle(pi / 2.0)) == Approx(-0.5).epsilon(1e-15));
        CHECK(legendre_exact(14, Angle(0.0)) == 1.0);

        for (int i = 0; i <= 100; ++i)
        {
            const double t = pi * i / 100.0;
            const double x = std::cos(t);
            CHECK(std::abs(legendre_exact(0, Angle(t)) - 1.0) < 1e-14);
            CHECK(std::abs(legendre_exact(1, Angle(t)) - x) < 1e-14);
            CHECK(std::abs(legendre_exact(2, Angle(t)) - (3 * x * x - 1) / 2) < 1e-14);
            CHECK(std::abs(legendre_exact(3, Angle(t)) - (5 * x * x * x - 3 * x) / 2) < 1e-14);
        }
    }

    TEST_CASE("bounded by one on a fine grid")
    {
        double worst = 0.0;
        for (int j = 0; j <= 50; ++j)
            for (int i = 0; i < 1000; ++i)
                worst = std::max(worst, std::abs(legendre_exact(j, Angle(2.0 * pi * i / 1000.0))));
        CHECK(worst <= 1.0 + 1e-12);
    }

    TEST_CASE("parity under theta -> pi - theta")
    {
        for (int j = 0; j <= 40; ++j)
            for (double t : {0.1, 0.7, 1.3, 2.2, 3.0})
            {
                const double sign = j % 2 ? -1.0 : 1.0;
                CHECK(std::abs(legendre_exact(j, Angle(pi - t)) - sign * legendre_exact(j, Angle(t))) < 1e-12);
            }
    }

    TEST_CASE("angles past pi fold back")
    {
        CHECK(Angle(1.5 * pi).reduced() == Approx(0.5 * pi));
        CHECK(Angle(0.25).reduced() == 0.25);
        CHECK(legendre_exact(7, Angle(2.0 * pi - 0.4)) == Approx(legendre_exact(7, Angle(0.4))).epsilon(1e-13));
    }

    TEST_CASE("table agrees with single evaluations")
    {
        const auto tab = legendre_table(29, Angle(1.1));
        REQUIRE(tab.size() == 30);
        for (int j = 0; j <= 29; ++j)
            CHECK(tab[j] == legendre_exact(j, Angle(1.1)));
    }

    TEST_CASE("asymptotic form")
    {
        const double exact = legendre_exact(14, Angle(pi / 2.0));
        const auto asym = legendre_asymptotic(14, Angle(pi / 2.0));
        CHECK(asym.valid);
        CHECK(std::abs(asym.value - exact) <= 0.02 * std::abs(exact));

        CHECK_FALSE(legendre_asymptotic(14, Angle(0.01)).valid);
        CHECK_FALSE(std::isfinite(legendre_asymptotic(14, Angle(0.0)).value));

        // P_1 vanishes at pi/2 and so does the large-J form
        CHECK(std::abs(legendre_asymptotic(1, Angle(pi / 2.0)).value) < 1e-12);
        CHECK(legendre_asymptotic(1, Angle(pi / 2.0 - 0.2)).value > 0.0);
        CHECK(legendre_asymptotic(1, Angle(pi / 2.0 + 0.2)).value < 0.0);
    }

    TEST_CASE("asymptotic error shrinks like J^-3/2")
    {
        // fitted maximum was 9.60 over J = 10..50
        constexpr double c_frozen = 10.0;
        for (int j = 10; j <= 50; ++j)
            for (int i = 0; i <= 400; ++i)
            {
                const double t = 2.0 / j + (pi - 4.0 / j) * i / 400.0;
                const double err = std::abs(legendre_asymptotic(j, Angle(t)).value - legendre_exact(j, Angle(t)));
                CHECK(err <= c_frozen / std::pow(j, 1.5));
            }
    }

    TEST_CASE("validity window")
    {
        CHECK(asymptotic_validity(14, Angle(pi / 2.0)));
        CHECK_FALSE(asymptotic_validity(14, Angle(0.05)));
        CHECK_FALSE(asymptotic_validity(14, Angle(pi - 0.05)));
        CHECK_FALSE(asymptotic_validity(14, Angle(2.0 * pi - 0.05)));
        CHECK_FALSE(asymptotic_validity(0, Angle(1.0)));
    }
}
