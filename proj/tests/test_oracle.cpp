#include <doctest.h>

#include <cmath>
#include <numbers>

#include "icdecay/oracle.hpp"

using namespace icdecay;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;

double window_sum_sq(const ModelParams& p, Angle th)
{
    double s = 0.0;
    for (int j = p.j_min; j <= p.j_max; ++j)
    {
        const double l = legendre_exact(j, th);
        s += spin_window(j, p) * l * l;
    }
    return s;
}
} // namespace

TEST_SUITE("oracle")
{
    TEST_CASE("reduced sum equals the direct double sum")
    {
        const ResonanceSpectrum spec{0.002, 0.3, 0.0};
        REQUIRE(spec.levels() == 150);
        const std::vector<double> taus = {0.0, 1.0, 5.0, 20.0, 75.0};
        for (int dj : {1, -2})
        {
            const double centre = 0.013 * dj;
            const double beta = 0.01;
            const auto fast = reduced_pair_sum(spec, dj, centre, beta, taus);
            const auto e = spec.energies();
            const long long n = spec.levels();
            for (std::size_t k = 0; k < taus.size(); ++k)
            {
                // mu over the window, nu over the fence within |mu - nu| < N
                std::complex<double> direct;
                double scale = 0.0;
                for (long long mu = 0; mu < n; ++mu)
                    for (long long nu = mu - (n - 1); nu <= mu + (n - 1); ++nu)
                    {
                        const double de = e[mu] - (spec.e0 + static_cast<double>(nu) * spec.spacing);
                        const double c = lorentz_correlator(dj, centre, spec.spacing, beta, de);
                        direct += std::polar(c, -de * taus[k]);
                        scale += c;
                    }
                direct /= static_cast<double>(n);
                scale /= static_cast<double>(n);
                CHECK(std::abs(fast[k] - direct) <= 1e-12 * scale);
            }
        }
        const auto diag = reduced_pair_sum(spec, 0, 0.0, 0.01, taus);
        for (auto z : diag)
            CHECK(z == std::complex<double>(1.0, 0.0));
    }

    TEST_CASE("single spin pair reproduces the exponential")
    {
        const auto p = ModelParams::c12_mg24();
        const ResonanceSpectrum spec{p.beta / 100, 500 * p.beta, 0.0};
        const std::vector<double> taus = {0.5, 2.0, 5.0, 20.0};
        // J' = J + 1: the correlator is centred at -hbar omega
        const auto sums = reduced_pair_sum(spec, -1, -p.hbar_omega, p.beta, taus);
        for (std::size_t k = 0; k < taus.size(); ++k)
        {
            const auto expect = std::polar(std::exp(-p.beta * taus[k]), p.hbar_omega * taus[k]);
            CHECK(std::abs(sums[k] - expect) <= 0.01 * std::abs(expect));
        }
    }

    TEST_CASE("diagonal-only sum does not depend on D")
    {
        const auto p = ModelParams::c12_mg24();
        const auto s = DephasingScenario::rmt();
        const Time t = 0.3 * rotation_period(p);
        for (double D : {p.beta / 50, p.beta / 80})
        {
            const auto spec = ResonanceSpectrum::for_model(p, s, D);
            for (double th : {0.0, 1.0, 2.5})
                CHECK(eq1_intensity(t, Angle(th), spec, p, s) ==
                      Approx(std::exp(-p.gamma * t.inv_mev()) * window_sum_sq(p, Angle(th))).epsilon(1e-13));
        }
    }

    TEST_CASE("causal and validated")
    {
        const auto p = ModelParams::c12_mg24();
        const auto s = DephasingScenario::coherent();
        const auto spec = ResonanceSpectrum::for_model(p, s, p.beta / 50);
        CHECK(eq1_intensity(Time::inv_mev(-1.0), Angle(0.0), spec, p) == 0.0);

        ResonanceSpectrum narrow = spec;
        narrow.span = 10.0;
        CHECK_THROWS_AS(validate_spectrum(narrow, p, s), InvalidParameters);
        ResonanceSpectrum coarse = spec;
        coarse.spacing = p.beta / 10;
        CHECK_THROWS_AS(validate_spectrum(coarse, p, s), InvalidParameters);
        CHECK_NOTHROW(validate_spectrum(coarse, p, s, SpectrumChecks::span_only));
        ResonanceSpectrum empty{0.0, 1.0, 0.0};
        CHECK_THROWS_AS(validate_spectrum(empty, p, s, SpectrumChecks::none), InvalidParameters);
    }

    TEST_CASE("oracle matches the closed form on a small window")
    {
        ModelParams p = ModelParams::c12_mg24();
        p.I_avg = 4.0;
        p.d = 1.0;
        p.set_default_window();
        const auto s = DephasingScenario::coherent();
        const auto spec = ResonanceSpectrum::for_model(p, s, p.beta / 50);
        std::vector<Time> times;
        for (int i = 0; i < 5; ++i)
            times.push_back((0.2 * i) * rotation_period(p));
        const ResonanceOracle oracle(spec, p, s, times);
        const DecayIntensity exact(p, s);
        for (std::size_t it = 0; it < times.size(); ++it)
        {
            double peak = 0.0;
            for (int i = 0; i <= 18; ++i)
                peak = std::max(peak, exact(times[it], Angle(pi * i / 18)));
            for (int i = 0; i <= 18; ++i)
            {
                const Angle th(pi * i / 18);
                CHECK(std::abs(oracle.intensity(it, th) - exact(times[it], th)) <= 1e-3 * peak);
            }
        }
    }

    TEST_CASE("autocorrelation")
    {
        const auto p = ModelParams::c12_mg24();
        for (double th : {0.0, 0.9, 2.4})
        {
            const Autocorrelation rho(p, DephasingScenario::coherent(), Angle(th));
            for (double e : {0.1, 1.35, 7.7, 30.0})
            {
                const auto a = rho(-e);
                const auto b = std::conj(rho(e));
                CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
            }
            CHECK(rho.total_weight().real() ==
                  Approx(decay_intensity_eq2(Time::inv_mev(0.0), Angle(th), p, DephasingScenario::coherent()))
                      .epsilon(1e-10));
        }
        const auto r0 = autocorrelation_rho(0.0, Angle(0.0), p);
        CHECK(r0.real() > 0.0);
        CHECK(std::abs(r0.imag()) <= 1e-12 * r0.real());

        const double w = window_sum_sq(p, Angle(1.1));
        for (double e : {-2.0, 0.0, 0.4})
        {
            const auto z = autocorrelation_rho(e, Angle(1.1), p, DephasingScenario::rmt());
            const auto lorentz = std::complex<double>(0.0, 1.0 / (2 * pi)) / std::complex<double>(e, p.gamma);
            CHECK(std::abs(z - w * lorentz) <= 1e-12 * std::abs(z));
        }
    }

    TEST_CASE("Fourier transform of rho")
    {
        const auto p = ModelParams::c12_mg24();
        const double T = rotation_period(p).inv_mev();
        std::vector<Time> times;
        for (int i = 0; i < 10; ++i)
            times.push_back(Time::inv_mev((0.05 + 0.105 * i) * T));
        times.push_back(Time::inv_mev(-0.1 * T));

        const auto rmt = ft_consistency(Angle(0.8), p, DephasingScenario::rmt(), times);
        CHECK(rmt.max_rel_error < 0.005);
        CHECK(rmt.converged);

        const auto full = ft_consistency(Angle(pi / 2), p, DephasingScenario::coherent(), times);
        CHECK(full.max_rel_error < 0.01);
        CHECK(full.converged);
        REQUIRE(full.transformed.size() == times.size());
        CHECK(full.reference.back() == 0.0);

        const auto forward = ft_consistency(Angle(0.0), p, DephasingScenario::coherent(), times);
        const double p0 = decay_intensity_eq2(Time::inv_mev(0.0), Angle(0.0), p, DephasingScenario::coherent());
        CHECK(std::abs(forward.transformed.back()) < 0.01 * p0);

        FourierOptions raw;
        raw.tail_correction = false;
        const auto uncorrected = ft_consistency(Angle(0.0), p, DephasingScenario::coherent(), times, raw);
        CHECK(uncorrected.max_tail_estimate > forward.max_tail_estimate);
    }

    TEST_CASE("convergence report bookkeeping")
    {
        const auto p = ModelParams::c12_mg24();
        CHECK(convergence_report({}, p, DephasingScenario::coherent(), {}, {}).empty());

        std::vector<ConvergenceRow> rows = {{1e-3, 1e-2, 0.0, 1000}, {4e-4, 5e-3, 0.0, 2500}, {2e-4, 5e-3, 0.0, 5000}};
        CHECK(converges_monotonically(rows));
        rows[2].max_rel_error = 5.1e-3;
        CHECK_FALSE(converges_monotonically(rows));
    }
}
