// Acceptance run for the 12C + 24Mg parameter set. Prints one PASS/FAIL line
// per criterion with the measured value and exits non-zero if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "icdecay/fringes.hpp"
#include "icdecay/intensity.hpp"
#include "icdecay/legendre.hpp"
#include "icdecay/oracle.hpp"
#include "icdecay/wavepacket.hpp"

using namespace icdecay;

namespace {

constexpr double pi = std::numbers::pi;
int failures = 0;

void report(const char* id, const char* what, bool pass, const std::string& detail)
{
    std::printf("%s criterion %-3s %-58s %s\n", pass ? "PASS" : "FAIL", id, what, detail.c_str());
    std::fflush(stdout);
    if (!pass)
        ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

FringeReport fringes(const ModelParams& p, const DephasingScenario& s, Time t, double center_deg)
{
    const auto field = intensity_map(TimeGrid{{t}}, AngularGrid::uniform_degrees(0.5), p, s);
    return fringe_visibility(field, t, AngularWindow::degrees(center_deg, 30.0), p);
}

double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

ModelParams random_model(std::mt19937_64& rng)
{
    ModelParams p = ModelParams::c12_mg24();
    p.phi = uniform(rng, 0.0, 0.6);
    p.d = uniform(rng, 1.0, 5.0);
    p.I_avg = uniform(rng, 6.0, 30.0);
    p.beta = uniform(rng, 0.002, 0.2);
    p.hbar_omega = uniform(rng, 0.5, 2.0);
    p.gamma = uniform(rng, 0.05, 1.0);
    p.set_default_window();
    p.validate();
    return p;
}

// Runs `n` randomized draws of a property and returns the number of violations.
int count_violations(int n, std::uint64_t seed, const std::function<bool(std::mt19937_64&)>& holds)
{
    std::mt19937_64 rng(seed);
    int bad = 0;
    for (int i = 0; i < n; ++i)
        bad += holds(rng) ? 0 : 1;
    return bad;
}

} // namespace

int main()
{
    const auto p = ModelParams::c12_mg24();
    const auto coherent = DephasingScenario::coherent();
    const Time T = rotation_period(p);
    const double T_mev = T.inv_mev();

    // 1: rotation period
    {
        const double rel = std::abs(T.to_seconds() / 3.06e-21 - 1.0);
        report("1", "rotation period 3.06e-21 s within 0.5%", rel <= 0.005,
               fmt("T = %.6e s, rel. deviation %.2e", T.to_seconds(), rel));
    }

    // 2: normalization
    {
        const DecayIntensity model(p, coherent);
        const double dev = std::abs(model.normalized(Time::inv_mev(0.0), Angle(0.0)) - 1.0);
        report("2", "normalized intensity at (0, 0) equals 1 to 1e-12", dev <= 1e-12, fmt("|P - 1| = %.2e", dev));
    }

    // 3: fringe phenomenology of the reference panels
    {
        const auto t0 = fringes(p, coherent, Time::inv_mev(0.0), 0.0);
        const auto gap = fringes(p, coherent, (5.0 / 16.0) * T, 180.0);
        const auto half = fringes(p, coherent, 0.5 * T, 180.0);
        const auto full = fringes(p, coherent, 1.0 * T, 0.0);
        const double spacing_err = std::abs(half.fringe_spacing / (2 * pi / 29.0) - 1.0);
        report("3a", "visibility > 0.9 at t = 0 near 0", t0.visibility > 0.9, fmt("V = %.4f", t0.visibility));
        report("3b", "fringe spacing at T/2 near pi is 2 pi/29 within 5%", spacing_err <= 0.05,
               fmt("spacing = %.5f rad, rel. error %.4f", half.fringe_spacing, spacing_err));
        report("3c", "visibility < 0.05 at 5T/16 near pi", gap.visibility < 0.05, fmt("V = %.4f", gap.visibility));
        report("3d", "visibility > 0.9 at T/2 near pi", half.visibility > 0.9, fmt("V = %.4f", half.visibility));
        report("3e", "compensated peak at T below its t = 0 value",
               full.peak_normalized_intensity < t0.peak_normalized_intensity,
               fmt("peak(T) = %.4f, peak(0) = %.4f", full.peak_normalized_intensity, t0.peak_normalized_intensity));
    }

    // 4: random-matrix limit
    {
        const auto tg = TimeGrid::panel_times(p);
        const auto field = intensity_map(tg, AngularGrid::uniform_degrees(0.5), p, DephasingScenario::rmt());
        double worst = 0.0;
        for (std::size_t it = 0; it < tg.times.size(); ++it)
            for (double v : field.row(it))
                worst = std::max(worst, std::abs(v - std::exp(-p.gamma * tg.times[it].inv_mev())));
        report("4", "RMT limit equals exp(-Gamma t) to 1e-12", worst <= 1e-12, fmt("max deviation %.2e", worst));
    }

    // 5: resonance-sum oracle
    {
        const auto start = std::chrono::steady_clock::now();
        const double span = required_span(p, coherent);
        const ResonanceSpectrum spec{p.beta / 50.0, span, 0.0};
        validate_spectrum(spec, p, coherent);
        std::vector<Angle> angles;
        for (int i = 0; i < 36; ++i)
            angles.push_back(Angle::degrees(10.0 * i));
        const std::vector<double> spacings = {p.beta / 10.0, p.beta / 25.0, p.beta / 50.0};
        const auto rows = convergence_report(spacings, p, coherent, TimeGrid::panel_times(p).times, angles, span);
        const double elapsed = seconds_since(start);
        const bool span_ok = span >= 500.0 * p.beta * (p.j_max - p.j_min);
        const bool mono = converges_monotonically(rows);
        const double err = rows.back().max_rel_error;
        report("5", "resonance sum (D = beta/50) matches closed form within 1%",
               span_ok && err <= 0.01 && mono && elapsed < 300.0,
               fmt("slice-rel. error %.3e, span %.0f MeV, ", err, span) +
                   fmt("errors %.9e, %.9e, %.9e, ", rows[0].max_rel_error, rows[1].max_rel_error,
                       rows[2].max_rel_error) +
                   (mono ? "monotone, " : "NOT monotone, ") + fmt("%.0f s", elapsed));
    }

    // 6: wave-packet route against the closed form
    {
        std::vector<Time> times;
        for (int i = 0; i <= 12; ++i)
            times.push_back((0.1 + 0.025 * i) * T);
        std::vector<Angle> angles;
        for (int i = 0; i <= 60; ++i)
            angles.emplace_back(0.3 + (pi - 0.6) * i / 60.0);
        const auto r = route_agreement(p, times, angles, 0.1 * T, Angle(pi / 2));
        report("6", "wave-packet route within 5% of the closed form", r.max_rel_deviation <= 0.05,
               fmt("max rel. deviation %.4g at t = %.3f T, theta = %.3f rad", r.max_rel_deviation,
                   r.worst_t.inv_mev() / T_mev, r.worst_theta));
    }

    // 7: Fourier transform of the autocorrelation
    {
        std::vector<Time> times;
        for (int i = 0; i < 20; ++i)
            times.push_back((0.05 + 0.05 * i) * T);
        times.push_back(-0.1 * T);
        double worst = 0.0;
        bool converged = true;
        for (double th : {0.0, pi / 4, pi / 2, 3 * pi / 4, pi})
        {
            const auto r = ft_consistency(Angle(th), p, coherent, times);
            worst = std::max(worst, r.max_rel_error);
            converged = converged && r.converged;
        }
        report("7", "Fourier transform of rho reproduces P within 1%", worst <= 0.01 && converged,
               fmt("max rel. error %.2e", worst));
    }

    // 8: washout
    {
        const auto rigid = washout_time(p, coherent, WashoutVariant::rigid_rotor);
        const double rel = std::abs(rigid.t.inv_mev() / (7.0 * T_mev / 3.0) - 1.0);
        const double formula = std::abs(rigid.t.inv_mev() / (pi * p.I_avg / (p.d * p.hbar_omega)) - 1.0);
        report("8a", "t_wash = pi I/(d omega) = 7T/3", rel <= 1e-12 && formula <= 1e-12,
               fmt("t_wash = %.6f T", rigid.t.inv_mev() / T_mev));

        std::string detail = "V:";
        bool all_low = true;
        for (double w : {0.005, 0.01, 0.02, 0.05, 0.1})
        {
            const auto s = DephasingScenario::j_dependent(w);
            const Time t_wash = washout_time(p, s).t;
            const int periods = static_cast<int>(std::ceil(t_wash.inv_mev() / T_mev)) + 2;
            OverlapEvent after{};
            for (const auto& ev : overlap_schedule(p, periods))
                if (ev.t > t_wash)
                {
                    after = ev;
                    break;
                }
            const double v = fringes(p, s, after.t, after.angle * 180.0 / pi).visibility;
            all_low = all_low && v < 0.1;
            detail += fmt(" %.3f", v);
        }
        report("8b", "omega_dot scan: V < 0.1 at the first overlap after pi/(d omega_dot)", all_low,
               detail + " for omega_dot = 0.005, 0.01, 0.02, 0.05, 0.1 MeV");
    }

    // 9: randomized properties, 200 draws each
    {
        const int n = 200;
        int bad = 0;
        bad += count_violations(n, 1, [](auto& rng) {
            const int j = std::uniform_int_distribution<int>(0, 60)(rng);
            const double th = uniform(rng, 0.0, pi);
            const double a = legendre_exact(j, Angle(th));
            const double b = legendre_exact(j, Angle(pi - th));
            return std::abs(a) <= 1.0 + 1e-12 && std::abs(b - (j % 2 ? -a : a)) <= 1e-12;
        });
        bad += count_violations(n, 2, [](auto& rng) {
            const auto q = random_model(rng);
            const DecayIntensity m(q, DephasingScenario::coherent());
            const Time t = uniform(rng, 0.0, 2.0) * rotation_period(q);
            const double th = uniform(rng, 0.0, pi);
            const double a = m.normalized(t, Angle(th));
            return std::abs(a - m.normalized(t, Angle(2 * pi - th))) <= 1e-12 * std::max(1.0, a);
        });
        bad += count_violations(n, 3, [](auto& rng) {
            auto q = random_model(rng);
            q.beta = 0.0;
            const DecayIntensity m(q, DephasingScenario::coherent());
            const Time period = rotation_period(q);
            const Time t = uniform(rng, 0.0, 1.0) * period;
            const Angle th(uniform(rng, 0.0, pi));
            const double a = std::exp(q.gamma * t.inv_mev()) * m.normalized(t, th);
            const double b = std::exp(q.gamma * (t + period).inv_mev()) * m.normalized(t + period, th);
            return std::abs(a - b) <= 1e-9 * std::max(1.0, a);
        });
        bad += count_violations(n, 4, [](auto& rng) {
            const auto q = random_model(rng);
            const DecayIntensity m(q, DephasingScenario::coherent());
            const Time t = uniform(rng, 0.0, 3.0) * rotation_period(q);
            return m.normalized(t, Angle(uniform(rng, 0.0, 2 * pi))) >= -1e-12;
        });
        bad += count_violations(n, 5, [](auto& rng) {
            const auto q = random_model(rng);
            const Time t = uniform(rng, 0.0, 3.0) * rotation_period(q);
            const auto r = wp_intensity_eq3(t, Angle(uniform(rng, 0.01, pi - 0.01)), q);
            return std::isfinite(r.value) && r.value >= 0.0;
        });
        bad += count_violations(n, 6, [](auto& rng) {
            double b1 = uniform(rng, 0.0, 0.3), b2 = uniform(rng, 0.0, 0.3);
            if (b1 > b2)
                std::swap(b1, b2);
            auto v = [](double beta) {
                auto q = ModelParams::c12_mg24();
                q.beta = beta;
                return fringes(q, DephasingScenario::coherent(), 0.5 * rotation_period(q), 180.0).visibility;
            };
            return v(b1) >= v(b2) - 1e-12;
        });
        report("9", "randomized properties (6 x 200 draws)", bad == 0, fmt("%.0f violations", bad));
    }

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
