#include "icdecay/wavepacket.hpp"

#include "icdecay/intensity.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace icdecay {

namespace {
constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;

double wrap_two_pi(double x)
{
    double r = std::fmod(x, two_pi);
    if (r < 0.0)
        r += two_pi;
    return r;
}

double sign_of(Branch b) { return b == Branch::plus ? 1.0 : -1.0; }
} // namespace

double packet_width(Time t, const ModelParams& p)
{
    const double bt = p.beta * t.inv_mev();
    return std::sqrt(1.0 / (p.d * p.d) + bt * bt);
}

WavePacketState packet_state(int k, Branch sign, Time t, const ModelParams& p)
{
    const double omega_t = p.hbar_omega * t.inv_mev();
    // argument Phi + s theta + 2 pi k - omega t vanishes at theta = -s (Phi + 2 pi k - omega t)
    const double center = -sign_of(sign) * (p.phi + two_pi * k - omega_t);
    return {k, sign, wrap_two_pi(center), packet_width(t, p)};
}

double wp_amplitude(int k, Branch sign, Time t, Angle theta, const ModelParams& p)
{
    const double width = packet_width(t, p);
    const double arg = p.phi + sign_of(sign) * theta.reduced() + two_pi * k -
                       p.hbar_omega * t.inv_mev();
    return std::exp(-arg * arg / (2.0 * width * width)) / width;
}

int default_kmax(Time t, const ModelParams& p)
{
    const double turns = p.hbar_omega * std::max(0.0, t.inv_mev()) / two_pi;
    return static_cast<int>(std::ceil(turns)) + 3;
}

PacketIntensity wp_intensity_eq3(Time t, Angle theta, const ModelParams& p, std::optional<int> kmax)
{
    const double tau = t.inv_mev();
    const double th = theta.reduced();
    PacketIntensity r;
    r.valid = th >= 1.0 / p.I_avg && pi - th >= 1.0 / p.I_avg;
    if (tau < 0.0)
        return r;

    const double floor_turns = p.hbar_omega * tau / two_pi + 3.0;
    const int kmax_used = kmax.value_or(default_kmax(t, p));
    if (kmax_used < floor_turns - 1e-12)
        throw std::invalid_argument("wp_intensity_eq3: kmax below omega t / 2pi + 3");

    const double s = std::sin(th);
    if (s <= 0.0)
    {
        r.value = std::numeric_limits<double>::infinity();
        r.valid = false;
        return r;
    }
    const double cross = 2.0 * std::cos((2.0 * p.I_avg + 1.0) * th - pi / 2.0);
    double sum = 0.0;
    for (int k = 0; k <= kmax_used; ++k)
    {
        const double a = wp_amplitude(k, Branch::plus, t, theta, p);
        const double b = wp_amplitude(k + 1, Branch::minus, t, theta, p);
        sum += a * a + b * b + cross * a * b;
    }
    r.value = std::exp(-p.gamma * tau) * sum / s;
    return r;
}

RouteAgreement route_agreement(const ModelParams& p, std::span<const Time> times,
                               std::span<const Angle> angles, Time t_ref, Angle theta_ref)
{
    const DecayIntensity exact(p, DephasingScenario::coherent());
    const double exact_ref = exact(t_ref, theta_ref);
    const double packet_ref = wp_intensity_eq3(t_ref, theta_ref, p).value;
    if (!(exact_ref > 0.0) || !(packet_ref > 0.0) || !std::isfinite(packet_ref))
        throw std::invalid_argument("route_agreement: reference point has no positive intensity");

    RouteAgreement out;
    for (Time t : times)
        for (Angle th : angles)
        {
            const double a = exact(t, th) / exact_ref;
            const double b = wp_intensity_eq3(t, th, p).value / packet_ref;
            const double dev = std::abs(b - a) / a;
            if (dev > out.max_rel_deviation)
                out = {dev, t, th.radians()};
        }
    return out;
}

double fringe_spacing(const ModelParams& p)
{
    if (p.I_avg < 1.0)
        throw std::invalid_argument("fringe_spacing: I >= 1 required");
    return two_pi / (2.0 * p.I_avg + 1.0);
}

std::vector<OverlapEvent> overlap_schedule(const ModelParams& p, int n_periods)
{
    if (n_periods < 0)
        throw std::invalid_argument("overlap_schedule: n_periods >= 0 required");
    std::vector<OverlapEvent> events;
    const double omega = p.hbar_omega;
    const double t_end = n_periods * two_pi / omega;

    events.push_back({Time::inv_mev(0.0), std::abs(p.phi), OverlapEvent::Kind::cone});
    if (p.phi == 0.0)
        events.back().kind = OverlapEvent::Kind::forward;

    // omega t - Phi = m pi; centre angle is m pi (mod 2pi).
    const int m_first = static_cast<int>(std::floor(-p.phi / pi)) + 1;
    for (int m = m_first;; ++m)
    {
        const double tau = (p.phi + m * pi) / omega;
        if (tau > t_end * (1.0 + 1e-12))
            break;
        if (tau <= 0.0)
            continue;
        const bool backward = (m % 2 + 2) % 2 == 1;
        events.push_back({Time::inv_mev(tau), backward ? pi : 0.0,
                          backward ? OverlapEvent::Kind::backward : OverlapEvent::Kind::forward});
    }
    return events;
}

WashoutEstimate washout_time(const ModelParams& p, const DephasingScenario& s, WashoutVariant variant)
{
    if (variant == WashoutVariant::rigid_rotor)
        return {Time::inv_mev(pi * p.I_avg / (p.d * p.hbar_omega)),
                "J-independent moment of inertia: (d/I) omega t >= pi"};
    const double omega_dot =
        s.mode == ScenarioMode::j_dependent_omega ? std::abs(s.omega_dot) : 0.0;
    if (omega_dot == 0.0)
        return {Time::inv_mev(std::numeric_limits<double>::infinity()),
                "omega_dot = 0: fringes persist for any d >= 1 provided beta t/hbar < pi"};
    return {Time::inv_mev(pi / (p.d * omega_dot)), "d omega_dot t >= pi"};
}

} // namespace icdecay
