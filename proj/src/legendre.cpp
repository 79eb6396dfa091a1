#include "icdecay/legendre.hpp"

#include <cassert>
#include <cmath>
#include <limits>

namespace icdecay {

namespace {
constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;
} // namespace

double Angle::reduced() const
{
    double t = std::fmod(rad_, two_pi);
    if (t < 0.0)
        t += two_pi;
    return t > pi ? two_pi - t : t;
}

void legendre_table(SpinIndex jmax, Angle theta, std::span<double> out)
{
    assert(jmax >= 0 && out.size() >= static_cast<std::size_t>(jmax) + 1);
    const double x = std::cos(theta.reduced());
    out[0] = 1.0;
    if (jmax == 0)
        return;
    out[1] = x;
    // (n+1) P_{n+1} = (2n+1) x P_n - n P_{n-1}
    for (int n = 1; n < jmax; ++n)
    {
        out[n + 1] = ((2 * n + 1) * x * out[n] - n * out[n - 1]) / (n + 1);
    }
}

std::vector<double> legendre_table(SpinIndex jmax, Angle theta)
{
    std::vector<double> out(static_cast<std::size_t>(jmax) + 1);
    legendre_table(jmax, theta, out);
    return out;
}

double legendre_exact(SpinIndex j, Angle theta)
{
    assert(j >= 0);
    const double x = std::cos(theta.reduced());
    if (j == 0)
        return 1.0;
    double p_prev = 1.0;
    double p = x;
    for (int n = 1; n < j; ++n)
    {
        const double next = ((2 * n + 1) * x * p - n * p_prev) / (n + 1);
        p_prev = p;
        p = next;
    }
    return p;
}

AsymptoticValue legendre_asymptotic(SpinIndex j, Angle theta)
{
    const double t = theta.reduced();
    const double nu = j + 0.5;
    const double s = std::sin(t);
    AsymptoticValue r;
    r.valid = asymptotic_validity(j, theta);
    const double c = std::cos(nu * t - pi / 4.0);
    if (s <= 0.0)
    {
        r.value = std::copysign(std::numeric_limits<double>::infinity(), c);
        r.valid = false;
        return r;
    }
    r.value = std::sqrt(2.0 / (pi * nu * s)) * c;
    return r;
}

bool asymptotic_validity(SpinIndex j, Angle theta)
{
    if (j <= 0)
        return false;
    const double t = theta.reduced();
    const double edge = 1.0 / j;
    return t >= edge && pi - t >= edge;
}

} // namespace icdecay
