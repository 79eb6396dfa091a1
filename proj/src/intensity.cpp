#include "icdecay/intensity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "icdecay/parallel.hpp"

namespace icdecay {

namespace {

constexpr std::array<double, 9> k_panel_fractions = {
    0.0, 1.0 / 16, 1.0 / 8, 5.0 / 16, 3.0 / 8, 7.0 / 16, 1.0 / 2, 3.0 / 4, 1.0};

// Per-pair real coefficient of P_J P_J' at time tau, including the factor 2
// from pairing (J, J') with (J', J).
double pair_coefficient(const SpinPair& pr, double gamma, double tau)
{
    const double c = pr.weight * std::exp(-(gamma + pr.dephasing) * tau) *
                     std::cos(pr.phase - pr.frequency * tau);
    return pr.diagonal() ? c : 2.0 * c;
}

double pair_time_integral(const SpinPair& pr, double gamma)
{
    const double g = gamma + pr.dephasing;
    const double f = pr.frequency;
    const double re = (g * std::cos(pr.phase) + f * std::sin(pr.phase)) / (g * g + f * f);
    return pr.diagonal() ? pr.weight * re : 2.0 * pr.weight * re;
}

} // namespace

std::string to_string(Route r)
{
    switch (r)
    {
    case Route::eq2_exact:
        return "eq2_exact";
    case Route::eq3_wavepacket:
        return "eq3_wavepacket";
    case Route::eq1_oracle:
        return "eq1_oracle";
    }
    return "unknown";
}

std::span<const double> panel_fractions() { return k_panel_fractions; }

TimeGrid TimeGrid::panel_times(const ModelParams& p)
{
    return fractions_of_period(k_panel_fractions, p);
}

TimeGrid TimeGrid::fractions_of_period(std::span<const double> fractions, const ModelParams& p)
{
    const Time period = rotation_period(p);
    TimeGrid g;
    g.times.reserve(fractions.size());
    for (double f : fractions)
        g.times.push_back(f * period);
    return g;
}

AngularGrid AngularGrid::uniform_degrees(double step_deg)
{
    if (!(step_deg > 0.0) || step_deg > 360.0)
        throw std::invalid_argument("angle step must lie in (0, 360] degrees");
    AngularGrid g;
    const auto n = static_cast<std::size_t>(std::ceil(360.0 / step_deg - 1e-9));
    g.angles.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        g.angles.push_back(Angle::degrees(static_cast<double>(i) * step_deg));
    return g;
}

DecayIntensity::DecayIntensity(const ModelParams& p, const DephasingScenario& s) : table_(p, s)
{
    const auto leg0 = legendre(Angle(0.0));
    const double p00 = evaluate(Time::inv_mev(0.0), leg0);
    if (!(std::abs(p00) > 0.0))
        throw InvalidParameters("P(0, 0) vanishes: degenerate spin window, normalization undefined");
    norm_A_ = cross_section(leg0) / p00;
}

std::vector<double> DecayIntensity::legendre(Angle theta) const
{
    const auto& p = table_.params();
    auto full = legendre_table(p.j_max, theta);
    return {full.begin() + p.j_min, full.end()};
}

double DecayIntensity::evaluate(Time t, std::span<const double> leg) const
{
    const double tau = t.inv_mev();
    if (tau < 0.0)
        return 0.0;
    const double gamma = table_.params().gamma;
    double sum = 0.0;
    for (const auto& pr : table_.pairs())
        sum += pair_coefficient(pr, gamma, tau) * leg[pr.j_index] * leg[pr.jp_index];
    return sum;
}

double DecayIntensity::operator()(Time t, Angle theta) const
{
    if (t.inv_mev() < 0.0)
        return 0.0;
    return evaluate(t, legendre(theta));
}

std::complex<double> DecayIntensity::complex_sum(Time t, Angle theta) const
{
    const double tau = t.inv_mev();
    if (tau < 0.0)
        return {};
    const auto leg = legendre(theta);
    const double gamma = table_.params().gamma;
    std::complex<double> sum;
    for (const auto& pr : table_.pairs())
    {
        const double mag = pr.weight * std::exp(-(gamma + pr.dephasing) * tau) * leg[pr.j_index] *
                           leg[pr.jp_index];
        const double arg = pr.phase - pr.frequency * tau;
        sum += std::polar(mag, arg);
        if (!pr.diagonal())
            sum += std::polar(mag, -arg);
    }
    return sum;
}

double DecayIntensity::cross_section(std::span<const double> leg) const
{
    const double gamma = table_.params().gamma;
    double sum = 0.0;
    for (const auto& pr : table_.pairs())
        sum += pair_time_integral(pr, gamma) * leg[pr.j_index] * leg[pr.jp_index];
    if (!(sum > 0.0))
        throw InvalidParameters("energy-averaged cross section is not positive");
    return sum;
}

double DecayIntensity::cross_section(Angle theta) const { return cross_section(legendre(theta)); }

double DecayIntensity::normalized(Time t, Angle theta) const
{
    const auto leg = legendre(theta);
    return norm_A_ * evaluate(t, leg) / cross_section(leg);
}

double decay_intensity_eq2(Time t, Angle theta, const ModelParams& p, const DephasingScenario& s)
{
    return DecayIntensity(p, s)(t, theta);
}

double avg_cross_section(Angle theta, const ModelParams& p, const DephasingScenario& s)
{
    return DecayIntensity(p, s).cross_section(theta);
}

double rmt_cross_section(Angle theta, const ModelParams& p)
{
    p.check_computable();
    const auto leg = legendre_table(p.j_max, theta);
    double sum = 0.0;
    for (SpinIndex j = p.j_min; j <= p.j_max; ++j)
    {
        double w = spin_window(j, p);
        if (!p.window_absorbs_degeneracy)
            w *= (2.0 * j + 1) * (2.0 * j + 1);
        sum += w * leg[j] * leg[j];
    }
    return sum;
}

double normalization_A(const ModelParams& p, const DephasingScenario& s)
{
    return DecayIntensity(p, s).norm_A();
}

IntensityField intensity_map(const TimeGrid& tgrid, const AngularGrid& agrid, const ModelParams& p,
                             const DephasingScenario& s)
{
    if (tgrid.times.empty())
        throw std::invalid_argument("intensity_map: empty time grid");
    if (agrid.angles.empty())
        throw std::invalid_argument("intensity_map: empty angle grid");
    if (!std::is_sorted(tgrid.times.begin(), tgrid.times.end()))
        throw std::invalid_argument("intensity_map: time grid not sorted");
    if (!std::is_sorted(agrid.angles.begin(), agrid.angles.end(),
                        [](Angle a, Angle b) { return a.radians() < b.radians(); }))
        throw std::invalid_argument("intensity_map: angle grid not sorted");

    const DecayIntensity model(p, s);
    const std::size_t na = agrid.angles.size();

    std::vector<std::vector<double>> legendre(na);
    std::vector<double> inv_sigma(na);
    for (std::size_t ia = 0; ia < na; ++ia)
    {
        legendre[ia] = model.legendre(agrid.angles[ia]);
        inv_sigma[ia] = model.norm_A() / model.cross_section(legendre[ia]);
    }

    IntensityField field;
    field.times = tgrid.times;
    field.angles = agrid.angles;
    field.route = Route::eq2_exact;
    field.norm_A = model.norm_A();
    field.values.assign(field.times.size() * na, 0.0);

    detail::parallel_for(field.times.size(), [&](std::size_t it) {
        for (std::size_t ia = 0; ia < na; ++ia)
            field.values[it * na + ia] = model.evaluate(field.times[it], legendre[ia]) * inv_sigma[ia];
    });
    return field;
}

} // namespace icdecay
