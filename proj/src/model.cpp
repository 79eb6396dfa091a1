#include "icdecay/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace icdecay {

namespace {

[[noreturn]] void reject(const std::string& field, const std::string& bound, double value)
{
    std::ostringstream os;
    os.precision(17);
    os << field << " = " << value << " violates " << bound;
    throw InvalidParameters(os.str());
}

} // namespace

ModelParams ModelParams::c12_mg24()
{
    ModelParams p;
    p.phi = 0.0;
    p.d = 3.0;
    p.I_avg = 14.0;
    p.beta = 0.01;
    p.hbar_omega = 1.35;
    p.gamma = 0.3;
    p.d_spacing = 1e-5;
    p.set_default_window();
    return p;
}

void ModelParams::set_default_window()
{
    j_min = std::max(0, static_cast<int>(std::floor(I_avg - 5.0 * d)));
    j_max = static_cast<int>(std::ceil(I_avg + 5.0 * d));
}

void ModelParams::check_computable() const
{
    if (!std::isfinite(phi))
        reject("phi", "finite", phi);
    if (!(d > 0.0))
        reject("d", "d > 0", d);
    if (!(beta >= 0.0) || !std::isfinite(beta))
        reject("beta", "beta >= 0", beta);
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        reject("gamma", "gamma > 0", gamma);
    if (!(hbar_omega > 0.0) || !std::isfinite(hbar_omega))
        reject("hbar_omega", "hbar_omega > 0", hbar_omega);
    if (j_min < 0)
        reject("j_min", "j_min >= 0", j_min);
    if (j_max < j_min)
        reject("j_max", "j_max >= j_min", j_max);
}

void ModelParams::validate() const
{
    check_computable();
    if (!(beta > 0.0))
        reject("beta", "beta > 0", beta);
    if (!(d_spacing > 0.0))
        reject("d_spacing", "D > 0", d_spacing);
    if (!(d_spacing < beta))
        reject("d_spacing", "D < beta (strongly overlapping regime, D << beta)", d_spacing);
    if (!(d_spacing < gamma))
        reject("d_spacing", "D < gamma (strongly overlapping resonances)", d_spacing);
    if (!(d >= 1.0))
        reject("d", "d >= 1", d);
    if (!(j_min <= I_avg && I_avg <= j_max))
        reject("I", "j_min <= I <= j_max", I_avg);
}

std::string to_string(ScenarioMode mode)
{
    switch (mode)
    {
    case ScenarioMode::coherent:
        return "coherent";
    case ScenarioMode::rmt_limit:
        return "rmt_limit";
    case ScenarioMode::j_dependent_omega:
        return "j_dependent_omega";
    }
    return "unknown";
}

double spin_window(SpinIndex j, const ModelParams& p)
{
    const double x = (j - p.I_avg) / p.d;
    return std::exp(-x * x);
}

double lorentz_correlator(int dj, double centre, double spacing, double beta, double delta_e)
{
    const double adj = std::abs(dj);
    const double width = beta * adj;
    const double off = delta_e - centre;
    return spacing * width / (std::numbers::pi * (off * off + width * width));
}

double spin_correlator(SpinIndex j, SpinIndex jp, double delta_e, const ModelParams& p)
{
    if (j == jp)
        throw std::invalid_argument("spin_correlator: J == J' is the Kronecker diagonal");
    const int dj = j - jp;
    return lorentz_correlator(dj, p.hbar_omega * dj, p.d_spacing, p.beta, delta_e);
}

Time rotation_period(const ModelParams& p)
{
    return Time::inv_mev(2.0 * std::numbers::pi / p.hbar_omega);
}

double rotational_energy(SpinIndex j, const ModelParams& p, const DephasingScenario& s)
{
    const double x = j - p.I_avg;
    double e = p.hbar_omega * x;
    if (s.mode == ScenarioMode::j_dependent_omega)
        e += 0.5 * s.omega_dot * x * x;
    return e;
}

SpinPairTable::SpinPairTable(const ModelParams& p, const DephasingScenario& s)
    : params_(p), scenario_(s)
{
    p.check_computable();
    const int n = p.spin_count();
    amplitudes_.resize(n);
    for (int i = 0; i < n; ++i)
    {
        const SpinIndex j = p.j_min + i;
        double a = std::sqrt(spin_window(j, p));
        if (!p.window_absorbs_degeneracy)
            a *= 2 * j + 1;
        amplitudes_[i] = a;
    }
    const bool off_diagonal = s.mode != ScenarioMode::rmt_limit;
    pairs_.reserve(off_diagonal ? n * (n + 1) / 2 : n);
    for (int i = 0; i < n; ++i)
    {
        for (int k = i; k < n; ++k)
        {
            if (k != i && !off_diagonal)
                break;
            const SpinIndex j = p.j_min + i;
            const SpinIndex jp = p.j_min + k;
            SpinPair pr;
            pr.j_index = i;
            pr.jp_index = k;
            pr.weight = amplitudes_[i] * amplitudes_[k];
            // hbar omega dJ kept exact so equal gaps share one frequency
            pr.frequency = p.hbar_omega * (j - jp);
            if (s.mode == ScenarioMode::j_dependent_omega)
            {
                const double x = j - p.I_avg;
                const double xp = jp - p.I_avg;
                pr.frequency += 0.5 * s.omega_dot * (x * x - xp * xp);
            }
            pr.dephasing = p.beta * std::abs(j - jp);
            pr.phase = p.phi * (j - jp);
            pairs_.push_back(pr);
        }
    }
}

} // namespace icdecay
