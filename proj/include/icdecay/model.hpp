#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "icdecay/legendre.hpp"

namespace icdecay {

namespace phys {
/// Reduced Planck constant in MeV s.
inline constexpr double hbar_mev_s = 6.582119569e-22;
} // namespace phys

/// A parameter set outside the model's domain. The message names the field.
class InvalidParameters : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// Time since formation of the complex.
///
/// Stored as t/hbar in MeV^-1 so that energies in MeV multiply it directly;
/// seconds appear only at I/O boundaries.
class Time
{
  public:
    constexpr Time() = default;

    static constexpr Time inv_mev(double tau) { return Time(tau); }
    static constexpr Time seconds(double s) { return Time(s / phys::hbar_mev_s); }

    constexpr double inv_mev() const { return tau_; }
    constexpr double to_seconds() const { return tau_ * phys::hbar_mev_s; }

    friend constexpr Time operator*(double f, Time t) { return Time(f * t.tau_); }
    friend constexpr Time operator+(Time a, Time b) { return Time(a.tau_ + b.tau_); }
    friend constexpr auto operator<=>(Time, Time) = default;

  private:
    constexpr explicit Time(double tau) : tau_(tau) {}
    double tau_ = 0.0;
};

/// Physical parameters of the rotating intermediate complex. Energies in MeV.
struct ModelParams
{
    double phi = 0.0;         ///< deflection angle (rad)
    double d = 3.0;           ///< spin window width
    double I_avg = 14.0;      ///< average spin
    double beta = 0.01;       ///< dephasing width
    double hbar_omega = 1.35; ///< rotational quantum
    double gamma = 0.3;       ///< total decay width
    double d_spacing = 1e-5;  ///< mean level spacing
    SpinIndex j_min = 0;
    SpinIndex j_max = 29;
    /// When true the Gaussian window already carries the (2J+1)^2 degeneracy
    /// weight; when false (2J+1)(2J'+1) multiplies every spin pair.
    bool window_absorbs_degeneracy = true;

    /// 12C + 24Mg parameter set.
    static ModelParams c12_mg24();

    /// Summation window [max(0, I - 5d), I + 5d] rounded outwards.
    void set_default_window();

    /// Full domain check: beta > 0, gamma > 0, hbar_omega > 0, D < beta,
    /// D < gamma, d >= 1, j_min <= I <= j_max. Throws InvalidParameters.
    void validate() const;

    /// Weaker check used by the evaluators, which also accept limiting cases
    /// such as beta = 0 or a one-spin window.
    void check_computable() const;

    int spin_count() const { return j_max - j_min + 1; }
};

enum class ScenarioMode
{
    coherent,
    rmt_limit,
    j_dependent_omega,
};

/// How spin cross-correlations dephase.
///
/// rmt_limit drops every J != J' term. j_dependent_omega gives each spin its
/// own angular velocity omega(J) = omega + omega_dot (J - I); pair phases are
/// differences of the band energy whose J-derivative is hbar omega(J).
///
/// Reference scales (not used in computation): the spreading width
/// Gamma_spr ~ 5-10 MeV and the ergodization time tau_erg = hbar/Gamma_spr.
struct DephasingScenario
{
    ScenarioMode mode = ScenarioMode::coherent;
    double omega_dot = 0.0; ///< hbar d(omega)/dJ in MeV per spin unit

    static DephasingScenario coherent() { return {}; }
    static DephasingScenario rmt() { return {ScenarioMode::rmt_limit, 0.0}; }
    static DephasingScenario j_dependent(double omega_dot)
    {
        return {ScenarioMode::j_dependent_omega, omega_dot};
    }
};

std::string to_string(ScenarioMode mode);

/// Gaussian spin window exp(-(J - I)^2 / d^2); 1 at J = I.
double spin_window(SpinIndex j, const ModelParams& p);

/// Ensemble-averaged correlation of normalized resonance amplitudes with
/// different spins: (1/pi) D beta |dJ| / ((dE - hbar omega dJ)^2 + beta^2 dJ^2).
/// Throws std::invalid_argument for J == J' (the diagonal is a Kronecker delta).
double spin_correlator(SpinIndex j, SpinIndex jp, double delta_e, const ModelParams& p);

/// Same Lorentzian with explicit spacing and centre.
double lorentz_correlator(int dj, double centre, double spacing, double beta, double delta_e);

/// Revolution period 2 pi hbar / (hbar omega).
Time rotation_period(const ModelParams& p);

/// Band energy Theta(J) relative to J = I; Theta(J) - Theta(J') is the centre
/// of the (J, J') correlator.
double rotational_energy(SpinIndex j, const ModelParams& p, const DephasingScenario& s);

/// One (J, J') term of the spin double sum, J <= J'.
struct SpinPair
{
    int j_index = 0;       ///< J - j_min
    int jp_index = 0;      ///< J' - j_min
    double weight = 0.0;   ///< [W(J) W(J')]^{1/2}, times degeneracies if requested
    double frequency = 0.0; ///< Theta(J) - Theta(J') in MeV
    double dephasing = 0.0; ///< beta |J - J'| in MeV
    double phase = 0.0;     ///< Phi (J - J')
    bool diagonal() const { return j_index == jp_index; }
};

/// Upper-triangular list of spin pairs for a parameter set and scenario.
/// Immutable once built; shared read-only by every evaluator.
class SpinPairTable
{
  public:
    SpinPairTable(const ModelParams& p, const DephasingScenario& s);

    const ModelParams& params() const { return params_; }
    const DephasingScenario& scenario() const { return scenario_; }
    const std::vector<SpinPair>& pairs() const { return pairs_; }
    /// Per-spin amplitude sqrt(W(J)) (times 2J+1 without degeneracy absorption).
    const std::vector<double>& amplitudes() const { return amplitudes_; }

  private:
    ModelParams params_;
    DephasingScenario scenario_;
    std::vector<double> amplitudes_;
    std::vector<SpinPair> pairs_;
};

} // namespace icdecay
