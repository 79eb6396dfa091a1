#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "icdecay/legendre.hpp"
#include "icdecay/model.hpp"

namespace icdecay {

/// Which evaluation produced an intensity field.
enum class Route
{
    eq2_exact,      ///< spin-pair closed form with exact Legendre polynomials
    eq3_wavepacket, ///< Gaussian wave-packet approximation
    eq1_oracle,     ///< explicit resonance double sum
};

std::string to_string(Route r);

struct TimeGrid
{
    std::vector<Time> times;

    /// 0, T/16, T/8, 5T/16, 3T/8, 7T/16, T/2, 3T/4, T.
    static TimeGrid panel_times(const ModelParams& p);
    static TimeGrid fractions_of_period(std::span<const double> fractions, const ModelParams& p);
};

/// Fractions of T of the nine reference panels, (a) .. (i).
std::span<const double> panel_fractions();

struct AngularGrid
{
    std::vector<Angle> angles;

    /// step, 2 step, ... covering [0, 360) degrees.
    static AngularGrid uniform_degrees(double step_deg);
};

/// Normalized intensity A P(t, theta) / <sigma(theta)> on a time x angle grid.
struct IntensityField
{
    std::vector<Time> times;
    std::vector<Angle> angles;
    std::vector<double> values; ///< row-major, one row per time
    Route route = Route::eq2_exact;
    double norm_A = 0.0;

    double at(std::size_t it, std::size_t ia) const { return values[it * angles.size() + ia]; }
    std::span<const double> row(std::size_t it) const
    {
        return std::span<const double>(values).subspan(it * angles.size(), angles.size());
    }
};

/// Closed-form decay intensity
///   P(t, theta) = H(t) e^{-Gamma t} sum_{J J'} w_{JJ'} e^{i(Phi dJ - dE t) - beta|dJ| t} P_J P_J'
/// with its analytic time integral <sigma(theta)> and the normalization A.
///
/// Arbitrary units throughout; only the normalized field is meaningful.
class DecayIntensity
{
  public:
    DecayIntensity(const ModelParams& p, const DephasingScenario& s);

    const SpinPairTable& table() const { return table_; }

    /// Raw P(t, theta). Zero for t < 0.
    double operator()(Time t, Angle theta) const;
    /// Same, from a precomputed Legendre table P_{j_min..j_max}(theta).
    double evaluate(Time t, std::span<const double> legendre) const;

    /// Unpaired complex double sum; the imaginary part is round-off.
    std::complex<double> complex_sum(Time t, Angle theta) const;

    /// Energy-averaged cross section: term-wise integral of P over t >= 0.
    /// Throws InvalidParameters if the result is not positive.
    double cross_section(Angle theta) const;
    double cross_section(std::span<const double> legendre) const;

    /// A = <sigma(0)> / P(0, 0).
    double norm_A() const { return norm_A_; }

    /// A P(t, theta) / <sigma(theta)>.
    double normalized(Time t, Angle theta) const;

    /// P_{j_min..j_max}(theta).
    std::vector<double> legendre(Angle theta) const;

  private:
    SpinPairTable table_;
    double norm_A_ = 0.0;
};

double decay_intensity_eq2(Time t, Angle theta, const ModelParams& p, const DephasingScenario& s);
double avg_cross_section(Angle theta, const ModelParams& p, const DephasingScenario& s);

/// Diagonal-only cross section sum_J w(J) P_J(theta)^2, w = W or (2J+1)^2 W.
double rmt_cross_section(Angle theta, const ModelParams& p);

double normalization_A(const ModelParams& p, const DephasingScenario& s);

/// Normalized Eq.-2 field on the product grid. Throws std::invalid_argument
/// on empty or unsorted grids.
IntensityField intensity_map(const TimeGrid& tgrid, const AngularGrid& agrid, const ModelParams& p,
                             const DephasingScenario& s);

} // namespace icdecay
