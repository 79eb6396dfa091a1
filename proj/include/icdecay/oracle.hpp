#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "icdecay/intensity.hpp"
#include "icdecay/model.hpp"

namespace icdecay {

/// Picket-fence resonance spectrum E_mu = e0 + mu D, mu = 0 .. N-1, identical
/// for every spin.
struct ResonanceSpectrum
{
    double spacing = 0.0; ///< D (MeV)
    double span = 0.0;    ///< energy window covered by the levels (MeV)
    double e0 = 0.0;

    /// Spectrum with the smallest admissible span for the model.
    static ResonanceSpectrum for_model(const ModelParams& p, const DephasingScenario& s,
                                       double spacing);

    long long levels() const;
    std::vector<double> energies() const;
};

/// 100 max(Gamma, beta dJ_max, max |correlator centre|).
double required_span(const ModelParams& p, const DephasingScenario& s);

enum class SpectrumChecks
{
    full,      ///< span and resolution (D <= beta/50, D <= Gamma/50)
    span_only, ///< convergence studies deliberately use coarse D
    none,      ///< small test spectra
};

/// Throws InvalidParameters when the spectrum cannot be expected to converge.
void validate_spectrum(const ResonanceSpectrum& spec, const ModelParams& p,
                       const DephasingScenario& s, SpectrumChecks checks = SpectrumChecks::full);

/// Normalized resonance double sum for one spin pair,
///   (1/N) sum_{mu nu} C(E_mu - E_nu) exp(-i (E_mu - E_nu) tau),
/// with C the Lorentzian correlator of width beta |dj| centred at `centre`.
/// The N reference levels mu lie in the averaging window; partners nu are
/// taken from the unbounded fence within |mu - nu| < N. Levels then enter only
/// through m = mu - nu, each offset once per mu, so the cost is O(N) per pair
/// and time.
std::vector<std::complex<double>> reduced_pair_sum(const ResonanceSpectrum& spec, int dj,
                                                   double centre, double beta,
                                                   std::span<const double> taus);

/// Resonance-sum evaluation of P(t, theta) on a fixed set of times.
///
/// The per-pair level sums do not depend on the angle and are computed once
/// in the constructor; intensity() is then as cheap as the closed form. The
/// arbitrary constant is fixed by dividing by N, so diagonal spin terms match
/// the closed form exactly.
class ResonanceOracle
{
  public:
    ResonanceOracle(const ResonanceSpectrum& spec, const ModelParams& p, const DephasingScenario& s,
                    std::span<const Time> times, SpectrumChecks checks = SpectrumChecks::full);

    std::size_t time_count() const { return times_.size(); }
    double intensity(std::size_t time_index, Angle theta) const;

  private:
    SpinPairTable table_;
    std::vector<Time> times_;
    /// level_sums_[pair][time]
    std::vector<std::vector<std::complex<double>>> level_sums_;
};

double eq1_intensity(Time t, Angle theta, const ResonanceSpectrum& spec, const ModelParams& p,
                     const DephasingScenario& s = DephasingScenario::coherent());

/// Amplitude energy autocorrelation rho(eps, theta) at a fixed angle, as a sum
/// of causal Lorentzians (i/2pi) / (eps - c + i g) whose t > 0 transforms are
/// exp(-i c t - g t).
class Autocorrelation
{
  public:
    Autocorrelation(const ModelParams& p, const DephasingScenario& s, Angle theta);

    std::complex<double> operator()(double epsilon) const;

    /// sum of all pole residue weights, equal to P(0+, theta).
    std::complex<double> total_weight() const;
    /// max over poles of |c| + g; sets the scale of the quadrature range.
    double pole_extent() const;

    struct Pole
    {
        double centre;
        double width;
        std::complex<double> weight;
    };
    const std::vector<Pole>& poles() const { return poles_; }

  private:
    std::vector<Pole> poles_;
};

std::complex<double> autocorrelation_rho(double epsilon, Angle theta, const ModelParams& p,
                                         const DephasingScenario& s = DephasingScenario::coherent());

struct FourierCheck
{
    double max_rel_error = 0.0;
    double max_tail_estimate = 0.0; ///< relative truncation estimate after any correction
    bool converged = true;
    std::vector<double> transformed; ///< Re of the numerical transform per time
    std::vector<double> reference;   ///< closed-form P per time
};

struct FourierOptions
{
    double range_factor = 200.0; ///< half range = factor * (largest |pole centre| + width)
    double step_divisor = 20.0;  ///< step = narrowest pole width / divisor
    double tolerance = 0.01;
    /// Add the analytic transform of the 1/eps tails beyond the range.
    bool tail_correction = true;
};

/// Trapezoidal transform of rho(eps, theta) compared with the closed form at
/// each time. Times < 0 are compared against zero, relative to the larger of
/// P(0+, theta) and the largest closed-form value on the grid.
FourierCheck ft_consistency(Angle theta, const ModelParams& p, const DephasingScenario& s,
                            std::span<const Time> times, FourierOptions opts = {});

struct ConvergenceRow
{
    double spacing = 0.0;
    /// max |eq1 - closed| / max_theta |closed| over each time slice
    double max_rel_error = 0.0;
    /// max |eq1 - closed| / |closed|, dominated by near-nodal points
    double max_pointwise_error = 0.0;
    /// levels in the spectrum; sets the round-off floor of the phasor sums
    long long levels = 0;
};

/// True when each row's max_rel_error is no larger than the previous one
/// beyond the round-off floor levels * machine epsilon (relative).
bool converges_monotonically(std::span<const ConvergenceRow> rows);

/// Deviation of the resonance sum from the closed form on the given grid for
/// each spacing. The span is held fixed, at required_span() unless given.
std::vector<ConvergenceRow> convergence_report(std::span<const double> spacings,
                                               const ModelParams& p, const DephasingScenario& s,
                                               std::span<const Time> times,
                                               std::span<const Angle> angles,
                                               std::optional<double> span_mev = std::nullopt);

} // namespace icdecay
