#pragma once

#include <numbers>
#include <span>
#include <vector>

namespace icdecay {

/// Total spin J of a partial wave.
using SpinIndex = int;

/// Scattering angle in radians on the full circle [0, 2pi).
///
/// Legendre arguments live on [0, pi]; angles beyond pi are folded back with
/// theta -> 2pi - theta since P_J depends on cos(theta) only.
class Angle
{
  public:
    constexpr Angle() = default;
    constexpr explicit Angle(double radians) : rad_(radians) {}

    static constexpr Angle degrees(double deg)
    {
        return Angle(deg * std::numbers::pi / 180.0);
    }

    constexpr double radians() const { return rad_; }
    double degrees() const { return rad_ * 180.0 / std::numbers::pi; }

    /// Angle folded into [0, pi].
    double reduced() const;

  private:
    double rad_ = 0.0;
};

/// P_J(cos theta) by three-term upward recurrence.
double legendre_exact(SpinIndex j, Angle theta);

/// P_0 .. P_{jmax} at one angle, written into `out` (size jmax + 1).
void legendre_table(SpinIndex jmax, Angle theta, std::span<double> out);
std::vector<double> legendre_table(SpinIndex jmax, Angle theta);

/// Large-J form of P_J together with its validity flag.
struct AsymptoticValue
{
    double value = 0.0;
    bool valid = false;
};

// sqrt(2 / (pi (J+1/2) sin t)) cos((J+1/2) t - pi/4), t the reduced angle.
// At t = 0 or pi the prefactor diverges; the value is returned as +/-inf and
// flagged invalid.
AsymptoticValue legendre_asymptotic(SpinIndex j, Angle theta);

/// True iff 1/J <= t <= pi - 1/J for the reduced angle t (false for J = 0).
bool asymptotic_validity(SpinIndex j, Angle theta);

} // namespace icdecay
