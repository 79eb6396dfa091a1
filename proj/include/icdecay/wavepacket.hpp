#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "icdecay/legendre.hpp"
#include "icdecay/model.hpp"

namespace icdecay {

/// Rotation sense of a packet; plus is the clockwise branch.
enum class Branch
{
    plus,
    minus,
};

struct WavePacketState
{
    int k = 0;                   ///< completed revolutions
    Branch sign = Branch::plus;
    double center = 0.0;         ///< centroid in [0, 2pi)
    double width = 0.0;          ///< Delta(t)
};

/// Delta(t) = sqrt(1/d^2 + (beta t)^2).
double packet_width(Time t, const ModelParams& p);

/// Centroid and width of packet (k, sign) at time t.
WavePacketState packet_state(int k, Branch sign, Time t, const ModelParams& p);

/// Delta^{-1} exp(-(Phi +/- theta + 2 pi k - omega t)^2 / (2 Delta^2)), theta
/// taken as the reduced angle in [0, pi].
double wp_amplitude(int k, Branch sign, Time t, Angle theta, const ModelParams& p);

/// ceil(omega t / 2pi) + 3.
int default_kmax(Time t, const ModelParams& p);

struct PacketIntensity
{
    double value = 0.0;
    bool valid = false; ///< reduced angle inside [1/I, pi - 1/I]
};

/// Wave-packet approximation to P(t, theta):
///   H(t) e^{-Gamma t} / sin(theta) sum_k {P+_k^2 + P-_{k+1}^2 + 2 cos((2I+1) theta - pi/2) P+_k P-_{k+1}}
/// Values outside the asymptotic region are still returned but flagged.
/// Throws std::invalid_argument if kmax is below the required floor.
PacketIntensity wp_intensity_eq3(Time t, Angle theta, const ModelParams& p,
                                 std::optional<int> kmax = std::nullopt);

struct RouteAgreement
{
    double max_rel_deviation = 0.0;
    Time worst_t;
    double worst_theta = 0.0;
};

/// Compares the wave-packet route with the closed form on a grid. Each route
/// is divided by its own value at (t_ref, theta_ref) and the worst
/// |eq3 - eq2| / eq2 is reported.
RouteAgreement route_agreement(const ModelParams& p, std::span<const Time> times,
                               std::span<const Angle> angles, Time t_ref, Angle theta_ref);

/// Period 2pi / (2I + 1) of the interference factor.
double fringe_spacing(const ModelParams& p);

struct OverlapEvent
{
    enum class Kind
    {
        cone,     ///< initial emission cone at |Phi|
        forward,  ///< packets coincide at theta = 0
        backward, ///< packets coincide at theta = pi
    };
    Time t;
    double angle = 0.0;
    Kind kind = Kind::cone;
};

/// Times and angles at which the counter-rotating packet centres coincide,
/// omega t = Phi + m pi, for 0 <= t <= n_periods T. Starts with the t = 0
/// cone event at |Phi| (which is itself a forward overlap when Phi = 0).
std::vector<OverlapEvent> overlap_schedule(const ModelParams& p, int n_periods);

enum class WashoutVariant
{
    omega_dot,   ///< spread d omega_dot t reaches pi
    rigid_rotor, ///< J-independent moment of inertia: (d/I) omega t reaches pi
};

struct WashoutEstimate
{
    Time t;           ///< +inf when there is no J-dependence of omega
    std::string note;
};

WashoutEstimate washout_time(const ModelParams& p, const DephasingScenario& s,
                             WashoutVariant variant = WashoutVariant::omega_dot);

} // namespace icdecay
