#pragma once

#include <span>
#include <string>
#include <vector>

#include "icdecay/intensity.hpp"

namespace icdecay {

/// Arc of the circle centred at `center` (rad) extending `half_width` each way.
struct AngularWindow
{
    double center = 0.0;
    double half_width = 0.0;

    static AngularWindow degrees(double center_deg, double half_width_deg);
};

struct FringeReport
{
    Time t;
    double region_center = 0.0;
    /// (max - min) / (max + min) over significant interior extrema; 0 if none.
    double visibility = 0.0;
    /// Mean peak-to-peak distance (rad); NaN when it cannot be measured.
    double fringe_spacing = 0.0;
    /// max over the window of e^{Gamma t} times the normalized intensity.
    double peak_normalized_intensity = 0.0;
    int extrema = 0;
    std::string diagnostic;
};

struct FringeOptions
{
    /// An extremum is significant when the field moves by at least this
    /// fraction of the time slice's maximum before turning back.
    double prominence_fraction = 0.01;
};

/// Visibility, spacing and compensated peak height of the fringes inside a
/// window of one time slice. Peaks closer than 1/I to theta = 0 or pi are not
/// used for the spacing, nor are intervals crossing those directions.
FringeReport analyze_fringes(std::span<const double> row, std::span<const Angle> angles, Time t,
                             AngularWindow window, const ModelParams& p, FringeOptions opts = {});

/// Same, for the row of `field` at time t (must be one of the field's times).
FringeReport fringe_visibility(const IntensityField& field, Time t, AngularWindow window,
                               const ModelParams& p, FringeOptions opts = {});

} // namespace icdecay
