#include "icdecay/fringes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace icdecay {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;

double signed_offset(double angle, double center)
{
    double d = std::fmod(angle - center, two_pi);
    if (d > pi)
        d -= two_pi;
    else if (d < -pi)
        d += two_pi;
    return d;
}

struct Sample
{
    double offset;
    double value;
};

struct Extremum
{
    std::size_t index;
    bool is_max;
};

// Zig-zag extrema with hysteresis h. The first and last samples are never
// reported, nor is the final unconfirmed turning point.
std::vector<Extremum> significant_extrema(const std::vector<Sample>& s, double h)
{
    std::vector<Extremum> out;
    if (s.size() < 3)
        return out;
    int dir = 0;
    std::size_t hi_i = 0;
    std::size_t lo_i = 0;
    std::size_t ref_i = 0;
    for (std::size_t i = 1; i < s.size(); ++i)
    {
        const double x = s[i].value;
        if (dir == 0)
        {
            if (x > s[hi_i].value)
                hi_i = i;
            if (x < s[lo_i].value)
                lo_i = i;
            if (s[hi_i].value - x >= h)
            {
                if (hi_i > 0)
                    out.push_back({hi_i, true});
                dir = -1;
                ref_i = i;
            }
            else if (x - s[lo_i].value >= h)
            {
                if (lo_i > 0)
                    out.push_back({lo_i, false});
                dir = 1;
                ref_i = i;
            }
        }
        else if (dir > 0)
        {
            if (x > s[ref_i].value)
                ref_i = i;
            else if (s[ref_i].value - x >= h)
            {
                out.push_back({ref_i, true});
                dir = -1;
                ref_i = i;
            }
        }
        else
        {
            if (x < s[ref_i].value)
                ref_i = i;
            else if (x - s[ref_i].value >= h)
            {
                out.push_back({ref_i, false});
                dir = 1;
                ref_i = i;
            }
        }
    }
    return out;
}

// Vertex of the parabola through three neighbouring samples.
double refine_peak(const std::vector<Sample>& s, std::size_t i)
{
    if (i == 0 || i + 1 >= s.size())
        return s[i].offset;
    const double y0 = s[i - 1].value;
    const double y1 = s[i].value;
    const double y2 = s[i + 1].value;
    const double denom = y0 - 2.0 * y1 + y2;
    const double h = 0.5 * (s[i + 1].offset - s[i - 1].offset);
    if (denom == 0.0)
        return s[i].offset;
    const double shift = 0.5 * (y0 - y2) / denom;
    return s[i].offset + std::clamp(shift, -1.0, 1.0) * h;
}

bool in_collar(double angle, double collar)
{
    const double t = Angle(angle).reduced();
    return t < collar || pi - t < collar;
}

// True if the arc from a to b (a < b, absolute angles) passes theta = 0 or pi.
bool crosses_axis(double a, double b)
{
    const double first = std::ceil(a / pi);
    return first * pi <= b;
}

} // namespace

AngularWindow AngularWindow::degrees(double center_deg, double half_width_deg)
{
    return {center_deg * pi / 180.0, half_width_deg * pi / 180.0};
}

FringeReport analyze_fringes(std::span<const double> row, std::span<const Angle> angles, Time t,
                             AngularWindow window, const ModelParams& p, FringeOptions opts)
{
    if (row.size() != angles.size())
        throw std::invalid_argument("analyze_fringes: row and angle grid differ in size");
    if (!(window.half_width > 0.0))
        throw std::invalid_argument("analyze_fringes: window half width must be positive");

    FringeReport rep;
    rep.t = t;
    rep.region_center = window.center;
    rep.fringe_spacing = std::numeric_limits<double>::quiet_NaN();

    std::vector<Sample> s;
    double slice_max = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i)
    {
        slice_max = std::max(slice_max, row[i]);
        const double off = signed_offset(angles[i].radians(), window.center);
        if (std::abs(off) <= window.half_width + 1e-12)
            s.push_back({off, row[i]});
    }
    std::sort(s.begin(), s.end(), [](const Sample& a, const Sample& b) { return a.offset < b.offset; });

    const double compensation = std::exp(p.gamma * t.inv_mev());
    for (const auto& x : s)
        rep.peak_normalized_intensity = std::max(rep.peak_normalized_intensity, x.value * compensation);

    const auto ext = significant_extrema(s, opts.prominence_fraction * slice_max);
    rep.extrema = static_cast<int>(ext.size());
    if (ext.size() < 2)
    {
        rep.visibility = 0.0;
        rep.diagnostic = "no fringes: fewer than two significant interior extrema";
        return rep;
    }
    double vmax = -std::numeric_limits<double>::infinity();
    double vmin = std::numeric_limits<double>::infinity();
    for (const auto& e : ext)
    {
        vmax = std::max(vmax, s[e.index].value);
        vmin = std::min(vmin, s[e.index].value);
    }
    rep.visibility = vmax + vmin > 0.0 ? (vmax - vmin) / (vmax + vmin) : 0.0;

    const double collar = 1.0 / p.I_avg;
    std::vector<double> peaks;
    for (const auto& e : ext)
        if (e.is_max)
            peaks.push_back(window.center + refine_peak(s, e.index));
    double total = 0.0;
    int intervals = 0;
    for (std::size_t i = 1; i < peaks.size(); ++i)
    {
        const double a = peaks[i - 1];
        const double b = peaks[i];
        if (in_collar(a, collar) || in_collar(b, collar) || crosses_axis(a, b))
            continue;
        total += b - a;
        ++intervals;
    }
    if (intervals > 0)
        rep.fringe_spacing = total / intervals;
    else
        rep.diagnostic = "spacing undetermined: no adjacent peak pair outside the axis collar";
    return rep;
}

FringeReport fringe_visibility(const IntensityField& field, Time t, AngularWindow window,
                               const ModelParams& p, FringeOptions opts)
{
    for (std::size_t it = 0; it < field.times.size(); ++it)
    {
        const double a = field.times[it].inv_mev();
        if (std::abs(a - t.inv_mev()) <= 1e-12 * std::max(1.0, std::abs(a)))
            return analyze_fringes(field.row(it), field.angles, t, window, p, opts);
    }
    throw std::invalid_argument("fringe_visibility: time not on the field's grid");
}

} // namespace icdecay
