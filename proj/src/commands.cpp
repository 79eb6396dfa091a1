#include "icdecay/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <variant>

#include <json.hpp>

#include "icdecay/fringes.hpp"
#include "icdecay/intensity.hpp"
#include "icdecay/oracle.hpp"
#include "icdecay/wavepacket.hpp"

namespace icdecay {

namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

using Cell = std::variant<double, long long, std::string>;

struct Table
{
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string format_double(double v)
{
    if (!std::isfinite(v))
        return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_string(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

std::string csv_cell(const Cell& c)
{
    if (const double* d = std::get_if<double>(&c))
        return format_double(*d);
    if (const long long* i = std::get_if<long long>(&c))
        return std::to_string(*i);
    return csv_string(std::get<std::string>(c));
}

// Non-finite doubles become null, since JSON has no literal for them.
nlohmann::ordered_json json_cell(const Cell& c)
{
    if (const double* d = std::get_if<double>(&c))
        return std::isfinite(*d) ? nlohmann::ordered_json(*d) : nlohmann::ordered_json(nullptr);
    if (const long long* i = std::get_if<long long>(&c))
        return *i;
    return std::get<std::string>(c);
}

/// Writes `stem`.csv or `stem`.jsonl into dir, replacing any previous file.
fs::path write_table(const fs::path& dir, const std::string& stem, const Table& t, OutputFormat format)
{
    const bool json = format == OutputFormat::jsonl;
    fs::create_directories(dir);
    const fs::path path = dir / (stem + (json ? ".jsonl" : ".csv"));
    std::string text;
    if (!json)
    {
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            text += (i ? "," : "") + t.columns[i];
        text += '\n';
    }
    for (const auto& row : t.rows)
    {
        if (json)
        {
            nlohmann::ordered_json obj = nlohmann::ordered_json::object();
            for (std::size_t i = 0; i < row.size(); ++i)
                obj[t.columns[i]] = json_cell(row[i]);
            text += obj.dump() + '\n';
        }
        else
        {
            for (std::size_t i = 0; i < row.size(); ++i)
                text += (i ? "," : "") + csv_cell(row[i]);
            text += '\n';
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
    out.close();
    if (!out)
        throw std::runtime_error("failed writing '" + path.string() + "'");
    return path;
}

double over_period(Time t, const ModelParams& p) { return t.inv_mev() / rotation_period(p).inv_mev(); }

VerifyCheck at_most(std::string name, double value, double tol)
{
    return {std::move(name), value, tol, true, value <= tol};
}

VerifyCheck at_least(std::string name, double value, double tol)
{
    return {std::move(name), value, tol, false, value >= tol};
}

std::string describe(const VerifyCheck& c)
{
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s %s: %.6g (%s %.6g)", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                  c.value, c.upper_bound ? "<=" : ">=", c.tolerance);
    return buf;
}

/// First overlap strictly after t_after, searching n_periods revolutions.
std::optional<OverlapEvent> first_overlap_after(const ModelParams& p, Time t_after, int n_periods)
{
    for (const auto& ev : overlap_schedule(p, n_periods))
        if (ev.t > t_after)
            return ev;
    return std::nullopt;
}

FringeReport fringes_at(const ModelParams& p, const DephasingScenario& s, Time t, double center_rad,
                        const RunConfig& cfg)
{
    const TimeGrid tg{{t}};
    const auto ag = AngularGrid::uniform_degrees(cfg.theta_step_deg);
    const auto field = intensity_map(tg, ag, p, s);
    return analyze_fringes(field.row(0), field.angles, t,
                           {center_rad, cfg.fringe_half_width_deg * pi / 180.0}, p);
}

} // namespace

CommandOutcome cmd_panels(const RunConfig& cfg)
{
    const ModelParams& p = cfg.model;
    const auto tg = TimeGrid::panel_times(p);
    const auto ag = AngularGrid::uniform_degrees(cfg.theta_step_deg);
    const auto field = intensity_map(tg, ag, p, cfg.scenario);

    CommandOutcome out;
    for (std::size_t it = 0; it < tg.times.size(); ++it)
    {
        Table t{{"theta_deg", "intensity_normalized"}, {}};
        const auto row = field.row(it);
        for (std::size_t ia = 0; ia < ag.angles.size(); ++ia)
            t.rows.push_back({ag.angles[ia].degrees(), row[ia]});
        const std::string stem = std::string("panel_") + static_cast<char>('a' + it);
        out.files.push_back(write_table(cfg.output_dir, stem, t, cfg.format));
    }

    Table manifest{{"quantity", "value", "unit"}, {}};
    manifest.rows.push_back({std::string("rotation_period"), rotation_period(p).to_seconds(), std::string("s")});
    manifest.rows.push_back({std::string("normalization_A"), field.norm_A, std::string("")});
    manifest.rows.push_back({std::string("fringe_spacing"), fringe_spacing(p), std::string("rad")});
    manifest.rows.push_back({std::string("scenario"), to_string(cfg.scenario.mode), std::string("")});
    for (std::size_t it = 0; it < tg.times.size(); ++it)
        manifest.rows.push_back({std::string("panel_") + static_cast<char>('a' + it) + "_time",
                                 tg.times[it].to_seconds(), std::string("s")});
    out.files.push_back(write_table(cfg.output_dir, "manifest", manifest, cfg.format));
    out.messages.push_back("wrote " + std::to_string(out.files.size()) + " files to " +
                           cfg.output_dir.string());
    return out;
}

CommandOutcome cmd_map(const RunConfig& cfg)
{
    const ModelParams& p = cfg.model;
    const TimeGrid tg{cfg.times};
    const auto ag = AngularGrid::uniform_degrees(cfg.theta_step_deg);
    const auto field = intensity_map(tg, ag, p, cfg.scenario);

    Table t{{"t_seconds", "t_over_T", "theta_deg", "intensity_normalized"}, {}};
    for (std::size_t it = 0; it < tg.times.size(); ++it)
        for (std::size_t ia = 0; ia < ag.angles.size(); ++ia)
            t.rows.push_back({tg.times[it].to_seconds(), over_period(tg.times[it], p),
                              ag.angles[ia].degrees(), field.at(it, ia)});
    CommandOutcome out;
    out.files.push_back(write_table(cfg.output_dir, "map", t, cfg.format));
    out.messages.push_back("wrote " + out.files.back().string());
    return out;
}

CommandOutcome cmd_fringes(const RunConfig& cfg)
{
    const ModelParams& p = cfg.model;
    const TimeGrid tg{cfg.times};
    const auto ag = AngularGrid::uniform_degrees(cfg.theta_step_deg);
    const auto field = intensity_map(tg, ag, p, cfg.scenario);

    Table t{{"t_seconds", "t_over_T", "region_center_deg", "visibility", "fringe_spacing_rad",
             "peak_compensated", "extrema", "diagnostic"},
            {}};
    for (std::size_t it = 0; it < tg.times.size(); ++it)
        for (double center_deg : {0.0, 180.0})
        {
            const auto rep = analyze_fringes(field.row(it), field.angles, tg.times[it],
                                             AngularWindow::degrees(center_deg, cfg.fringe_half_width_deg), p);
            t.rows.push_back({tg.times[it].to_seconds(), over_period(tg.times[it], p), center_deg,
                              rep.visibility, rep.fringe_spacing, rep.peak_normalized_intensity,
                              static_cast<long long>(rep.extrema), rep.diagnostic});
        }
    CommandOutcome out;
    out.files.push_back(write_table(cfg.output_dir, "fringes", t, cfg.format));
    out.messages.push_back("wrote " + out.files.back().string());
    return out;
}

std::vector<VerifyCheck> run_verification(const RunConfig& cfg)
{
    if (!cfg.oracle)
        throw ConfigError("verify needs oracle_spacing_mev in the config");
    const ModelParams& p = cfg.model;
    const DephasingScenario& s = cfg.scenario;
    const Time period = rotation_period(p);
    std::vector<VerifyCheck> checks;

    const DecayIntensity model(p, s);
    checks.push_back(at_most("normalization_at_origin",
                             std::abs(model.normalized(Time::inv_mev(0.0), Angle(0.0)) - 1.0), 1e-12));

    {
        const auto tg = TimeGrid::panel_times(p);
        const auto ag = AngularGrid::uniform_degrees(cfg.theta_step_deg);
        const auto flat = intensity_map(tg, ag, p, DephasingScenario::rmt());
        double worst = 0.0;
        for (std::size_t it = 0; it < tg.times.size(); ++it)
            for (double v : flat.row(it))
                worst = std::max(worst, std::abs(v - std::exp(-p.gamma * tg.times[it].inv_mev())));
        checks.push_back(at_most("rmt_limit_flatness", worst, 1e-12));
    }

    // Fringe tolerances refer to the head-on overlap pattern, which needs the
    // coherent scenario and a zero deflection angle.
    if (s.mode == ScenarioMode::coherent && p.phi == 0.0)
    {
        const auto tg = TimeGrid::panel_times(p);
        const auto ag = AngularGrid::uniform_degrees(cfg.theta_step_deg);
        const auto field = intensity_map(tg, ag, p, s);
        const double hw = cfg.fringe_half_width_deg;
        auto report = [&](double frac, double center_deg) {
            return fringe_visibility(field, frac * period, AngularWindow::degrees(center_deg, hw), p);
        };
        const auto t0 = report(0.0, 0.0);
        const auto half = report(0.5, 180.0);
        checks.push_back(at_least("visibility_t0_near_0", t0.visibility, 0.9));
        checks.push_back(at_most("spacing_T/2_near_pi_rel_error",
                                 std::abs(half.fringe_spacing / fringe_spacing(p) - 1.0), 0.05));
        checks.push_back(at_most("visibility_5T/16_near_pi", report(5.0 / 16.0, 180.0).visibility, 0.05));
        checks.push_back(at_least("visibility_T/2_near_pi", half.visibility, 0.9));
        const double ratio = report(1.0, 0.0).peak_normalized_intensity / t0.peak_normalized_intensity;
        VerifyCheck c = at_most("compensated_peak_T_over_t0", ratio, 1.0);
        c.passed = ratio < 1.0;
        checks.push_back(c);

        std::vector<Time> times;
        for (int i = 0; i <= 12; ++i)
            times.push_back((0.1 + 0.025 * i) * period);
        std::vector<Angle> angles;
        for (int i = 0; i <= 60; ++i)
            angles.emplace_back(0.3 + (pi - 0.6) * i / 60.0);
        const auto agree = route_agreement(p, times, angles, 0.1 * period, Angle(pi / 2.0));
        checks.push_back(at_most("route_agreement_eq3_eq2", agree.max_rel_deviation, 0.05));
    }

    {
        std::vector<Time> times;
        for (int i = 0; i < 20; ++i)
            times.push_back((0.05 + 0.05 * i) * period);
        times.push_back(-0.1 * period);
        double worst = 0.0;
        for (double th : {0.0, pi / 4.0, pi / 2.0, 3.0 * pi / 4.0, pi})
            worst = std::max(worst, ft_consistency(Angle(th), p, s, times).max_rel_error);
        checks.push_back(at_most("fourier_consistency", worst, 0.01));
    }

    {
        const double span = cfg.oracle->span.value_or(required_span(p, s));
        const ResonanceSpectrum spec{cfg.oracle->spacing, span, 0.0};
        validate_spectrum(spec, p, s, SpectrumChecks::full);

        const auto tg = TimeGrid::panel_times(p);
        std::vector<Angle> angles;
        for (int i = 0; i < 36; ++i)
            angles.push_back(Angle::degrees(10.0 * i));
        std::vector<double> spacings = {p.beta / 10.0, p.beta / 25.0, p.beta / 50.0};
        const bool in_sequence = std::any_of(spacings.begin(), spacings.end(), [&](double x) {
            return std::abs(x - spec.spacing) <= 1e-12 * x;
        });
        if (!in_sequence)
            spacings.push_back(spec.spacing);
        const auto rows = convergence_report(spacings, p, s, tg.times, angles, span);
        double agreement = 0.0;
        for (const auto& r : rows)
            if (std::abs(r.spacing - spec.spacing) <= 1e-12 * r.spacing)
                agreement = r.max_rel_error;
        checks.push_back(at_most("oracle_agreement", agreement, 0.01));
        const std::span<const ConvergenceRow> sequence(rows.data(), 3);
        double rise = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < sequence.size(); ++i)
            rise = std::max(rise, (sequence[i].max_rel_error - sequence[i - 1].max_rel_error) /
                                      sequence[i - 1].max_rel_error);
        VerifyCheck mono = at_most("oracle_convergence_rise", rise,
                                   static_cast<double>(sequence.back().levels) *
                                       std::numeric_limits<double>::epsilon());
        mono.passed = converges_monotonically(sequence);
        checks.push_back(mono);
    }
    return checks;
}

CommandOutcome cmd_verify(const RunConfig& cfg)
{
    const auto checks = run_verification(cfg);
    Table t{{"check", "value", "tolerance", "bound", "passed"}, {}};
    CommandOutcome out;
    for (const auto& c : checks)
    {
        t.rows.push_back({c.name, c.value, c.tolerance, std::string(c.upper_bound ? "max" : "min"),
                          static_cast<long long>(c.passed)});
        out.messages.push_back(describe(c));
        if (!c.passed)
            out.exit_code = 1;
    }
    out.files.push_back(write_table(cfg.output_dir, "verify", t, cfg.format));
    return out;
}

CommandOutcome cmd_scan(const RunConfig& cfg)
{
    CommandOutcome out;
    const Time period = rotation_period(cfg.model);

    Table beta_table{{"beta_mev", "t_seconds", "t_over_T", "overlap_deg", "visibility",
                      "fringe_spacing_rad", "peak_compensated"},
                     {}};
    double previous = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    for (double beta : cfg.scan_beta)
    {
        ModelParams p = cfg.model;
        p.beta = beta;
        p.check_computable();
        const auto ev = first_overlap_after(p, Time::inv_mev(0.0), 2);
        if (!ev)
            throw std::runtime_error("scan: no overlap within two periods");
        const auto rep = fringes_at(p, DephasingScenario::coherent(), ev->t, ev->angle, cfg);
        beta_table.rows.push_back({beta, ev->t.to_seconds(), ev->t.inv_mev() / period.inv_mev(),
                                   ev->angle * 180.0 / pi, rep.visibility, rep.fringe_spacing,
                                   rep.peak_normalized_intensity});
        decreasing = decreasing && rep.visibility < previous;
        previous = rep.visibility;
    }
    out.files.push_back(write_table(cfg.output_dir, "scan_beta", beta_table, cfg.format));
    out.messages.push_back(std::string("beta scan: visibility ") +
                           (decreasing ? "strictly decreasing" : "NOT strictly decreasing") +
                           " over the listed beta values");

    if (!cfg.scan_omega_dot.empty())
    {
        Table w_table{{"omega_dot_mev", "t_wash_seconds", "t_seconds", "t_over_T", "overlap_deg",
                       "visibility"},
                      {}};
        for (double w : cfg.scan_omega_dot)
        {
            const auto s = DephasingScenario::j_dependent(w);
            const Time t_wash = washout_time(cfg.model, s).t;
            if (!std::isfinite(t_wash.inv_mev()))
            {
                w_table.rows.push_back({w, t_wash.to_seconds(), std::nan(""), std::nan(""), std::nan(""),
                                        std::nan("")});
                continue;
            }
            const int periods = static_cast<int>(std::ceil(t_wash.inv_mev() / period.inv_mev())) + 2;
            const auto ev = first_overlap_after(cfg.model, t_wash, periods);
            const auto rep = fringes_at(cfg.model, s, ev->t, ev->angle, cfg);
            w_table.rows.push_back({w, t_wash.to_seconds(), ev->t.to_seconds(),
                                    ev->t.inv_mev() / period.inv_mev(), ev->angle * 180.0 / pi,
                                    rep.visibility});
        }
        out.files.push_back(write_table(cfg.output_dir, "scan_omega_dot", w_table, cfg.format));
    }
    out.messages.push_back("wrote " + std::to_string(out.files.size()) + " files to " +
                           cfg.output_dir.string());
    return out;
}

} // namespace icdecay
