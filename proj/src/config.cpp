#include "icdecay/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace icdecay {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<double> to_number(std::string_view s)
{
    s = trim(s);
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        return std::nullopt;
    return v;
}

std::vector<std::string_view> split_list(std::string_view s)
{
    std::vector<std::string_view> out;
    while (true)
    {
        const auto comma = s.find(',');
        out.push_back(trim(s.substr(0, comma)));
        if (comma == std::string_view::npos)
            break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

struct Entry
{
    std::string value;
    int line = 0;
};

[[noreturn]] void fail(int line, const std::string& msg)
{
    throw ConfigError(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg);
}

double number_of(const std::string& key, const Entry& e)
{
    const auto v = to_number(e.value);
    if (!v)
        fail(e.line, key + ": expected a number, got '" + e.value + "'");
    return *v;
}

std::vector<double> numbers_of(const std::string& key, const Entry& e)
{
    std::vector<double> out;
    for (auto tok : split_list(e.value))
    {
        const auto v = to_number(tok);
        if (!v)
            fail(e.line, key + ": expected a comma-separated list of numbers");
        out.push_back(*v);
    }
    return out;
}

bool boolean_of(const std::string& key, const Entry& e)
{
    if (e.value == "true" || e.value == "1")
        return true;
    if (e.value == "false" || e.value == "0")
        return false;
    fail(e.line, key + ": expected true or false");
}

} // namespace

const std::vector<ConfigKey>& config_keys()
{
    static const std::vector<ConfigKey> keys = {
        {"preset", "named parameter set; c12_mg24 is the only one. Other keys override it"},
        {"phi_rad", "deflection angle Phi in rad"},
        {"d", "spin window width, >= 1"},
        {"I", "average spin, inside the summation window"},
        {"beta_mev", "spin dephasing width beta in MeV, > 0"},
        {"hbar_omega_mev", "rotational quantum hbar omega in MeV, > 0"},
        {"gamma_mev", "total decay width Gamma in MeV, > 0"},
        {"d_spacing_mev", "mean level spacing D in MeV, below beta and Gamma"},
        {"window_absorbs_degeneracy", "true (default) if the spin window includes (2J+1)^2"},
        {"scenario", "coherent (default), rmt_limit or j_dependent_omega"},
        {"omega_dot_mev", "hbar d(omega)/dJ in MeV; required for j_dependent_omega"},
        {"theta_step_deg", "angular grid step in degrees (default 0.5)"},
        {"times", "comma list: 5T/16, 0.25T, T, bare fractions of T, or seconds as 3e-21s"},
        {"oracle_spacing_mev", "picket-fence spacing of the resonance-sum oracle (verify)"},
        {"oracle_span_mev", "averaging window of the oracle (default the minimum admissible span)"},
        {"output_dir", "directory for output files (overridden by --output)"},
        {"format", "csv (default) or jsonl"},
        {"fringe_half_width_deg", "half width of the fringe windows around 0 and 180 degrees"},
        {"scan_beta_mev", "beta values for scan (default 0, 0.01, 0.05, 0.2)"},
        {"scan_omega_dot_mev", "omega_dot values for scan (default none)"},
    };
    return keys;
}

Time parse_time(std::string_view token, const ModelParams& p)
{
    std::string_view s = trim(token);
    if (s.empty())
        throw ConfigError("empty time");
    const Time period = rotation_period(p);
    if (s.back() == 's')
    {
        const auto v = to_number(s.substr(0, s.size() - 1));
        if (!v)
            throw ConfigError("bad time in seconds: '" + std::string(token) + "'");
        return Time::seconds(*v);
    }
    const auto tpos = s.find('T');
    if (tpos == std::string_view::npos)
    {
        const auto v = to_number(s);
        if (!v)
            throw ConfigError("bad time: '" + std::string(token) + "'");
        return *v * period;
    }
    double num = 1.0;
    double den = 1.0;
    const auto head = trim(s.substr(0, tpos));
    auto rest = trim(s.substr(tpos + 1));
    if (!head.empty())
    {
        const auto v = to_number(head);
        if (!v)
            throw ConfigError("bad time: '" + std::string(token) + "'");
        num = *v;
    }
    if (!rest.empty())
    {
        const auto v = rest.front() == '/' ? to_number(rest.substr(1)) : std::nullopt;
        if (!v || *v == 0.0)
            throw ConfigError("bad time: '" + std::string(token) + "'");
        den = *v;
    }
    return (num / den) * period;
}

RunConfig parse_config(std::string_view text)
{
    std::map<std::string, Entry> entries;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw))
    {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            fail(line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        const auto& keys = config_keys();
        if (std::none_of(keys.begin(), keys.end(), [&](const ConfigKey& k) { return k.name == key; }))
            fail(line_no, "unknown key '" + key + "'");
        if (value.empty())
            fail(line_no, key + ": missing value");
        if (auto it = entries.find(key); it != entries.end())
            fail(line_no, key + ": already set on line " + std::to_string(it->second.line));
        entries[key] = {value, line_no};
    }

    RunConfig cfg;
    auto get = [&](const char* key) -> const Entry* {
        auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    };

    if (const Entry* e = get("preset"))
    {
        if (e->value != "c12_mg24")
            fail(e->line, "preset: unknown preset '" + e->value + "'");
        cfg.model = ModelParams::c12_mg24();
    }
    else
    {
        std::string missing;
        for (const char* key : {"phi_rad", "d", "I", "beta_mev", "hbar_omega_mev", "gamma_mev",
                                "d_spacing_mev"})
            if (!get(key))
                missing += std::string(missing.empty() ? "" : ", ") + key;
        if (!missing.empty())
            fail(0, "no preset given and required keys are missing: " + missing);
    }

    ModelParams& m = cfg.model;
    struct Field
    {
        const char* key;
        double* target;
    };
    for (const Field f : {Field{"phi_rad", &m.phi}, Field{"d", &m.d}, Field{"I", &m.I_avg},
                          Field{"beta_mev", &m.beta}, Field{"hbar_omega_mev", &m.hbar_omega},
                          Field{"gamma_mev", &m.gamma}, Field{"d_spacing_mev", &m.d_spacing}})
        if (const Entry* e = get(f.key))
            *f.target = number_of(f.key, *e);
    if (const Entry* e = get("window_absorbs_degeneracy"))
        m.window_absorbs_degeneracy = boolean_of("window_absorbs_degeneracy", *e);
    // d or I may have changed; d >= 1 is checked below so the window is finite
    if (m.d > 0.0 && std::isfinite(m.d) && std::isfinite(m.I_avg))
        m.set_default_window();
    try
    {
        m.validate();
    }
    catch (const InvalidParameters& ex)
    {
        fail(0, ex.what());
    }

    if (const Entry* e = get("scenario"))
    {
        if (e->value == "coherent")
            cfg.scenario = DephasingScenario::coherent();
        else if (e->value == "rmt_limit")
            cfg.scenario = DephasingScenario::rmt();
        else if (e->value == "j_dependent_omega")
        {
            const Entry* w = get("omega_dot_mev");
            if (!w)
                fail(e->line, "scenario j_dependent_omega needs omega_dot_mev");
            cfg.scenario = DephasingScenario::j_dependent(number_of("omega_dot_mev", *w));
        }
        else
            fail(e->line, "scenario: expected coherent, rmt_limit or j_dependent_omega");
    }
    if (const Entry* w = get("omega_dot_mev"); w && cfg.scenario.mode != ScenarioMode::j_dependent_omega)
        fail(w->line, "omega_dot_mev is only meaningful with scenario = j_dependent_omega");

    if (const Entry* e = get("theta_step_deg"))
    {
        cfg.theta_step_deg = number_of("theta_step_deg", *e);
        if (!(cfg.theta_step_deg > 0.0 && cfg.theta_step_deg <= 90.0))
            fail(e->line, "theta_step_deg: must lie in (0, 90]");
    }

    if (const Entry* e = get("times"))
    {
        for (auto tok : split_list(e->value))
        {
            try
            {
                cfg.times.push_back(parse_time(tok, m));
            }
            catch (const ConfigError& ex)
            {
                fail(e->line, std::string("times: ") + ex.what());
            }
        }
        if (!std::is_sorted(cfg.times.begin(), cfg.times.end()))
            fail(e->line, "times: must be listed in increasing order");
    }
    else
        cfg.times = TimeGrid::panel_times(m).times;

    if (const Entry* e = get("oracle_spacing_mev"))
    {
        OracleSpec o;
        o.spacing = number_of("oracle_spacing_mev", *e);
        if (!(o.spacing > 0.0))
            fail(e->line, "oracle_spacing_mev: must be positive");
        if (const Entry* s = get("oracle_span_mev"))
            o.span = number_of("oracle_span_mev", *s);
        cfg.oracle = o;
    }
    else if (const Entry* s = get("oracle_span_mev"))
        fail(s->line, "oracle_span_mev given without oracle_spacing_mev");

    if (const Entry* e = get("output_dir"))
        cfg.output_dir = e->value;
    if (const Entry* e = get("format"))
    {
        if (e->value == "csv")
            cfg.format = OutputFormat::csv;
        else if (e->value == "jsonl")
            cfg.format = OutputFormat::jsonl;
        else
            fail(e->line, "format: expected csv or jsonl");
    }
    if (const Entry* e = get("fringe_half_width_deg"))
    {
        cfg.fringe_half_width_deg = number_of("fringe_half_width_deg", *e);
        if (!(cfg.fringe_half_width_deg > 0.0 && cfg.fringe_half_width_deg <= 90.0))
            fail(e->line, "fringe_half_width_deg: must lie in (0, 90]");
    }
    if (const Entry* e = get("scan_beta_mev"))
    {
        cfg.scan_beta = numbers_of("scan_beta_mev", *e);
        if (std::any_of(cfg.scan_beta.begin(), cfg.scan_beta.end(), [](double b) { return b < 0.0; }))
            fail(e->line, "scan_beta_mev: values must be >= 0");
    }
    if (const Entry* e = get("scan_omega_dot_mev"))
        cfg.scan_omega_dot = numbers_of("scan_omega_dot_mev", *e);
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace icdecay
