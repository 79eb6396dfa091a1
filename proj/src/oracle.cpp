#include "icdecay/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <numbers>
#include <sstream>

#include "icdecay/parallel.hpp"

namespace icdecay {

namespace {

constexpr double pi = std::numbers::pi;
constexpr std::size_t block_size = 512;

int max_spin_gap(const ModelParams& p) { return p.j_max - p.j_min; }

double max_centre(const SpinPairTable& table)
{
    double m = 0.0;
    for (const auto& pr : table.pairs())
        m = std::max(m, std::abs(pr.frequency));
    return m;
}

[[noreturn]] void reject(const std::string& what, double value, double bound)
{
    std::ostringstream os;
    os.precision(6);
    os << "resonance spectrum: " << what << " (value " << value << ", bound " << bound << ")";
    throw InvalidParameters(os.str());
}

// Accumulates sum_j f_j exp(-i x_j tau_k) for every tau_k over a run of
// equally spaced abscissae x_j = x0 + j step. Phasors are re-seeded exactly
// at the start of each block.
class PhasorAccumulator
{
  public:
    PhasorAccumulator(std::span<const double> taus, double step)
        : taus_(taus.begin(), taus.end()), sum_re_(taus.size(), 0.0), sum_im_(taus.size(), 0.0),
          step_re_(taus.size()), step_im_(taus.size()), z_re_(taus.size()), z_im_(taus.size()),
          acc_re_(taus.size()), acc_im_(taus.size())
    {
        for (std::size_t k = 0; k < taus_.size(); ++k)
        {
            step_re_[k] = std::cos(step * taus_[k]);
            step_im_[k] = -std::sin(step * taus_[k]);
        }
    }

    /// Adds sum_j (re[j] + i im[j]) exp(-i (x0 + j step) tau); `im` may be empty.
    void add_block(double x0, std::span<const double> re, std::span<const double> im = {})
    {
        const std::size_t nt = taus_.size();
        for (std::size_t k = 0; k < nt; ++k)
        {
            z_re_[k] = std::cos(x0 * taus_[k]);
            z_im_[k] = -std::sin(x0 * taus_[k]);
            acc_re_[k] = 0.0;
            acc_im_[k] = 0.0;
        }
        const bool complex_samples = !im.empty();
        for (std::size_t j = 0; j < re.size(); ++j)
        {
            const double a = re[j];
            const double b = complex_samples ? im[j] : 0.0;
            for (std::size_t k = 0; k < nt; ++k)
            {
                acc_re_[k] += a * z_re_[k] - b * z_im_[k];
                acc_im_[k] += a * z_im_[k] + b * z_re_[k];
                const double zr = z_re_[k] * step_re_[k] - z_im_[k] * step_im_[k];
                const double zi = z_re_[k] * step_im_[k] + z_im_[k] * step_re_[k];
                z_re_[k] = zr;
                z_im_[k] = zi;
            }
        }
        for (std::size_t k = 0; k < nt; ++k)
        {
            sum_re_[k] += acc_re_[k];
            sum_im_[k] += acc_im_[k];
        }
    }

    std::complex<double> result(std::size_t k) const { return {sum_re_[k], sum_im_[k]}; }

  private:
    std::vector<double> taus_;
    std::vector<double> sum_re_, sum_im_;
    std::vector<double> step_re_, step_im_;
    std::vector<double> z_re_, z_im_;
    std::vector<double> acc_re_, acc_im_;
};

// Smallest L|tau| at which the asymptotic form of Si below is accurate.
constexpr double tail_threshold = 50.0;

// pi/2 - Si(x) for x >= tail_threshold from the asymptotic auxiliary functions.
double sine_integral_tail(double x)
{
    const double x2 = x * x;
    const double f = (1.0 - 2.0 / x2 + 24.0 / (x2 * x2) - 720.0 / (x2 * x2 * x2)) / x;
    const double g = (1.0 - 6.0 / x2 + 120.0 / (x2 * x2) - 5040.0 / (x2 * x2 * x2)) / x2;
    return f * std::cos(x) + g * std::sin(x);
}

} // namespace

double required_span(const ModelParams& p, const DephasingScenario& s)
{
    const SpinPairTable table(p, s);
    return 100.0 * std::max({p.gamma, p.beta * max_spin_gap(p), max_centre(table)});
}

ResonanceSpectrum ResonanceSpectrum::for_model(const ModelParams& p, const DephasingScenario& s,
                                               double spacing)
{
    return {spacing, required_span(p, s), 0.0};
}

long long ResonanceSpectrum::levels() const
{
    return static_cast<long long>(std::llround(span / spacing));
}

std::vector<double> ResonanceSpectrum::energies() const
{
    const long long n = levels();
    std::vector<double> e(static_cast<std::size_t>(n));
    for (long long mu = 0; mu < n; ++mu)
        e[static_cast<std::size_t>(mu)] = e0 + static_cast<double>(mu) * spacing;
    return e;
}

void validate_spectrum(const ResonanceSpectrum& spec, const ModelParams& p,
                       const DephasingScenario& s, SpectrumChecks checks)
{
    if (!(spec.spacing > 0.0))
        reject("spacing must be positive", spec.spacing, 0.0);
    if (spec.levels() < 1)
        reject("span must hold at least one level", spec.span, spec.spacing);
    if (checks == SpectrumChecks::none)
        return;
    const double need = required_span(p, s);
    if (spec.span < need * (1.0 - 1e-12))
        reject("span below 100 max(Gamma, beta dJ_max, hbar omega dJ_max)", spec.span, need);
    if (checks == SpectrumChecks::span_only)
        return;
    if (spec.spacing > p.beta / 50.0)
        reject("spacing above beta/50", spec.spacing, p.beta / 50.0);
    if (spec.spacing > p.gamma / 50.0)
        reject("spacing above Gamma/50", spec.spacing, p.gamma / 50.0);
}

std::vector<std::complex<double>> reduced_pair_sum(const ResonanceSpectrum& spec, int dj,
                                                   double centre, double beta,
                                                   std::span<const double> taus)
{
    std::vector<std::complex<double>> out(taus.size());
    if (dj == 0)
    {
        // Kronecker diagonal: N equal-energy pairs, each with unit weight.
        std::fill(out.begin(), out.end(), std::complex<double>(1.0, 0.0));
        return out;
    }
    // Reference levels mu fill the averaging window; their partners nu run
    // over the whole picket fence, so every offset |m| < N occurs once per mu
    // and the 1/N normalization leaves unit multiplicity.
    const long long n = spec.levels();
    const double step = spec.spacing;

    PhasorAccumulator acc(taus, step);
    std::array<double, block_size> f{};
    for (long long m0 = -(n - 1); m0 <= n - 1; m0 += static_cast<long long>(block_size))
    {
        const long long m1 = std::min<long long>(m0 + static_cast<long long>(block_size), n);
        const std::size_t len = static_cast<std::size_t>(m1 - m0);
        for (std::size_t j = 0; j < len; ++j)
        {
            const long long m = m0 + static_cast<long long>(j);
            f[j] = lorentz_correlator(dj, centre, spec.spacing, beta, static_cast<double>(m) * step);
        }
        acc.add_block(static_cast<double>(m0) * step, std::span<const double>(f.data(), len));
    }
    for (std::size_t k = 0; k < taus.size(); ++k)
        out[k] = acc.result(k);
    return out;
}

ResonanceOracle::ResonanceOracle(const ResonanceSpectrum& spec, const ModelParams& p,
                                 const DephasingScenario& s, std::span<const Time> times,
                                 SpectrumChecks checks)
    : table_(p, s), times_(times.begin(), times.end())
{
    validate_spectrum(spec, p, s, checks);
    std::vector<double> taus;
    taus.reserve(times_.size());
    for (Time t : times_)
        taus.push_back(std::max(0.0, t.inv_mev()));

    // Pairs sharing (dJ, centre) share their level sum.
    using Key = std::pair<int, double>;
    std::map<Key, std::size_t> unique_index;
    std::vector<Key> keys;
    std::vector<std::size_t> pair_key(table_.pairs().size());
    for (std::size_t i = 0; i < table_.pairs().size(); ++i)
    {
        const auto& pr = table_.pairs()[i];
        const Key key{pr.j_index - pr.jp_index, pr.frequency};
        auto [it, inserted] = unique_index.try_emplace(key, keys.size());
        if (inserted)
            keys.push_back(key);
        pair_key[i] = it->second;
    }
    std::vector<std::vector<std::complex<double>>> sums(keys.size());
    detail::parallel_for(keys.size(), [&](std::size_t k) {
        sums[k] = reduced_pair_sum(spec, keys[k].first, keys[k].second, p.beta, taus);
    });
    level_sums_.resize(table_.pairs().size());
    for (std::size_t i = 0; i < pair_key.size(); ++i)
        level_sums_[i] = sums[pair_key[i]];
}

double ResonanceOracle::intensity(std::size_t time_index, Angle theta) const
{
    const double tau = times_.at(time_index).inv_mev();
    if (tau < 0.0)
        return 0.0;
    const auto& p = table_.params();
    const auto full = legendre_table(p.j_max, theta);
    const std::span<const double> leg(full.data() + p.j_min, static_cast<std::size_t>(p.spin_count()));
    double sum = 0.0;
    for (std::size_t i = 0; i < table_.pairs().size(); ++i)
    {
        const auto& pr = table_.pairs()[i];
        const std::complex<double> term = std::polar(1.0, pr.phase) * level_sums_[i][time_index];
        const double c = pr.weight * term.real() * leg[pr.j_index] * leg[pr.jp_index];
        sum += pr.diagonal() ? c : 2.0 * c;
    }
    return std::exp(-p.gamma * tau) * sum;
}

double eq1_intensity(Time t, Angle theta, const ResonanceSpectrum& spec, const ModelParams& p,
                     const DephasingScenario& s)
{
    if (t.inv_mev() < 0.0)
    {
        validate_spectrum(spec, p, s);
        return 0.0;
    }
    const std::array<Time, 1> times{t};
    return ResonanceOracle(spec, p, s, times).intensity(0, theta);
}

Autocorrelation::Autocorrelation(const ModelParams& p, const DephasingScenario& s, Angle theta)
{
    const SpinPairTable table(p, s);
    const auto full = legendre_table(p.j_max, theta);
    const double* leg = full.data() + p.j_min;
    std::vector<Pole> raw;
    raw.reserve(2 * table.pairs().size());
    for (const auto& pr : table.pairs())
    {
        const double mag = pr.weight * leg[pr.j_index] * leg[pr.jp_index];
        const double width = p.gamma + pr.dephasing;
        raw.push_back({pr.frequency, width, std::polar(mag, pr.phase)});
        if (!pr.diagonal())
            raw.push_back({-pr.frequency, width, std::polar(mag, -pr.phase)});
    }
    std::sort(raw.begin(), raw.end(), [](const Pole& a, const Pole& b) {
        return a.centre != b.centre ? a.centre < b.centre : a.width < b.width;
    });
    for (const auto& pole : raw)
    {
        if (!poles_.empty())
        {
            auto& last = poles_.back();
            const double scale = 1e-12 * std::max({1.0, std::abs(pole.centre), pole.width});
            if (std::abs(last.centre - pole.centre) <= scale && std::abs(last.width - pole.width) <= scale)
            {
                last.weight += pole.weight;
                continue;
            }
        }
        poles_.push_back(pole);
    }
}

std::complex<double> Autocorrelation::operator()(double epsilon) const
{
    // (i / 2pi) / (x + i g) = (g + i x) / (2pi (x^2 + g^2))
    double re = 0.0;
    double im = 0.0;
    for (const auto& pole : poles_)
    {
        const double x = epsilon - pole.centre;
        const double inv = 1.0 / (x * x + pole.width * pole.width);
        re += (pole.weight.real() * pole.width - pole.weight.imag() * x) * inv;
        im += (pole.weight.imag() * pole.width + pole.weight.real() * x) * inv;
    }
    return {re / (2.0 * pi), im / (2.0 * pi)};
}

std::complex<double> Autocorrelation::total_weight() const
{
    std::complex<double> w;
    for (const auto& pole : poles_)
        w += pole.weight;
    return w;
}

double Autocorrelation::pole_extent() const
{
    double e = 0.0;
    for (const auto& pole : poles_)
        e = std::max(e, std::abs(pole.centre) + pole.width);
    return e;
}

std::complex<double> autocorrelation_rho(double epsilon, Angle theta, const ModelParams& p,
                                         const DephasingScenario& s)
{
    return Autocorrelation(p, s, theta)(epsilon);
}

FourierCheck ft_consistency(Angle theta, const ModelParams& p, const DephasingScenario& s,
                            std::span<const Time> times, FourierOptions opts)
{
    const Autocorrelation rho(p, s, theta);
    std::vector<double> taus;
    double shortest = std::numeric_limits<double>::infinity();
    for (Time t : times)
    {
        taus.push_back(t.inv_mev());
        if (t.inv_mev() != 0.0)
            shortest = std::min(shortest, std::abs(t.inv_mev()));
    }
    // The range must also reach the regime where the 1/eps tail has a closed
    // form at the shortest time.
    double half_range = opts.range_factor * rho.pole_extent();
    if (std::isfinite(shortest))
        half_range = std::max(half_range, tail_threshold / shortest);
    double finest = std::numeric_limits<double>::infinity();
    for (const auto& pole : rho.poles())
        finest = std::min(finest, pole.width);
    const double step = finest / opts.step_divisor;
    const auto n_steps = static_cast<long long>(std::ceil(2.0 * half_range / step));
    const double h = 2.0 * half_range / static_cast<double>(n_steps);

    PhasorAccumulator acc(taus, h);
    std::array<double, block_size> fre{};
    std::array<double, block_size> fim{};
    for (long long j0 = 0; j0 <= n_steps; j0 += static_cast<long long>(block_size))
    {
        const long long j1 = std::min<long long>(j0 + static_cast<long long>(block_size), n_steps + 1);
        const std::size_t len = static_cast<std::size_t>(j1 - j0);
        for (std::size_t k = 0; k < len; ++k)
        {
            const long long j = j0 + static_cast<long long>(k);
            const double eps = -half_range + static_cast<double>(j) * h;
            const double w = (j == 0 || j == n_steps) ? 0.5 * h : h;
            const auto r = rho(eps);
            fre[k] = w * r.real();
            fim[k] = w * r.imag();
        }
        acc.add_block(-half_range + static_cast<double>(j0) * h, std::span<const double>(fre.data(), len),
                      std::span<const double>(fim.data(), len));
    }

    const DecayIntensity closed(p, s);
    const std::complex<double> w_total = rho.total_weight();
    // Expanding 1/(eps - a) in powers of a/eps gives the 1/eps^2 coefficient
    // and a bound on everything beyond it.
    std::complex<double> second{};
    double third = 0.0;
    for (const auto& pole : rho.poles())
    {
        const std::complex<double> a{pole.centre, -pole.width};
        second += pole.weight * a;
        third += std::abs(pole.weight) * std::norm(a);
    }
    const double p0 = std::abs(w_total.real());
    double ref_max = p0;
    for (std::size_t k = 0; k < taus.size(); ++k)
        if (taus[k] >= 0.0)
            ref_max = std::max(ref_max, std::abs(closed(times[k], theta)));
    FourierCheck out;
    for (std::size_t k = 0; k < taus.size(); ++k)
    {
        const double tau = taus[k];
        const double x = half_range * std::abs(tau);
        double numeric = acc.result(k).real();
        double tail = std::numeric_limits<double>::infinity();
        if (x >= tail_threshold)
        {
            // rho ~ i W / (2 pi eps) beyond the range; its transform over
            // |eps| > L is sgn(tau) W (pi/2 - Si(L|tau|)) / pi.
            if (opts.tail_correction)
                numeric += std::copysign(1.0, tau) * w_total.real() * sine_integral_tail(x) / pi;
            const double leading = std::abs(w_total) / (pi * x);
            const double next = (std::abs(second) + third / half_range) / (pi * half_range * x);
            tail = opts.tail_correction ? next : leading + next;
        }
        const double reference = tau < 0.0 ? 0.0 : closed(times[k], theta);
        out.transformed.push_back(numeric);
        out.reference.push_back(reference);
        // Causality is judged against the largest intensity in play, since
        // P(0+) itself can vanish away from the forward direction.
        const double scale = tau < 0.0 ? ref_max : std::abs(reference);
        out.max_rel_error = std::max(out.max_rel_error, std::abs(numeric - reference) / scale);
        out.max_tail_estimate = std::max(out.max_tail_estimate, tail / scale);
    }
    out.converged = out.max_tail_estimate <= opts.tolerance;
    return out;
}

std::vector<ConvergenceRow> convergence_report(std::span<const double> spacings,
                                               const ModelParams& p, const DephasingScenario& s,
                                               std::span<const Time> times,
                                               std::span<const Angle> angles,
                                               std::optional<double> span_mev)
{
    std::vector<ConvergenceRow> rows;
    if (spacings.empty())
        return rows;
    const DecayIntensity closed(p, s);
    const double span = span_mev.value_or(required_span(p, s));
    for (double spacing : spacings)
    {
        const ResonanceSpectrum spec{spacing, span, 0.0};
        const ResonanceOracle oracle(spec, p, s, times, SpectrumChecks::span_only);
        ConvergenceRow row{spacing, 0.0, 0.0, spec.levels()};
        for (std::size_t it = 0; it < times.size(); ++it)
        {
            if (times[it].inv_mev() < 0.0)
                continue;
            std::vector<double> ref(angles.size()), val(angles.size());
            double slice_max = 0.0;
            for (std::size_t ia = 0; ia < angles.size(); ++ia)
            {
                ref[ia] = closed(times[it], angles[ia]);
                val[ia] = oracle.intensity(it, angles[ia]);
                slice_max = std::max(slice_max, std::abs(ref[ia]));
            }
            for (std::size_t ia = 0; ia < angles.size(); ++ia)
            {
                const double diff = std::abs(val[ia] - ref[ia]);
                row.max_rel_error = std::max(row.max_rel_error, diff / slice_max);
                row.max_pointwise_error = std::max(row.max_pointwise_error, diff / std::abs(ref[ia]));
            }
        }
        rows.push_back(row);
    }
    return rows;
}

bool converges_monotonically(std::span<const ConvergenceRow> rows)
{
    for (std::size_t i = 1; i < rows.size(); ++i)
    {
        const double floor = static_cast<double>(rows[i].levels) * std::numeric_limits<double>::epsilon();
        if (rows[i].max_rel_error > rows[i - 1].max_rel_error * (1.0 + floor))
            return false;
    }
    return true;
}

} // namespace icdecay
