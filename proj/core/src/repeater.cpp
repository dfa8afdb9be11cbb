#include "rydgate/repeater.hpp"

#include "rydgate/blockade.hpp"
#include "rydgate/error.hpp"
#include "rydgate/gatefid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rydgate {

namespace {

bool unit_interval(double x) { return x >= 0 && x <= 1; }

PulseSpectrum gate_pulse(const RydbergSwap &g)
{
    return g.bandwidth > 0 ? PulseSpectrum::gaussian(0.0, g.bandwidth) : PulseSpectrum::delta();
}

SwapFigures gate_figures(const RepeaterConfig &cfg)
{
    const RydbergSwap &g = cfg.rydberg;
    const CooperativitySet coop = CooperativitySet::from_cb(g.c_b, g.c_b_prime, g.params);
    return fswap_leading(coop, g.params, gate_pulse(g));
}

// Golden-section maximization of f over [lo, hi].
template <class F>
double golden_max(F f, double lo, double hi, int iterations = 80)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iterations; ++i) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

const char *to_string(SourceModel m)
{
    return m == SourceModel::perfect_single_excitation ? "perfect" : "raman";
}

const char *to_string(SwapModel m)
{
    return m == SwapModel::rydberg ? "rydberg" : "linear";
}

std::size_t RepeaterConfig::max_levels() const
{
    const std::size_t links = n_stations - 1;
    std::size_t levels = 0;
    while ((std::size_t{1} << levels) < links) {
        ++levels;
    }
    return levels;
}

void RepeaterConfig::validate() const
{
    if (!(total_distance > 0) || !(attenuation_length > 0) || !(signal_speed > 0)) {
        throw_domain("distance, attenuation length and signal speed must be > 0");
    }
    if (!(source_rate > 0)) {
        throw_domain("source rate must be > 0");
    }
    if (n_stations < 2) {
        throw_domain("at least two stations are needed");
    }
    const std::size_t links = n_stations - 1;
    if ((links & (links - 1)) != 0) {
        throw_domain("number of links (" + std::to_string(links)
                     + ") must be a power of two for nested swapping");
    }
    if (!unit_interval(eta_readout) || !unit_interval(eta_detector)) {
        throw_domain("efficiencies must lie in [0, 1]");
    }
    if (!(c_dx >= 0) || !(recursion_factor >= 1) || !(p_source >= 0 && p_source <= 1)) {
        throw_domain("c_dx >= 0, recursion factor >= 1 and p_source in [0, 1] required");
    }
    if (swap_model == SwapModel::rydberg) {
        rydberg.params.validate();
        if (!(rydberg.c_b >= 0) || !(rydberg.bandwidth >= 0)) {
            throw_domain("Rydberg swap needs C_b >= 0 and bandwidth >= 0");
        }
    }
}

double swap_success_probability(const RepeaterConfig &cfg)
{
    const double d2 = cfg.eta_detector * cfg.eta_detector;
    const double r2 = cfg.eta_readout * cfg.eta_readout;
    if (cfg.swap_model == SwapModel::linear_optics) {
        return 0.5 * d2 * (cfg.linear_needs_readout ? r2 : 1.0);
    }
    const double p = std::clamp(gate_figures(cfg).p_suc, 0.0, 1.0);
    return p * r2 * d2;
}

double gate_werner(const RepeaterConfig &cfg)
{
    if (cfg.swap_model == SwapModel::linear_optics) {
        return 1.0;
    }
    const double f = std::clamp(gate_figures(cfg).f_swap, 0.25, 1.0);
    return (4.0 * f - 1.0) / 3.0;
}

double swap_fidelity_propagation(double w_left, double w_right, const RepeaterConfig &cfg)
{
    if (!unit_interval(w_left) || !unit_interval(w_right)) {
        throw_domain("Werner parameters must lie in [0, 1]");
    }
    return w_left * w_right * gate_werner(cfg);
}

double double_excitation_error(const RepeaterConfig &cfg, double p_source)
{
    if (cfg.source_model == SourceModel::perfect_single_excitation) {
        return 1.0;
    }
    return std::clamp(1.0 - cfg.c_dx * p_source, 0.0, 1.0);
}

LinkTimes mean_link_time(const RepeaterConfig &cfg, std::size_t levels, double p_source)
{
    const double links = std::ldexp(1.0, static_cast<int>(levels));
    const double l0 = cfg.total_distance / links;
    const double ps = cfg.source_model == SourceModel::perfect_single_excitation ? 1.0 : p_source;
    LinkTimes lt;
    lt.p0 = ps * cfg.eta_detector * std::exp(-l0 / (2.0 * cfg.attenuation_length));
    lt.period = std::max(1.0 / cfg.source_rate, l0 / cfg.signal_speed);
    const double p_swap = levels > 0 ? swap_success_probability(cfg) : 1.0;
    if (!(lt.p0 > 0) || !(p_swap > 0)) {
        lt.infinite = true;
        lt.t.assign(levels + 1, std::numeric_limits<double>::infinity());
        return lt;
    }
    lt.t.push_back(lt.period / lt.p0);
    for (std::size_t i = 0; i < levels; ++i) {
        lt.t.push_back(cfg.recursion_factor * lt.t.back() / p_swap);
    }
    return lt;
}

double binary_entropy(double q)
{
    if (q <= 0 || q >= 1) {
        return 0.0;
    }
    return -q * std::log2(q) - (1 - q) * std::log2(1 - q);
}

double secret_fraction(double qber)
{
    return std::max(0.0, 1.0 - 2.0 * binary_entropy(qber));
}

RateResult rate_at_levels(const RepeaterConfig &cfg, std::size_t levels, double p_source)
{
    RateResult r;
    r.swap_levels_used = levels;
    r.p_source = cfg.source_model == SourceModel::perfect_single_excitation ? 1.0 : p_source;
    r.stations_used = (std::size_t{1} << levels) + 1;

    const double w0 = double_excitation_error(cfg, p_source);
    const double wg = gate_werner(cfg);
    const double pairs = std::ldexp(1.0, static_cast<int>(levels));
    r.werner_parameter = std::pow(w0, pairs) * std::pow(wg, pairs - 1.0);
    r.qber = 0.5 * (1.0 - r.werner_parameter);
    r.secret_fraction = secret_fraction(r.qber);

    const LinkTimes lt = mean_link_time(cfg, levels, p_source);
    r.infinite_time = lt.infinite;
    r.mean_total_time = lt.t.back();
    if (!lt.infinite) {
        r.r_secret_per_station
            = r.secret_fraction / (r.mean_total_time * static_cast<double>(r.stations_used));
    }
    return r;
}

RateResult secret_key_rate(const RepeaterConfig &cfg)
{
    cfg.validate();
    RateResult best;
    bool have = false;
    for (std::size_t n = 0; n <= cfg.max_levels(); ++n) {
        RateResult r;
        if (cfg.source_model == SourceModel::probabilistic_raman && cfg.p_source == 0) {
            // Search log p so small probabilities are resolved.
            auto rate_of = [&](double log_p) { return rate_at_levels(cfg, n, std::exp(log_p)).r_secret_per_station; };
            const double log_p = golden_max(rate_of, std::log(1e-6), 0.0);
            r = rate_at_levels(cfg, n, std::exp(log_p));
        } else {
            r = rate_at_levels(cfg, n, cfg.p_source);
        }
        if (!have || r.r_secret_per_station > best.r_secret_per_station) {
            best = r;
            have = true;
        }
    }
    return best;
}

} // namespace rydgate
