#include "rydgate_cli/cli.hpp"

#include "rydgate/blockade.hpp"
#include "rydgate/error.hpp"
#include "rydgate/gatefid.hpp"
#include "rydgate/repeater.hpp"
#include "rydgate/scatter.hpp"

#include <cmath>
#include <functional>
#include <numbers>

namespace rydgate::cli {

namespace {

struct Check {
    std::string name;
    double value = 0;     // measured deviation or figure
    double tolerance = 0; // pass when value <= tolerance
};

Check eit_identity(const ModelConfig &cfg)
{
    AtomCavityParams p = cfg.params;
    p.delta = p.delta_two = p.gamma_r = 0;
    const cplx r = reflection_exact(p, {}, cfg.ensemble(), std::nullopt, 0.0);
    return {"eit_identity", std::abs(r - 1.0), 1e-12};
}

Check continuum_vs_radial(const ModelConfig &cfg)
{
    AtomCavityParams p = cfg.params;
    p.delta = p.delta_two = p.gamma_r = 0;
    const EnsembleModel ens = cfg.ensemble();
    const CooperativitySet c = continuum_cooperativity(p, ens);
    const double zeta = blockade_zeta(p, ens);
    const double rb = std::pow(zeta, -1.0 / 6.0);
    auto f = [&](double r) -> cplx {
        const double r3 = r * r * r;
        return 4.0 * std::numbers::pi * r * r * ens.density * p.coop_single
               / cplx(1.0, zeta * r3 * r3);
    };
    quad::Options opt;
    opt.rel_tol = 1e-11;
    const cplx inner = quad::require_converged(quad::integrate_finite<cplx>(f, 0.0, 3 * rb, opt), "radial");
    const cplx tail = quad::require_converged(quad::integrate_upper<cplx>(f, 3 * rb, opt), "radial tail");
    const cplx ref = inner + tail;
    const double dev = std::max(std::abs(c.c_b - ref.real()) / std::abs(ref.real()),
                                std::abs(c.c_b_prime_abs - std::abs(ref.imag())) / std::abs(ref.imag()));
    return {"continuum_vs_radial_quadrature", dev, 1e-6};
}

// Explicit atoms are passive term by term. The infinite-space continuum is
// only checked over the pulse support: far off resonance it can exceed
// |R| = 1 when n_atoms is close to the interaction-volume population.
std::pair<Check, Check> passivity(const ModelConfig &cfg)
{
    AtomCavityParams p = cfg.params;
    p.n_atoms = 300;
    p.coop_single = cfg.params.total_coop() / 300.0;
    EnsembleModel box = EnsembleModel::uniform(cfg.density, cfg.c6);
    box.geometry = Geometry::box;
    const double side = std::cbrt(300.0 / cfg.density);
    box.box_lengths = {side, side, side};
    const EnsembleModel atoms = EnsembleModel::discrete(sample_positions(box, 300, cfg.seed), cfg.c6);
    const ReflectionSpectrum d = discrete_spectrum(p, {}, atoms, std::size_t{0});
    const ReflectionSpectrum c = continuum_spectrum(cfg.params, cfg.ensemble(), cfg.omega0);
    const PulseSpectrum pulse = cfg.pulse();
    const double half = pulse.shape() == PulseShape::delta ? 0.0 : 8.0 * pulse.width();
    double wd = 0, wc = 0;
    const double k = cfg.params.kappa;
    for (int i = -1000; i <= 1000; ++i) {
        const double w = 20.0 * k * i / 1000.0;
        wd = std::max({wd, std::abs(d.r_eit(w)), std::abs(d.r_blocked(w))});
        const double v = pulse.center() + half * i / 1000.0;
        wc = std::max({wc, std::abs(c.r_eit(v)), std::abs(c.r_blocked(v))});
    }
    return {{"passivity_explicit_atoms", wd - 1.0, 1e-12}, {"passivity_continuum_pulse_window", wc - 1.0, 1e-12}};
}

// Relative deviation of Taylor R', R'' from the best centered difference
// over the step scan.
std::pair<Check, Check> taylor_vs_differences(const ModelConfig &cfg)
{
    AtomCavityParams p = cfg.params;
    if (p.gamma_r == 0) p.gamma_r = units::from_2pi_khz(60);
    const ReflectionSpectrum s = continuum_spectrum(p, cfg.ensemble(), cfg.omega0);
    double e1 = INFINITY, e2 = INFINITY;
    for (const auto &[fn, t] : {std::pair{s.r_eit, s.taylor_eit}, std::pair{s.r_blocked, s.taylor_blocked}}) {
        double b1 = INFINITY, b2 = INFINITY;
        for (double h : {1e-2, 1e-3, 1e-4}) {
            const double step = h * p.kappa;
            const double w = s.omega0;
            const cplx d1 = (fn(w + step) - fn(w - step)) / (2 * step);
            const cplx d2 = (fn(w + step) - 2.0 * fn(w) + fn(w - step)) / (step * step);
            b1 = std::min(b1, std::abs(d1 - t.d1) / std::abs(t.d1));
            b2 = std::min(b2, std::abs(d2 - t.d2) / std::abs(t.d2));
        }
        e1 = std::isinf(e1) ? b1 : std::max(e1, b1);
        e2 = std::isinf(e2) ? b2 : std::max(e2, b2);
    }
    return {{"taylor_first_derivative", e1, 1e-6}, {"taylor_second_derivative", e2, 1e-4}};
}

Check conditioning(const ModelConfig &cfg)
{
    double worst = -INFINITY;
    for (double cb : {3.0, 8.0, 25.0}) {
        const EnsembleModel ens = EnsembleModel::uniform(density_for_blockade(cfg.params, cfg.c6, cb), cfg.c6);
        const ReflectionSpectrum s = continuum_spectrum(cfg.params, ens);
        for (double T : {100.0, 300.0, 1000.0}) {
            const FidelityReport r
                = exact_report(s, PulseSpectrum::from_duration(PulseShape::gaussian, 0, T));
            worst = std::max(worst, r.f_cj_dual - r.f_swap);
        }
    }
    return {"conditional_cj_below_swap", worst, 1e-12};
}

Check delta_equality(const ModelConfig &cfg)
{
    const ReflectionSpectrum s = continuum_spectrum(cfg.params, cfg.ensemble());
    const FidelityReport r = exact_report(s, PulseSpectrum::delta());
    return {"delta_pulse_cj_equals_swap", std::abs(r.f_cj_dual - r.f_swap), 1e-10};
}

Check leading_vs_exact(const ModelConfig &cfg)
{
    double worst = -INFINITY;
    for (double cb : {5.0, 10.0, 30.0, 100.0}) {
        const EnsembleModel ens = EnsembleModel::uniform(density_for_blockade(cfg.params, cfg.c6, cb), cfg.c6);
        const PulseSpectrum pulse = PulseSpectrum::gaussian(0, 0.01 * cfg.params.eit_width());
        const FidelityReport ex = exact_report(continuum_spectrum(cfg.params, ens), pulse);
        const CooperativitySet coop = CooperativitySet::from_cb(cb, cb, cfg.params);
        const double bound = 2.0 / (cb * cb);
        const double dswap = std::abs(ex.f_swap - fswap_leading(coop, cfg.params, pulse).f_swap);
        const double dcj = std::abs(ex.f_cj - fcj_single_rail_leading(coop, cfg.params, pulse));
        worst = std::max(worst, std::max(dswap, dcj) / bound);
    }
    return {"leading_within_2_over_cb2_ratio", worst, 1.0};
}

Check monotone_in_cb(const ModelConfig &cfg)
{
    double worst = 0;
    double prev_f = -1, prev_p = -1;
    for (int i = 0; i <= 100; ++i) {
        const double cb = 0.5 + i;
        const SwapFigures s = fswap_leading(CooperativitySet::from_cb(cb, cb, cfg.params), cfg.params,
                                            PulseSpectrum::delta());
        if (i) worst = std::max({worst, prev_f - s.f_swap, prev_p - s.p_suc});
        prev_f = s.f_swap, prev_p = s.p_suc;
    }
    return {"swap_fidelity_monotone_in_cb", worst, 0.0};
}

Check entropy_shape()
{
    double dev = std::abs(binary_entropy(0.5) - 1) + binary_entropy(0) + binary_entropy(1);
    for (int i = 1; i < 99; ++i) {
        const double q = i / 100.0;
        const double mid = binary_entropy(q);
        const double chord = 0.5 * (binary_entropy(q - 0.01) + binary_entropy(q + 0.01));
        dev = std::max(dev, chord - mid);
    }
    return {"binary_entropy_concave", dev, 1e-15};
}

Check repeater_monotone(const ModelConfig &cfg)
{
    RepeaterConfig rc;
    rc.rydberg.params = cfg.params;
    double worst = 0, prev = -1;
    for (int i = 1; i <= 60; ++i) {
        rc.rydberg.c_b = rc.rydberg.c_b_prime = 2.0 * i;
        const double r = secret_key_rate(rc).r_secret_per_station;
        if (prev >= 0) worst = std::max(worst, prev - r);
        prev = r;
    }
    return {"repeater_rate_monotone_in_cb", worst, 0.0};
}

Check spectrum_normalization()
{
    double dev = 0;
    for (const PulseSpectrum &p : {PulseSpectrum::gaussian(1.5, 0.7), PulseSpectrum::lorentzian(-2, 0.3)}) {
        dev = std::max(dev, std::abs(integrate_spectrum_real(p, [](double) { return 1.0; }) - 1.0));
    }
    return {"pulse_normalization", dev, 1e-9};
}

Check monte_carlo(const ModelConfig &cfg, unsigned threads)
{
    AtomCavityParams p = cfg.params;
    p.delta = p.delta_two = p.gamma_r = 0;
    const EnsembleModel ens = cfg.ensemble();
    MonteCarloOptions opt;
    opt.seed = cfg.seed;
    opt.threads = threads;
    const double mc = monte_carlo_cooperativity(p, ens, opt).c_b;
    const double ref = continuum_cooperativity(p, ens).c_b;
    return {"monte_carlo_relative_error", std::abs(mc - ref) / ref, 0.02};
}

} // namespace

Table verify_suite(const ModelConfig &cfg, unsigned threads, bool &all_passed)
{
    std::vector<std::function<std::vector<Check>()>> suites = {
        [&] { return std::vector<Check>{eit_identity(cfg)}; },
        [&] { return std::vector<Check>{continuum_vs_radial(cfg)}; },
        [&] {
            auto [a, b] = passivity(cfg);
            return std::vector<Check>{a, b};
        },
        [&] {
            auto [a, b] = taylor_vs_differences(cfg);
            return std::vector<Check>{a, b};
        },
        [&] { return std::vector<Check>{conditioning(cfg), delta_equality(cfg)}; },
        [&] { return std::vector<Check>{leading_vs_exact(cfg), monotone_in_cb(cfg)}; },
        [&] { return std::vector<Check>{entropy_shape(), repeater_monotone(cfg)}; },
        [&] { return std::vector<Check>{spectrum_normalization()}; },
        [&] { return std::vector<Check>{monte_carlo(cfg, threads)}; },
    };
    Table t;
    t.header = {"check", "passed", "value", "tolerance"};
    all_passed = true;
    for (const auto &suite : suites) {
        std::vector<Check> checks;
        try {
            checks = suite();
        } catch (const Error &e) {
            checks = {{std::string("error: ") + e.what(), INFINITY, 0}};
        }
        for (const Check &c : checks) {
            const bool ok = c.value <= c.tolerance;
            all_passed = all_passed && ok;
            t.rows.push_back({c.name, ok, c.value, c.tolerance});
        }
    }
    return t;
}

} // namespace rydgate::cli
