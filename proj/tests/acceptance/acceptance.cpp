// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "oracles.hpp"
#include "support.hpp"

#include "rydgate/blockade.hpp"
#include "rydgate/gatefid.hpp"
#include "rydgate/repeater.hpp"
#include "rydgate/scatter.hpp"
#include "rydgate/units.hpp"
#include "rydgate_cli/cli.hpp"

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace rydgate;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, const char *title, bool ok, const std::string &detail)
{
    std::printf("%s [%d] %s: %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char *f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char *f, ...)
{
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

AtomCavityParams reference() { return reference_params(); }
double reference_c6() { return units::from_2pi_mhz(8.31e6); }
EnsembleModel reference_ensemble() { return EnsembleModel::uniform(0.25, reference_c6()); }

EnsembleModel continuum_for(double cb)
{
    return EnsembleModel::uniform(density_for_blockade(reference(), reference_c6(), cb), reference_c6());
}

void blockaded_cooperativity()
{
    const AtomCavityParams p = reference();
    const EnsembleModel e = reference_ensemble();
    const CooperativitySet c = continuum_cooperativity(p, e);
    const int reps = 1000;
    const auto t0 = Clock::now();
    double sink = 0;
    for (int i = 0; i < reps; ++i) sink += continuum_cooperativity(p, e).c_b;
    const double ms = 1e3 * seconds_since(t0) / reps;
    const bool ok = std::abs(c.c_b - 8.1) <= 0.1 && ms < 1.0 && sink > 0;
    report(1, "blockaded cooperativity", ok,
           fmt("C_b = %.6f, |C_b'| = %.6f (target 8.1 +- 0.1); %.4f ms per call (< 1 ms)", c.c_b, c.c_b_prime_abs, ms));
}

void gate_curve()
{
    const AtomCavityParams p = reference();
    const CooperativitySet c = CooperativitySet::from_cb(8, 8, p);
    const SwapFigures s = fswap_leading(c, p, PulseSpectrum::delta());
    const double cj = fcj_single_rail_leading(c, p, PulseSpectrum::delta());
    const FidelityReport ex = exact_report(continuum_spectrum(p, continuum_for(8)), PulseSpectrum::delta());

    // the C_b curve as the CLI emits it: narrow pulse, C_b in [2, 50], leading and exact columns
    const char *argv[] = {"rydgate", "--threads", "1", "fidelity", "--cb-min", "2", "--cb-max", "50", "--points", "100", "--exact"};
    std::ostringstream out, err;
    const auto t0 = Clock::now();
    const int code = cli::run(static_cast<int>(std::size(argv)), argv, out, err);
    const double secs = seconds_since(t0);
    std::size_t rows = 0;
    for (char ch : out.str()) rows += ch == '\n';

    const bool ok = s.f_swap > 0.99 && std::abs(s.f_swap - 0.9902) <= 1e-4 && std::abs(cj - 0.9379) <= 1e-4
                    && code == 0 && rows == 101 && secs < 1.0;
    report(2, "gate figures at C_b = C_b' = 8", ok,
           fmt("F_swap = %.6f (0.9902 +- 1e-4, > 0.99), F_CJ = %.6f (0.9379 +- 1e-4); exact integration gives "
               "F_swap = %.6f, F_CJ = %.6f; 100-point curve in %.3f s (< 1 s)",
               s.f_swap, cj, ex.f_swap, ex.f_cj, secs));
}

void bandwidth_budget()
{
    const AtomCavityParams p = reference();
    const CooperativitySet c = CooperativitySet::from_cb(8, 8, p);
    const PulseSpectrum g = PulseSpectrum::from_duration(PulseShape::gaussian, 0, 300);
    const double term = fswap_leading(c, p, PulseSpectrum::delta()).f_swap - fswap_leading(c, p, g).f_swap;
    const double nc = p.total_coop();
    report(3, "bandwidth budget at T = 300 ns", std::abs(term - 0.0172) <= 0.0005 && term < 0.02,
           fmt("NC = %.3g, swap bandwidth term = %.6f (0.0172 +- 0.0005, < 0.02)", nc, term));
}

void oracle_equivalence()
{
    const auto t0 = Clock::now();
    const AtomCavityParams p = reference();
    const double w_eit = p.eit_width();
    const double nc = p.total_coop(), w = p.half_drive_sq();
    const double delay = 1 / p.kappa + nc * p.gamma_e / w;
    const double absorb = nc * p.gamma_e * p.gamma_e / (w * w);

    std::mt19937_64 gen(1);
    double worst_swap = 0, worst_cj = 0; // deviation in units of 2 / C_b^2
    for (int i = 0; i < 200; ++i) {
        const double cb = testing::log_uniform(gen, 5, 100);
        const double dw = testing::log_uniform(gen, 1e-3, 1e-1) * w_eit;
        const FidelityReport ex = exact_report(continuum_spectrum(p, continuum_for(cb)), PulseSpectrum::gaussian(0, dw));
        const double v = dw * dw;
        const double s = 2 * cb * cb;
        const double eq_swap = 1 - 1 / s - (2 * cb * cb) / (4 * s * s) - 0.75 * delay * delay * v;
        const double eq_cj = 1 - (1 + cb) / ((1 + cb) * (1 + cb) + cb * cb) - absorb * v - delay * delay * v;
        const double bound = 2 / (cb * cb);
        worst_swap = std::max(worst_swap, std::abs(ex.f_swap - eq_swap) / bound);
        worst_cj = std::max(worst_cj, std::abs(ex.f_cj - eq_cj) / bound);
    }

    // Taylor coefficients against finite differences of the exact reflection.
    double worst_d1 = 0, worst_d2 = 0;
    std::uniform_real_distribution<double> u(-9, 9), ge(oracle::tau * 2, oracle::tau * 4), gr(oracle::tau * 0.01, oracle::tau * 0.2),
        w0(-4, 4);
    for (int trial = 0; trial < 20; ++trial) {
        AtomCavityParams q = p;
        q.coop_single = 0.1;
        PerAtomOverrides o;
        std::vector<Vec3> pos;
        std::vector<double> g_e, g_r;
        while (pos.size() < 150) {
            const Vec3 x{u(gen), u(gen), u(gen)};
            if (x.x * x.x + x.y * x.y + x.z * x.z > 81) continue;
            pos.push_back(x);
            g_e.push_back(ge(gen));
            g_r.push_back(gr(gen));
        }
        o.gamma_e = g_e;
        o.gamma_r = g_r;
        const EnsembleModel ens = EnsembleModel::discrete(pos, reference_c6());
        const double omega0 = trial % 4 == 0 ? 0.0 : w0(gen);
        const std::size_t k = static_cast<std::size_t>(trial * 7);
        const ReflectionSpectrum sp = discrete_spectrum(q, o, ens, k, omega0);
        for (const auto &[stored, t] : {std::pair{std::optional<std::size_t>(k), sp.taylor_blocked},
                                        std::pair{std::optional<std::size_t>(), sp.taylor_eit}}) {
            const auto d = oracle::plateau_differences(
                [&](double x) { return reflection_exact(q, o, ens, stored, x); }, omega0, q.kappa);
            worst_d1 = std::max(worst_d1, testing::rel(t.d1, d.d1));
            worst_d2 = std::max(worst_d2, testing::rel(t.d2, d.d2));
        }
    }
    for (int trial = 0; trial < 10; ++trial) {
        AtomCavityParams q = p;
        q.gamma_r = gr(gen);
        const double omega0 = trial % 4 == 0 ? 0.0 : w0(gen);
        const EnsembleModel ens = continuum_for(testing::log_uniform(gen, 5, 100));
        const ReflectionSpectrum sp = continuum_spectrum(q, ens, omega0);
        const auto d = oracle::plateau_differences(
            [&](double x) { return reflection_continuum(q, ens, true, x); }, omega0, q.kappa);
        worst_d1 = std::max(worst_d1, testing::rel(sp.taylor_blocked.d1, d.d1));
        worst_d2 = std::max(worst_d2, testing::rel(sp.taylor_blocked.d2, d.d2));
    }
    const double secs = seconds_since(t0);
    const bool ok = worst_swap <= 1 && worst_cj <= 1 && worst_d1 <= 1e-6 && worst_d2 <= 1e-4 && secs < 30;
    report(4, "exact integration against the closed forms", ok,
           fmt("200 points: max |dF_swap| = %.3f x 2/C_b^2, max |dF_CJ| = %.3f x 2/C_b^2; Taylor vs differences: "
               "R' %.2e (<= 1e-6), R'' %.2e (<= 1e-4); %.2f s (< 30 s)",
               worst_swap, worst_cj, worst_d1, worst_d2, secs));
}

void eit_identity()
{
    const cplx r = reflection_exact(reference(), {}, reference_ensemble(), std::nullopt, 0.0);
    report(5, "EIT identity", std::abs(r - 1.0) <= 1e-12, fmt("R_g = %.17g %+.3gi (1 + 0i to 1e-12)", r.real(), r.imag()));
}

void monte_carlo()
{
    const AtomCavityParams p = reference();
    const EnsembleModel e = reference_ensemble();
    const double ref = continuum_cooperativity(p, e).c_b;
    MonteCarloOptions opt;
    opt.seed = 1;
    opt.n_samples = 100000;
    const auto t0 = Clock::now();
    const MonteCarloResult big = monte_carlo_cooperativity(p, e, opt);
    const double secs = seconds_since(t0);
    const double err_big = std::abs(big.c_b - ref) / ref;
    opt.n_samples = 200000;
    const double err_double = std::abs(monte_carlo_cooperativity(p, e, opt).c_b - ref) / ref;

    // 1/sqrt(N): root-mean-square error over seeds at N and 2N.
    const int seeds = 64;
    auto rms = [&](std::size_t n) {
        double s = 0;
        for (int k = 1; k <= seeds; ++k) {
            MonteCarloOptions o;
            o.n_samples = n;
            o.seed = static_cast<std::uint64_t>(k);
            o.cutoff_radii = 1.2;
            const double d = monte_carlo_cooperativity(p, e, o).c_b / ref - 1;
            s += d * d;
        }
        return std::sqrt(s / seeds);
    };
    const double r1 = rms(4000), r2 = rms(8000);
    const double ratio = r2 / r1;
    const double spread = 3 / std::sqrt(double(seeds)); // relative sd of an RMS ratio is ~1/sqrt(seeds)
    const double lo = std::sqrt(0.5) * (1 - spread), hi = std::sqrt(0.5) * (1 + spread);
    const bool ok = err_big <= 0.02 && secs < 10 && ratio >= lo && ratio <= hi;
    report(6, "Monte-Carlo against the continuum", ok,
           fmt("1e5 atoms: C_b = %.5f vs %.5f, error %.2e (<= 2%%) in %.2f s (< 10 s); 2e5 atoms: error %.2e; "
               "RMS over %d seeds %.3e -> %.3e, ratio %.3f (1/sqrt2 band [%.3f, %.3f])",
               big.c_b, ref, err_big, secs, err_double, seeds, r1, r2, ratio, lo, hi));
}

void repeater_curve()
{
    auto config = [](double cb, SwapModel m) {
        RepeaterConfig c;
        c.total_distance = 1000;
        c.n_stations = 33;
        c.source_model = SourceModel::perfect_single_excitation;
        c.swap_model = m;
        c.rydberg.c_b = c.rydberg.c_b_prime = cb;
        return c;
    };
    const auto t0 = Clock::now();
    std::vector<RateResult> curve;
    for (int i = 0; i < 100; ++i) curve.push_back(secret_key_rate(config(1 + 99.0 * i / 99, SwapModel::rydberg)));
    const double secs = seconds_since(t0);
    const double lin = secret_key_rate(config(0, SwapModel::linear_optics)).r_secret_per_station;
    const RateResult at25 = secret_key_rate(config(25, SwapModel::rydberg));

    int steps = 0;
    bool monotone = true;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        steps += curve[i].swap_levels_used > curve[i - 1].swap_levels_used;
        monotone = monotone && curve[i].swap_levels_used >= curve[i - 1].swap_levels_used
                   && curve[i].r_secret_per_station >= curve[i - 1].r_secret_per_station;
    }
    const double top = curve.back().r_secret_per_station;
    const double ratio = at25.r_secret_per_station / 1.5;
    const bool ok = ratio >= 0.5 && ratio <= 2 && top > lin && steps >= 1 && monotone && secs < 5;
    report(7, "repeater rate over 1000 km", ok,
           fmt("C_b = 25: %.4f Hz per station with %zu levels (1.5 Hz within x2); C_b = 100: %.4f Hz vs linear "
               "optics %.4f Hz; %d level steps, monotone %s; curve in %.3f s (< 5 s)",
               at25.r_secret_per_station, at25.swap_levels_used, top, lin, steps, monotone ? "yes" : "no", secs));
}

void conditioning()
{
    const AtomCavityParams p = reference();
    double worst = -1, worst_delta = 0;
    int sets = 0;
    auto check = [&](const ReflectionSpectrum &s, const PulseSpectrum &pulse) {
        const FidelityReport r = exact_report(s, pulse);
        if (pulse.shape() == PulseShape::delta) {
            worst_delta = std::max(worst_delta, std::abs(r.f_cj_dual - r.f_swap));
        } else {
            worst = std::max(worst, r.f_cj_dual - r.f_swap);
        }
        ++sets;
    };
    std::vector<PulseSpectrum> pulses{PulseSpectrum::delta()};
    for (double T : {30.0, 100.0, 300.0, 1000.0, 3000.0}) pulses.push_back(PulseSpectrum::from_duration(PulseShape::gaussian, 0, T));
    for (double T : {100.0, 300.0, 1000.0}) pulses.push_back(PulseSpectrum::from_duration(PulseShape::lorentzian, 0, T));
    for (double cb : {1.0, 2.0, 3.0, 5.0, 8.0, 12.0, 20.0, 35.0, 60.0, 100.0}) {
        const ReflectionSpectrum s = continuum_spectrum(p, continuum_for(cb));
        for (const PulseSpectrum &pulse : pulses) check(s, pulse);
    }
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> u(-7, 7);
    for (int trial = 0; trial < 6; ++trial) {
        std::vector<Vec3> pos;
        while (pos.size() < 120) pos.push_back({u(gen), u(gen), u(gen)});
        const ReflectionSpectrum s = discrete_spectrum(p, {}, EnsembleModel::discrete(pos, reference_c6()));
        for (const PulseSpectrum &pulse : pulses) check(s, pulse);
    }
    const bool ok = worst <= 1e-12 && worst_delta <= 1e-10;
    report(8, "conditioning inequality", ok,
           fmt("%d parameter sets: max F'_CJ - F_swap = %.3e (<= 0); delta pulses max |F'_CJ - F_swap| = %.1e (<= 1e-10)",
               sets, worst, worst_delta));
}

} // namespace

int main()
{
    const std::vector<std::function<void()>> criteria{blockaded_cooperativity, gate_curve,  bandwidth_budget,
                                                      oracle_equivalence,      eit_identity, monte_carlo,
                                                      repeater_curve,          conditioning};
    int id = 0;
    for (const auto &c : criteria) {
        ++id;
        try {
            c();
        } catch (const std::exception &e) {
            report(id, "criterion", false, std::string("error: ") + e.what());
        }
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures ? 1 : 0;
}
