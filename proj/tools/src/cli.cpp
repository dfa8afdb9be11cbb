#include "rydgate_cli/cli.hpp"

#include "rydgate/blockade.hpp"
#include "rydgate/error.hpp"
#include "rydgate/gatefid.hpp"
#include "rydgate/repeater.hpp"
#include "rydgate/scatter.hpp"
#include "rydgate/units.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <thread>

#ifndef RYDGATE_VERSION
#define RYDGATE_VERSION "unknown"
#endif

namespace rydgate::cli {

namespace {

struct Globals {
    std::string config_path;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::string out_path;
    std::string format = "csv";
};

unsigned worker_count(unsigned requested, std::size_t jobs)
{
    unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

// Fills rows[i] = f(i) on a strided partition; the first failing index wins
// so the reported error does not depend on scheduling.
template <class F>
std::vector<std::vector<Cell>> parallel_rows(std::size_t n, unsigned threads, F f)
{
    std::vector<std::vector<Cell>> rows(n);
    std::vector<std::exception_ptr> errors(n);
    const unsigned workers = worker_count(threads, n);
    auto work = [&](unsigned tid) {
        for (std::size_t i = tid; i < n; i += workers) {
            try {
                rows[i] = f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work, t);
        for (auto &th : pool) th.join();
    }
    for (auto &e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return rows;
}

std::vector<double> linspace(double lo, double hi, std::size_t n)
{
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return x;
}

void require_grid(double lo, double hi, std::size_t points, const char *what)
{
    if (points == 0) {
        throw Error(ErrorKind::config, std::string(what) + ": --points must be >= 1");
    }
    if (!(hi >= lo)) {
        throw Error(ErrorKind::config, std::string(what) + ": grid maximum is below its minimum");
    }
}

// -- coop ------------------------------------------------------------------

struct CoopOpts {
    std::string mode;
    std::string positions;
    std::size_t stored_at = 0;
    std::size_t samples = 100000;
    std::string geometry = "infinite";
    double radius = 0;
    std::vector<double> box;
    double cutoff_radii = 2.0;
};

Table cmd_coop(const ModelConfig &cfg, const CoopOpts &o, unsigned threads)
{
    EnsembleModel ens = cfg.ensemble();
    std::string mode = o.mode.empty() ? (o.positions.empty() ? "continuum" : "discrete") : o.mode;
    if ((mode == "discrete" || mode == "inhomogeneous") && o.positions.empty()) {
        throw Error(ErrorKind::config, "coop --mode " + mode + " needs --positions");
    }
    if (!o.positions.empty()) {
        if (mode != "discrete" && mode != "inhomogeneous") {
            throw Error(ErrorKind::config, "--positions only applies to discrete or inhomogeneous mode");
        }
        ens = read_positions_file(o.positions, cfg.c6);
    }

    cplx cstar;
    double cb = 0, cbp = 0;
    if (mode == "continuum") {
        const CooperativitySet c = continuum_cooperativity(cfg.params, ens, cfg.omega0);
        cstar = c.c_star_v, cb = c.c_b, cbp = c.c_b_prime_abs;
    } else if (mode == "discrete" || mode == "inhomogeneous") {
        const CooperativitySet c = mode == "discrete"
            ? discrete_cooperativity(cfg.params, {}, ens, o.stored_at, cfg.omega0)
            : inhomogeneous_cooperativity(cfg.params, {}, ens, cfg.omega0);
        cstar = c.c_star_v, cb = c.c_b, cbp = c.c_b_prime_abs;
    } else if (mode == "monte-carlo") {
        if (o.geometry == "sphere") {
            ens.geometry = Geometry::sphere;
            ens.sphere_radius = o.radius;
        } else if (o.geometry == "box") {
            if (o.box.size() != 3) {
                throw Error(ErrorKind::config, "--box needs three side lengths");
            }
            ens.geometry = Geometry::box;
            ens.box_lengths = {o.box[0], o.box[1], o.box[2]};
        } else if (o.geometry != "infinite") {
            throw Error(ErrorKind::config, "unknown geometry '" + o.geometry + "'");
        }
        MonteCarloOptions mc;
        mc.n_samples = o.samples;
        mc.seed = cfg.seed;
        mc.threads = threads;
        mc.cutoff_radii = o.cutoff_radii;
        const MonteCarloResult r = monte_carlo_cooperativity(cfg.params, ens, mc);
        cstar = r.c_star_v, cb = r.c_b, cbp = r.c_b_prime_abs;
    } else {
        throw Error(ErrorKind::config, "unknown coop mode '" + mode + "'");
    }

    Table t;
    t.header = {"mode", "c_b", "c_b_prime_abs", "re_c_star_v", "im_c_star_v", "r_b_um", "zeta_per_um6"};
    t.rows.push_back({mode, cb, cbp, cstar.real(), cstar.imag(), blockade_radius(cfg.params, ens),
                      blockade_zeta(cfg.params, ens)});
    return t;
}

// -- spectrum --------------------------------------------------------------

struct SpectrumOpts {
    double omega_min = -100;
    double omega_max = 100;
    std::size_t points = 201;
    std::string positions;
    std::optional<std::size_t> stored_at;
};

Table cmd_spectrum(const ModelConfig &cfg, const SpectrumOpts &o, unsigned threads, std::ostream &err)
{
    require_grid(o.omega_min, o.omega_max, o.points, "spectrum");
    ReflectionSpectrum spec;
    if (o.positions.empty()) {
        if (o.stored_at) {
            throw Error(ErrorKind::config, "--stored-at needs --positions");
        }
        spec = continuum_spectrum(cfg.params, cfg.ensemble(), cfg.omega0);
    } else {
        spec = discrete_spectrum(cfg.params, {}, read_positions_file(o.positions, cfg.c6), o.stored_at,
                                 cfg.omega0);
    }
    const auto omega = linspace(o.omega_min, o.omega_max, o.points);
    Table t;
    t.header = {"omega_rad_per_us", "re_R_eit", "im_R_eit", "re_R_blocked", "im_R_blocked"};
    t.rows = parallel_rows(omega.size(), threads, [&](std::size_t i) -> std::vector<Cell> {
        const cplx g = spec.r_eit(omega[i]);
        const cplx k = spec.r_blocked(omega[i]);
        return {omega[i], g.real(), g.imag(), k.real(), k.imag()};
    });
    if (o.positions.empty()) {
        double worst = 0;
        for (const auto &row : t.rows) {
            worst = std::max({worst, std::hypot(std::get<double>(row[1]), std::get<double>(row[2])),
                              std::hypot(std::get<double>(row[3]), std::get<double>(row[4]))});
        }
        if (worst > 1 + 1e-12) {
            err << "warning: continuum spectrum reaches |R| = " << worst
                << "; n_atoms is too small for the infinite-space interaction integral this far off resonance\n";
        }
    }
    return t;
}

// -- fidelity --------------------------------------------------------------

struct FidelityOpts {
    double cb_min = 2;
    double cb_max = 50;
    std::size_t points = 100;
    double cb_prime_ratio = 1.0;
    std::string pulse;
    double duration_ns = 0;
    bool exact = false;
    std::string truncation = "leading";
};

Table cmd_fidelity(const ModelConfig &cfg, bool have_config, const FidelityOpts &o, unsigned threads,
                   std::ostream &err)
{
    require_grid(o.cb_min, o.cb_max, o.points, "fidelity");
    if (!(o.cb_min >= 0)) {
        throw Error(ErrorKind::config, "fidelity: --cb-min must be >= 0");
    }
    // Narrow pulses reproduce the C_b curves; a config file supplies a
    // physical pulse unless --pulse overrides it.
    const PulseShape shape = !o.pulse.empty() ? parse_pulse_shape(o.pulse)
                             : have_config   ? cfg.pulse_shape
                                             : PulseShape::delta;
    const double duration = o.duration_ns > 0 ? o.duration_ns : cfg.pulse_duration_ns;
    const PulseSpectrum pulse = PulseSpectrum::from_duration(shape, cfg.omega0, duration);
    const bool exact = o.exact || have_config;
    const bool leading = shape != PulseShape::lorentzian;
    if (!leading && !exact) {
        throw Error(ErrorKind::config, "lorentzian pulses have no closed-form fidelity; add --exact");
    }
    if (exact && o.cb_prime_ratio != 1.0) {
        throw Error(ErrorKind::config,
                    "exact columns use the continuum ensemble, which fixes |C_b'| = C_b; "
                    "drop --exact/--config or use --cb-prime-ratio 1");
    }
    Truncation tr;
    if (o.truncation == "leading") tr = Truncation::leading;
    else if (o.truncation == "next-order") tr = Truncation::next_order;
    else throw Error(ErrorKind::config, "unknown truncation '" + o.truncation + "'");

    const auto cbs = linspace(o.cb_min, o.cb_max, o.points);
    std::vector<std::vector<std::string>> warnings(cbs.size());
    Table t;
    t.header = {"c_b", "f_cj", "f_swap", "f_cj_dual", "p_suc"};
    if (exact) {
        for (const char *h : {"f_cj_exact", "f_swap_exact", "f_cj_dual_exact", "p_suc_exact"}) {
            t.header.emplace_back(h);
        }
    }
    t.rows = parallel_rows(cbs.size(), threads, [&](std::size_t i) -> std::vector<Cell> {
        const double cb = cbs[i];
        std::vector<Cell> row{cb};
        if (leading) {
            const CooperativitySet coop = CooperativitySet::from_cb(cb, cb * o.cb_prime_ratio, cfg.params);
            FidelityReport lr = leading_report(coop, cfg.params, pulse);
            if (tr == Truncation::next_order) {
                const SwapFigures sw = fswap_leading(coop, cfg.params, pulse, tr);
                lr.f_cj = fcj_single_rail_leading(coop, cfg.params, pulse, tr);
                lr.f_swap = sw.f_swap;
                lr.p_suc = sw.p_suc;
            }
            warnings[i] = lr.warnings;
            row.insert(row.end(), {lr.f_cj, lr.f_swap, lr.f_cj_dual, lr.p_suc});
        } else {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            row.insert(row.end(), {nan, nan, nan, nan});
        }
        if (exact) {
            const EnsembleModel ens
                = EnsembleModel::uniform(density_for_blockade(cfg.params, cfg.c6, cb), cfg.c6);
            const FidelityReport er = exact_report(continuum_spectrum(cfg.params, ens, cfg.omega0), pulse);
            row.insert(row.end(), {er.f_cj, er.f_swap, er.f_cj_dual, er.p_suc});
        }
        return row;
    });
    std::set<std::string> seen;
    for (const auto &w : warnings) {
        for (const auto &msg : w) {
            if (seen.insert(msg).second) err << "warning: " << msg << '\n';
        }
    }
    return t;
}

// -- repeater --------------------------------------------------------------

struct RepeaterOpts {
    RepeaterConfig rc;
    std::string source = "perfect";
    std::string swap = "rydberg";
    double cb_min = 1;
    double cb_max = 100;
    std::size_t points = 100;
    double cb_prime_ratio = 1.0;
    double gate_duration_ns = 0;
};

Table cmd_repeater(const ModelConfig &cfg, const RepeaterOpts &o, unsigned threads)
{
    require_grid(o.cb_min, o.cb_max, o.points, "repeater");
    RepeaterConfig base = o.rc;
    if (o.source == "perfect") base.source_model = SourceModel::perfect_single_excitation;
    else if (o.source == "raman") base.source_model = SourceModel::probabilistic_raman;
    else throw Error(ErrorKind::config, "unknown source '" + o.source + "'");
    if (o.swap == "rydberg") base.swap_model = SwapModel::rydberg;
    else if (o.swap == "linear") base.swap_model = SwapModel::linear_optics;
    else throw Error(ErrorKind::config, "unknown swap '" + o.swap + "'");
    base.rydberg.params = cfg.params;
    base.rydberg.bandwidth
        = o.gate_duration_ns > 0 ? units::bandwidth_from_duration_ns(o.gate_duration_ns) : 0.0;
    try {
        base.validate();
    } catch (const Error &e) {
        throw Error(ErrorKind::config, std::string("repeater: ") + e.what());
    }

    const auto cbs = linspace(o.cb_min, o.cb_max, o.points);
    Table t;
    t.header = {"c_b", "rate_hz_per_station", "qber", "levels"};
    t.rows = parallel_rows(cbs.size(), threads, [&](std::size_t i) -> std::vector<Cell> {
        RepeaterConfig rc = base;
        rc.rydberg.c_b = cbs[i];
        rc.rydberg.c_b_prime = cbs[i] * o.cb_prime_ratio;
        const RateResult r = secret_key_rate(rc);
        return {cbs[i], r.r_secret_per_station, r.qber, static_cast<std::int64_t>(r.swap_levels_used)};
    });
    return t;
}

// -- plumbing --------------------------------------------------------------

std::string join(const std::vector<std::string> &v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + v[i];
    return s;
}

nlohmann::ordered_json option_values(const CLI::App &sub)
{
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const CLI::Option *opt : sub.get_options()) {
        const std::string name = opt->get_name(false, true);
        if (name.empty() || name == "--help" || name == "-h,--help") continue;
        std::string key = opt->get_single_name();
        if (key == "help") continue;
        std::string value = opt->count() ? join(opt->results()) : opt->get_default_str();
        if (value == "{}") value.clear(); // unset vector option
        j[key] = value;
    }
    return j;
}

void write_manifest(const std::string &path, const CLI::App &sub, const ModelConfig &cfg,
                    const Globals &g, const std::vector<std::string> &args, const std::string &bytes)
{
    nlohmann::ordered_json m;
    m["subcommand"] = sub.get_name();
    m["tool_version"] = RYDGATE_VERSION;
    m["seed"] = cfg.seed;
    m["arguments"] = args;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto &[k, v] : cfg.resolved()) params[k] = v;
    m["parameters"] = params;
    m["options"] = option_values(sub);
    m["format"] = g.format;
    m["output"] = g.out_path;
    m["output_fnv1a64"] = hex64(fnv1a(bytes));
    std::ofstream f(path, std::ios::binary);
    f << m.dump(2) << '\n';
    if (!f) {
        throw Error(ErrorKind::config, "cannot write manifest '" + path + "'");
    }
}

int exit_code_for(ErrorKind k)
{
    switch (k) {
    case ErrorKind::config:
    case ErrorKind::domain:
        return exit_config;
    case ErrorKind::numerical_failure:
    case ErrorKind::singular_input:
    case ErrorKind::undefined_conditional:
        return exit_numerical;
    }
    return exit_numerical;
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Photonic Rydberg-blockade CP gate: cooperativities, reflection spectra, "
                 "gate fidelities and repeater rates."};
    app.name("rydgate");
    app.set_version_flag("--version", RYDGATE_VERSION);
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    Globals g;
    app.add_option("--config", g.config_path, "Parameter file (key = value)");
    CLI::Option *seed_opt = app.add_option("--seed", g.seed, "Seed for Monte-Carlo sampling");
    app.add_option("--threads", g.threads, "Worker threads (0 = all cores); never changes the output");
    app.add_option("--out", g.out_path, "Write output here (plus <out>.manifest.json) instead of stdout");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    CoopOpts co;
    CLI::App *coop = app.add_subcommand("coop", "Blockaded cooperativity C_b, |C_b'|, r_b and zeta");
    coop->add_option("--mode", co.mode, "continuum | monte-carlo | discrete | inhomogeneous")
        ->check(CLI::IsMember({"continuum", "monte-carlo", "discrete", "inhomogeneous"}));
    coop->add_option("--positions", co.positions, "Atom positions file: x y z [weight] per line, um");
    coop->add_option("--stored-at", co.stored_at, "Index of the atom holding the excitation");
    coop->add_option("--samples", co.samples, "Monte-Carlo atom count");
    coop->add_option("--geometry", co.geometry, "infinite | sphere | box");
    coop->add_option("--radius-um", co.radius, "Sphere radius");
    coop->add_option("--box-um", co.box, "Box side lengths")->expected(3);
    coop->add_option("--cutoff-radii", co.cutoff_radii, "Pair cutoff in blockade radii (infinite geometry)");

    SpectrumOpts so;
    std::size_t spectrum_stored = 0;
    CLI::App *spectrum = app.add_subcommand("spectrum", "Reflection spectra with and without a stored excitation");
    spectrum->add_option("--omega-min", so.omega_min, "Lowest probe detuning, rad/us");
    spectrum->add_option("--omega-max", so.omega_max, "Highest probe detuning, rad/us");
    spectrum->add_option("--points", so.points, "Grid points");
    spectrum->add_option("--positions", so.positions, "Atom positions file (default: uniform continuum)");
    CLI::Option *stored_opt = spectrum->add_option("--stored-at", spectrum_stored,
                                                   "Stored atom (default: spin-wave average)");

    FidelityOpts fo;
    CLI::App *fidelity = app.add_subcommand(
        "fidelity", "Fidelity and success-probability curves vs C_b (narrow pulse unless set)");
    fidelity->alias("fidelity-curve");
    fidelity->add_option("--cb-min", fo.cb_min, "Smallest C_b");
    fidelity->add_option("--cb-max", fo.cb_max, "Largest C_b");
    fidelity->add_option("--points", fo.points, "Grid points");
    fidelity->add_option("--cb-prime-ratio", fo.cb_prime_ratio, "|C_b'| / C_b");
    fidelity->add_option("--pulse", fo.pulse, "delta | gaussian | lorentzian")
        ->check(CLI::IsMember({"delta", "gaussian", "lorentzian"}));
    fidelity->add_option("--duration-ns", fo.duration_ns, "Pulse duration T = 1/dw (default from config)");
    fidelity->add_flag("--exact", fo.exact, "Add exact-integration columns (implied by --config)");
    fidelity->add_option("--truncation", fo.truncation, "leading | next-order closed forms")
        ->check(CLI::IsMember({"leading", "next-order"}));

    RepeaterOpts ro;
    CLI::App *repeater = app.add_subcommand(
        "repeater", "Secret-key rate per repeater station vs C_b, linear-optics or Rydberg swaps");
    repeater->add_option("--distance-km", ro.rc.total_distance, "End-to-end distance");
    repeater->add_option("--stations", ro.rc.n_stations, "Largest station count (2^n + 1)");
    repeater->add_option("--source", ro.source, "perfect | raman")->check(CLI::IsMember({"perfect", "raman"}));
    repeater->add_option("--source-rate-hz", ro.rc.source_rate, "Attempt repetition rate");
    repeater->add_option("--swap", ro.swap, "rydberg | linear")->check(CLI::IsMember({"rydberg", "linear"}));
    repeater->add_option("--attenuation-km", ro.rc.attenuation_length, "Fiber attenuation length");
    repeater->add_option("--signal-speed-km-s", ro.rc.signal_speed, "Signal speed in fiber");
    repeater->add_option("--eta-readout", ro.rc.eta_readout, "Ensemble readout efficiency");
    repeater->add_option("--eta-detector", ro.rc.eta_detector, "Photodetector efficiency");
    repeater->add_option("--c-dx", ro.rc.c_dx, "Double-excitation coefficient, w0 = 1 - c_dx p");
    repeater->add_option("--recursion-factor", ro.rc.recursion_factor, "Waiting-time factor per level");
    repeater->add_option("--p-source", ro.rc.p_source, "Fixed Raman excitation probability (0 = optimize)");
    repeater->add_flag("--linear-readout", ro.rc.linear_needs_readout,
                       "Apply eta_readout^2 to linear-optics swaps as well");
    repeater->add_option("--cb-min", ro.cb_min, "Smallest C_b");
    repeater->add_option("--cb-max", ro.cb_max, "Largest C_b");
    repeater->add_option("--points", ro.points, "Grid points");
    repeater->add_option("--cb-prime-ratio", ro.cb_prime_ratio, "|C_b'| / C_b");
    repeater->add_option("--gate-duration-ns", ro.gate_duration_ns, "Swap photon duration (0 = narrow)");

    CLI::App *verify = app.add_subcommand("verify", "Run the built-in invariant checks");

    for (CLI::App *sub : {coop, spectrum, fidelity, repeater, verify}) {
        sub->fallthrough();
    }

    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::CallForVersion &) {
        out << RYDGATE_VERSION << '\n';
        return exit_ok;
    } catch (const CLI::ParseError &e) {
        err << "rydgate: " << e.what() << '\n';
        return exit_config;
    }

    try {
        ModelConfig cfg;
        if (!g.config_path.empty()) cfg = load_config(g.config_path);
        if (seed_opt->count()) cfg.seed = g.seed;
        if (stored_opt->count()) so.stored_at = spectrum_stored;
        const Format format = parse_format(g.format);

        CLI::App *sub = app.get_subcommands().front();
        Table table;
        int code = exit_ok;
        if (sub == coop) {
            table = cmd_coop(cfg, co, g.threads);
        } else if (sub == spectrum) {
            table = cmd_spectrum(cfg, so, g.threads, err);
        } else if (sub == fidelity) {
            table = cmd_fidelity(cfg, !g.config_path.empty(), fo, g.threads, err);
        } else if (sub == repeater) {
            table = cmd_repeater(cfg, ro, g.threads);
        } else {
            bool passed = false;
            table = verify_suite(cfg, g.threads, passed);
            code = passed ? exit_ok : exit_check_failed;
        }

        const std::string bytes = emit(table, format);
        if (g.out_path.empty()) {
            out << bytes;
        } else {
            std::ofstream f(g.out_path, std::ios::binary);
            f << bytes;
            if (!f) {
                throw Error(ErrorKind::config, "cannot write output '" + g.out_path + "'");
            }
            write_manifest(g.out_path + ".manifest.json", *sub, cfg, g, args, bytes);
        }
        return code;
    } catch (const Error &e) {
        err << "rydgate: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception &e) {
        err << "rydgate: internal error: " << e.what() << '\n';
        return exit_numerical;
    }
}

} // namespace rydgate::cli
