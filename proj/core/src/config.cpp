#include "rydgate/config.hpp"

#include "rydgate/error.hpp"
#include "rydgate/units.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>

namespace rydgate {

namespace {

std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

double parse_number(const std::string &text, const std::string &where)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size() && std::isfinite(v)) {
            return v;
        }
    } catch (const std::exception &) {
    }
    throw Error(ErrorKind::config, where + ": '" + text + "' is not a finite number");
}

using Setter = std::function<void(ModelConfig &, const std::string &, const std::string &)>;

const std::map<std::string, Setter> &setters()
{
    using namespace units;
    static const std::map<std::string, Setter> table = {
        {"kappa_2pi_mhz", [](ModelConfig &c, const std::string &v, const std::string &w) { c.params.kappa = from_2pi_mhz(parse_number(v, w)); }},
        {"gamma_e_2pi_mhz", [](ModelConfig &c, const std::string &v, const std::string &w) { c.params.gamma_e = from_2pi_mhz(parse_number(v, w)); }},
        {"gamma_r_2pi_mhz", [](ModelConfig &c, const std::string &v, const std::string &w) { c.params.gamma_r = from_2pi_mhz(parse_number(v, w)); }},
        {"omega_2pi_mhz", [](ModelConfig &c, const std::string &v, const std::string &w) { c.params.omega_drive = from_2pi_mhz(parse_number(v, w)); }},
        {"coop_single", [](ModelConfig &c, const std::string &v, const std::string &w) { c.params.coop_single = parse_number(v, w); }},
        {"n_atoms", [](ModelConfig &c, const std::string &v, const std::string &w) {
             const double n = parse_number(v, w);
             if (n < 1 || n != std::floor(n) || n > 1e12) {
                 throw Error(ErrorKind::config, w + ": n_atoms must be a positive integer");
             }
             c.params.n_atoms = static_cast<std::size_t>(n);
         }},
        {"delta_2pi_mhz", [](ModelConfig &c, const std::string &v, const std::string &w) { c.params.delta = from_2pi_mhz(parse_number(v, w)); }},
        {"delta2_2pi_mhz", [](ModelConfig &c, const std::string &v, const std::string &w) { c.params.delta_two = from_2pi_mhz(parse_number(v, w)); }},
        {"pulse_shape", [](ModelConfig &c, const std::string &v, const std::string &w) {
             try {
                 c.pulse_shape = parse_pulse_shape(v);
             } catch (const Error &e) {
                 throw Error(ErrorKind::config, w + ": " + e.what());
             }
         }},
        {"pulse_duration_ns", [](ModelConfig &c, const std::string &v, const std::string &w) {
             c.pulse_duration_ns = parse_number(v, w);
             if (!(c.pulse_duration_ns > 0)) {
                 throw Error(ErrorKind::config, w + ": pulse_duration_ns must be > 0");
             }
         }},
        {"omega0_2pi_mhz", [](ModelConfig &c, const std::string &v, const std::string &w) { c.omega0 = from_2pi_mhz(parse_number(v, w)); }},
        {"density_per_um3", [](ModelConfig &c, const std::string &v, const std::string &w) { c.density = parse_number(v, w); }},
        {"c6_2pi_mhz_um6", [](ModelConfig &c, const std::string &v, const std::string &w) { c.c6 = from_2pi_mhz(parse_number(v, w)); }},
        {"seed", [](ModelConfig &c, const std::string &v, const std::string &w) {
             try {
                 std::size_t used = 0;
                 c.seed = std::stoull(v, &used);
                 if (used == v.size()) {
                     return;
                 }
             } catch (const std::exception &) {
             }
             throw Error(ErrorKind::config, w + ": seed must be an unsigned integer");
         }},
    };
    return table;
}

} // namespace

PulseSpectrum ModelConfig::pulse() const
{
    return PulseSpectrum::from_duration(pulse_shape, omega0, pulse_duration_ns);
}

EnsembleModel ModelConfig::ensemble() const
{
    return EnsembleModel::uniform(density, c6);
}

std::vector<std::pair<std::string, std::string>> ModelConfig::resolved() const
{
    using units::to_2pi_mhz;
    return {
        {"kappa_2pi_mhz", fmt(to_2pi_mhz(params.kappa))},
        {"gamma_e_2pi_mhz", fmt(to_2pi_mhz(params.gamma_e))},
        {"gamma_r_2pi_mhz", fmt(to_2pi_mhz(params.gamma_r))},
        {"omega_2pi_mhz", fmt(to_2pi_mhz(params.omega_drive))},
        {"coop_single", fmt(params.coop_single)},
        {"n_atoms", std::to_string(params.n_atoms)},
        {"delta_2pi_mhz", fmt(to_2pi_mhz(params.delta))},
        {"delta2_2pi_mhz", fmt(to_2pi_mhz(params.delta_two))},
        {"pulse_shape", to_string(pulse_shape)},
        {"pulse_duration_ns", fmt(pulse_duration_ns)},
        {"omega0_2pi_mhz", fmt(to_2pi_mhz(omega0))},
        {"density_per_um3", fmt(density)},
        {"c6_2pi_mhz_um6", fmt(to_2pi_mhz(c6))},
        {"seed", std::to_string(seed)},
    };
}

ModelConfig parse_config(std::istream &in, const std::string &source, ModelConfig base)
{
    const auto &table = setters();
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string raw = line;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const std::string where = source + ":" + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::config, where + ": expected 'key = value', got '" + trim(raw) + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = table.find(key);
        if (it == table.end()) {
            throw Error(ErrorKind::config, where + ": unknown key '" + key + "' in line '" + trim(raw) + "'");
        }
        if (value.empty()) {
            throw Error(ErrorKind::config, where + ": missing value for '" + key + "'");
        }
        it->second(base, value, where);
    }
    try {
        base.params.validate();
    } catch (const Error &e) {
        throw Error(ErrorKind::config, source + ": " + e.what());
    }
    return base;
}

ModelConfig load_config(const std::string &path, ModelConfig base)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::config, "cannot open config file '" + path + "'");
    }
    return parse_config(in, path, std::move(base));
}

const std::vector<std::string> &config_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto &[name, setter] : setters()) {
            k.push_back(name);
        }
        return k;
    }();
    return keys;
}

} // namespace rydgate
