#include "rydgate/params.hpp"

#include "rydgate/error.hpp"
#include "rydgate/units.hpp"

#include <cmath>
#include <string>

namespace rydgate {

namespace {

void require(bool ok, const std::string &what)
{
    if (!ok) {
        throw_domain(what);
    }
}

bool finite(double x) { return std::isfinite(x); }

void check_list(const std::optional<std::vector<double>> &list, const char *name,
                std::size_t n_atoms)
{
    if (!list) {
        return;
    }
    if (list->size() != n_atoms) {
        throw_domain(std::string("per-atom list '") + name + "' has "
                     + std::to_string(list->size()) + " entries, expected "
                     + std::to_string(n_atoms));
    }
    for (double v : *list) {
        require(finite(v), std::string("per-atom list '") + name + "' contains a non-finite value");
    }
}

double pick(const std::optional<std::vector<double>> &list, std::size_t i, double fallback)
{
    return list ? (*list)[i] : fallback;
}

} // namespace

double AtomCavityParams::eit_width() const
{
    const double delay = 1.0 / kappa + total_coop() * gamma_e / half_drive_sq();
    return 1.0 / delay;
}

void AtomCavityParams::validate() const
{
    require(finite(kappa) && kappa > 0, "kappa must be > 0");
    require(finite(gamma_e) && gamma_e > 0, "gamma_e must be > 0");
    require(finite(gamma_r) && gamma_r >= 0, "gamma_r must be >= 0");
    require(finite(coop_single) && coop_single >= 0, "coop_single must be >= 0");
    require(finite(omega_drive), "omega_drive must be finite");
    require(n_atoms >= 1, "n_atoms must be >= 1");
    require(finite(delta) && finite(delta_two), "detunings must be finite");
}

AtomCavityParams reference_params()
{
    AtomCavityParams p;
    p.kappa = units::from_2pi_mhz(10.0);
    p.gamma_e = units::from_2pi_mhz(3.0);
    p.gamma_r = 0;
    p.omega_drive = units::from_2pi_mhz(36.0);
    p.coop_single = 0.025;
    p.n_atoms = 800;
    return p;
}

bool PerAtomOverrides::empty() const
{
    return !omega_drive && !coop_single && !gamma_e && !gamma_r && !delta && !delta_two;
}

void PerAtomOverrides::validate(std::size_t n_atoms) const
{
    check_list(omega_drive, "omega_drive", n_atoms);
    check_list(coop_single, "coop_single", n_atoms);
    check_list(gamma_e, "gamma_e", n_atoms);
    check_list(gamma_r, "gamma_r", n_atoms);
    check_list(delta, "delta", n_atoms);
    check_list(delta_two, "delta_two", n_atoms);
    if (coop_single) {
        for (double c : *coop_single) require(c >= 0, "per-atom coop_single must be >= 0");
    }
    if (gamma_e) {
        for (double g : *gamma_e) require(g > 0, "per-atom gamma_e must be > 0");
    }
    if (gamma_r) {
        for (double g : *gamma_r) require(g >= 0, "per-atom gamma_r must be >= 0");
    }
}

LocalAtom local_atom(const AtomCavityParams &params, const PerAtomOverrides &overrides,
                     std::size_t index)
{
    LocalAtom a;
    a.coop = pick(overrides.coop_single, index, params.coop_single);
    a.gamma_e = pick(overrides.gamma_e, index, params.gamma_e);
    a.gamma_r = pick(overrides.gamma_r, index, params.gamma_r);
    const double omega = pick(overrides.omega_drive, index, params.omega_drive);
    a.half_drive_sq = 0.25 * omega * omega;
    a.delta = pick(overrides.delta, index, params.delta);
    a.delta_two = pick(overrides.delta_two, index, params.delta_two);
    return a;
}

} // namespace rydgate
