#include "rydgate/scatter.hpp"

#include "rydgate/error.hpp"

#include <cmath>
#include <memory>

namespace rydgate {

namespace {

constexpr cplx I(0.0, 1.0);

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Interaction rows V_kl for the stored sites that carry weight.
struct StoredSites {
    std::vector<std::size_t> index;
    std::vector<double> weight;
    std::vector<std::vector<double>> v; // v[s][l], stored atom's own entry unused
};

StoredSites stored_sites(const EnsembleModel &ens, std::optional<std::size_t> stored_at)
{
    const std::size_t n = ens.size();
    StoredSites s;
    if (stored_at) {
        if (*stored_at >= n) {
            throw_domain("stored atom index " + std::to_string(*stored_at) + " out of range");
        }
        s.index.push_back(*stored_at);
        s.weight.push_back(1.0);
    } else {
        for (std::size_t k = 0; k < n; ++k) {
            const double w = ens.spin_wave ? (*ens.spin_wave)[k] : 1.0 / static_cast<double>(n);
            if (w > 0) {
                s.index.push_back(k);
                s.weight.push_back(w);
            }
        }
    }
    for (std::size_t k : s.index) {
        std::vector<double> row(n, 0.0);
        for (std::size_t l = 0; l < n; ++l) {
            if (l != k) {
                row[l] = ens.interaction(k, l);
            }
        }
        s.v.push_back(std::move(row));
    }
    return s;
}

std::vector<LocalAtom> resolve_atoms(const AtomCavityParams &params,
                                     const PerAtomOverrides &overrides, std::size_t n)
{
    std::vector<LocalAtom> atoms;
    atoms.reserve(n);
    for (std::size_t l = 0; l < n; ++l) {
        atoms.push_back(local_atom(params, overrides, l));
    }
    return atoms;
}

} // namespace

cplx reflection_from_sum(cplx atom_sum, double omega, double kappa)
{
    const cplx d = 1.0 - I * omega / kappa + atom_sum;
    if (d == 0.0 || !finite(d)) {
        throw Error(ErrorKind::singular_input,
                    "reflection has a pole at omega = " + std::to_string(omega) + " rad/us");
    }
    return 2.0 / d - 1.0;
}

cplx reflection_exact(const AtomCavityParams &params, const PerAtomOverrides &overrides,
                      const EnsembleModel &ens, std::optional<std::size_t> stored_at,
                      double omega)
{
    params.validate();
    if (!ens.positions) {
        if (stored_at) {
            throw_domain("a stored excitation needs explicit atom positions");
        }
        overrides.validate(params.n_atoms);
        cplx sum = 0.0;
        if (overrides.empty()) {
            sum = static_cast<double>(params.n_atoms) * atom_term(local_atom(params, overrides, 0), 0.0, omega);
        } else {
            for (std::size_t l = 0; l < params.n_atoms; ++l) {
                sum += atom_term(local_atom(params, overrides, l), 0.0, omega);
            }
        }
        return reflection_from_sum(sum, omega, params.kappa);
    }
    ens.validate();
    overrides.validate(ens.size());
    if (stored_at && *stored_at >= ens.size()) {
        throw_domain("stored atom index " + std::to_string(*stored_at) + " out of range");
    }
    cplx sum = 0.0;
    for (std::size_t l = 0; l < ens.size(); ++l) {
        if (stored_at && l == *stored_at) {
            continue;
        }
        const double v = stored_at ? ens.interaction(*stored_at, l) : 0.0;
        sum += atom_term(local_atom(params, overrides, l), v, omega);
    }
    return reflection_from_sum(sum, omega, params.kappa);
}

cplx reflection_continuum(const AtomCavityParams &params, const EnsembleModel &ens, bool blocked,
                          double omega)
{
    return reflection_from_sum(continuum_cstar(params, ens, omega, blocked), omega, params.kappa);
}

cplx reflection_from_cooperativity(const CooperativitySet &coop, bool omega_zero_limit,
                                   double kappa)
{
    if (omega_zero_limit) {
        const cplx d = 1.0 + coop.c_star_v;
        if (d == 0.0) {
            throw Error(ErrorKind::singular_input, "C*_v = -1 is a pole of the reflection");
        }
        return 2.0 / d - 1.0;
    }
    if (!(kappa > 0)) {
        throw_domain("kappa must be > 0");
    }
    return reflection_from_sum(coop.c_star_v, coop.omega0, kappa);
}

TaylorTriple taylor_coefficients(const CooperativitySet &coop, const AtomCavityParams &params,
                                 double omega0, Branch branch)
{
    params.validate();
    const bool eit = branch == Branch::eit;
    const cplx c_v = eit ? coop.c_star_eit : coop.c_star_v;
    const cplx c_alpha = eit ? coop.c_alpha_eit : coop.c_alpha;
    const cplx c_eta = eit ? coop.c_eta_eit : coop.c_eta;
    const double g = params.gamma_e;

    const cplx d = 1.0 - I * omega0 / params.kappa + c_v;
    if (d == 0.0) {
        throw Error(ErrorKind::singular_input, "Taylor expansion point is a pole");
    }
    const cplx delay = 1.0 / params.kappa - c_alpha / g; // D' = -i delay
    const cplx d2 = d * d;
    TaylorTriple t;
    t.r = 2.0 / d - 1.0;
    t.d1 = 2.0 * I * delay / d2;
    t.d2 = -4.0 * delay * delay / (d2 * d) - 4.0 * I * c_eta / (g * g * d2);
    return t;
}

ReflectionSpectrum continuum_spectrum(const AtomCavityParams &params, const EnsembleModel &ens,
                                      double omega0)
{
    const CooperativitySet coop = continuum_cooperativity(params, ens, omega0);
    ReflectionSpectrum s;
    s.omega0 = omega0;
    s.r_blocked = [params, ens](double w) { return reflection_continuum(params, ens, true, w); };
    s.r_eit = [params, ens](double w) { return reflection_continuum(params, ens, false, w); };
    s.taylor_blocked = taylor_coefficients(coop, params, omega0, Branch::blocked);
    s.taylor_eit = taylor_coefficients(coop, params, omega0, Branch::eit);
    return s;
}

ReflectionSpectrum discrete_spectrum(const AtomCavityParams &params,
                                     const PerAtomOverrides &overrides, const EnsembleModel &ens,
                                     std::optional<std::size_t> stored_at, double omega0)
{
    params.validate();
    if (!ens.positions) {
        throw_domain("discrete spectrum needs explicit atom positions");
    }
    ens.validate();
    overrides.validate(ens.size());

    auto sites = std::make_shared<const StoredSites>(stored_sites(ens, stored_at));
    auto atoms = std::make_shared<const std::vector<LocalAtom>>(resolve_atoms(params, overrides, ens.size()));
    const double kappa = params.kappa;

    ReflectionSpectrum s;
    s.omega0 = omega0;
    s.r_eit = [atoms, kappa](double w) {
        cplx sum = 0.0;
        for (const LocalAtom &a : *atoms) {
            sum += atom_term(a, 0.0, w);
        }
        return reflection_from_sum(sum, w, kappa);
    };
    s.r_blocked = [atoms, sites, kappa](double w) {
        cplx avg = 0.0;
        for (std::size_t i = 0; i < sites->index.size(); ++i) {
            const std::size_t k = sites->index[i];
            const auto &row = sites->v[i];
            cplx sum = 0.0;
            for (std::size_t l = 0; l < atoms->size(); ++l) {
                if (l != k) {
                    sum += atom_term((*atoms)[l], row[l], w);
                }
            }
            avg += sites->weight[i] * reflection_from_sum(sum, w, kappa);
        }
        return avg;
    };

    // Taylor data of the averaged reflection: weights times per-site triples.
    TaylorTriple blocked{0.0, 0.0, 0.0};
    CooperativitySet eit_coop;
    for (std::size_t i = 0; i < sites->index.size(); ++i) {
        const CooperativitySet c = discrete_cooperativity(params, overrides, ens, sites->index[i], omega0);
        const TaylorTriple t = taylor_coefficients(c, params, omega0, Branch::blocked);
        const double w = sites->weight[i];
        blocked.r += w * t.r;
        blocked.d1 += w * t.d1;
        blocked.d2 += w * t.d2;
        eit_coop = c;
    }
    s.taylor_blocked = blocked;
    s.taylor_eit = taylor_coefficients(eit_coop, params, omega0, Branch::eit);
    return s;
}

ReflectionSpectrum constant_spectrum(cplx r_eit, cplx r_blocked)
{
    ReflectionSpectrum s;
    s.r_eit = [r_eit](double) { return r_eit; };
    s.r_blocked = [r_blocked](double) { return r_blocked; };
    s.taylor_eit = {r_eit, 0.0, 0.0};
    s.taylor_blocked = {r_blocked, 0.0, 0.0};
    return s;
}

} // namespace rydgate
