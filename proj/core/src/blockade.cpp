#include "rydgate/blockade.hpp"

#include "rydgate/error.hpp"
#include "rydgate/quadrature.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>

namespace rydgate {

namespace {

constexpr cplx I(0.0, 1.0);
constexpr double pi = std::numbers::pi;

LocalAtom shared_atom(const AtomCavityParams &p)
{
    return local_atom(p, PerAtomOverrides{}, 0);
}

void check_continuum(const AtomCavityParams &params, const EnsembleModel &ens)
{
    params.validate();
    if (!(ens.c6 > 0) || !std::isfinite(ens.c6)) {
        throw_domain("c6 must be > 0");
    }
    if (!(ens.density >= 0) || !std::isfinite(ens.density)) {
        throw_domain("density must be >= 0");
    }
}

void check_discrete(const PerAtomOverrides &overrides, const EnsembleModel &ens)
{
    if (!ens.positions) {
        throw_domain("explicit atom positions are required");
    }
    ens.validate();
    overrides.validate(ens.size());
}

using FamilyVec = quad::Vec<10>;

FamilyVec to_vec(const FamilySums &d, const std::array<double, 5> &scale)
{
    const std::array<cplx, 5> c{d.t, d.dt, d.d2t, d.beta, d.chi};
    FamilyVec v;
    for (std::size_t j = 0; j < 5; ++j) {
        v[2 * j] = c[j].real() / scale[j];
        v[2 * j + 1] = c[j].imag() / scale[j];
    }
    return v;
}

FamilySums from_vec(const FamilyVec &v, const std::array<double, 5> &scale)
{
    auto c = [&](std::size_t j) { return cplx(v[2 * j], v[2 * j + 1]) * scale[j]; };
    return {c(0), c(1), c(2), c(3), c(4)};
}

// n * int 4 pi r^2 [h(V(r)) - h(0)] dr for the Taylor families. The
// difference cancels catastrophically once V << |Omega/2|^2 / Gamma_e, so
// quadrature stops at V = 1e-6 of that scale and the rest uses
// h(V) - h(0) = V h'(0) + V^2 h''(0) / 2 integrated in closed form.
FamilySums continuum_excess(const AtomCavityParams &params, const EnsembleModel &ens,
                            double omega0)
{
    const LocalAtom atom = shared_atom(params);
    const FamilySums free = atom_families(atom, 0.0, omega0);
    const double rb = blockade_radius(params, ens);
    const double r_far = rb * std::pow(1e6, 1.0 / 6.0);
    auto excess_at = [&](double v) { return atom_families(atom, v, omega0) - free; };
    auto v_of = [&](double r) {
        const double r2 = r * r;
        return ens.c6 / (r2 * r2 * r2);
    };

    // Per-component scale so one error norm serves all five families.
    std::array<double, 5> scale{};
    for (double x : {0.5, 1.0, 2.0}) {
        const FamilySums d = excess_at(v_of(x * rb));
        const std::array<cplx, 5> c{d.t, d.dt, d.d2t, d.beta, d.chi};
        for (std::size_t j = 0; j < 5; ++j) scale[j] = std::max(scale[j], std::abs(c[j]));
    }
    for (double &x : scale) {
        if (!(x > 0)) x = 1.0;
    }

    auto f = [&](double r) -> FamilyVec {
        return to_vec(excess_at(v_of(r)), scale) * (4.0 * pi * r * r);
    };
    quad::Options opt;
    opt.rel_tol = 1e-11;
    opt.abs_tol = 1e-13;
    const FamilyVec inner = quad::require_converged(quad::integrate_finite<FamilyVec>(f, 0.0, 3.0 * rb, opt),
                                                    "continuum family integral");
    const FamilyVec mid = quad::require_converged(quad::integrate_finite<FamilyVec>(f, 3.0 * rb, r_far, opt),
                                                  "continuum family integral (outer shell)");
    FamilySums out = from_vec(inner + mid, scale);

    const double v1 = v_of(r_far);
    const FamilySums q_full = excess_at(v1) * (1.0 / v1);
    const FamilySums q_half = excess_at(0.5 * v1) * (2.0 / v1);
    const FamilySums h2 = (q_full - q_half) * (2.0 / v1); // h''(0) / 2
    const FamilySums h1 = q_full - h2 * v1;
    const double r3 = r_far * r_far * r_far;
    out += h1 * (4.0 * pi * ens.c6 / (3.0 * r3));
    out += h2 * (4.0 * pi * ens.c6 * ens.c6 / (9.0 * r3 * r3 * r3));
    return out * ens.density;
}

} // namespace

const char *to_string(Geometry g)
{
    switch (g) {
    case Geometry::infinite_uniform: return "infinite_uniform";
    case Geometry::sphere: return "sphere";
    case Geometry::box: return "box";
    }
    return "?";
}

EnsembleModel EnsembleModel::uniform(double density, double c6)
{
    EnsembleModel e;
    e.density = density;
    e.c6 = c6;
    return e;
}

EnsembleModel EnsembleModel::discrete(std::vector<Vec3> positions, double c6,
                                      std::optional<std::vector<double>> spin_wave)
{
    EnsembleModel e;
    e.c6 = c6;
    e.positions = std::move(positions);
    e.spin_wave = std::move(spin_wave);
    return e;
}

double EnsembleModel::interaction(std::size_t k, std::size_t l) const
{
    const Vec3 &a = (*positions)[k];
    const Vec3 &b = (*positions)[l];
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    const double r2 = dx * dx + dy * dy + dz * dz;
    if (r2 == 0) {
        throw Error(ErrorKind::singular_input, "atoms " + std::to_string(k) + " and "
                                                   + std::to_string(l)
                                                   + " coincide (infinite interaction)");
    }
    return c6 / (r2 * r2 * r2);
}

void EnsembleModel::validate() const
{
    if (!(c6 > 0) || !std::isfinite(c6)) {
        throw_domain("c6 must be > 0");
    }
    if (!(density >= 0)) {
        throw_domain("density must be >= 0");
    }
    if (spin_wave) {
        if (!positions || spin_wave->size() != positions->size()) {
            throw_domain("spin-wave weights must match the atom positions");
        }
        double sum = 0;
        for (double w : *spin_wave) {
            if (!(w >= 0)) {
                throw_domain("spin-wave weights must be nonnegative");
            }
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw_domain("spin-wave weights sum to " + std::to_string(sum) + ", expected 1");
        }
    }
    if (geometry == Geometry::sphere && !(sphere_radius > 0)) {
        throw_domain("sphere geometry needs a positive radius");
    }
    if (geometry == Geometry::box
        && !(box_lengths[0] > 0 && box_lengths[1] > 0 && box_lengths[2] > 0)) {
        throw_domain("box geometry needs positive side lengths");
    }
}

EnsembleModel read_positions(std::istream &in, double c6, const std::string &source)
{
    std::vector<Vec3> pos;
    std::vector<double> weights;
    std::string line;
    int lineno = 0;
    int columns = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ss(line);
        std::vector<double> vals;
        std::string tok;
        while (ss >> tok) {
            try {
                std::size_t used = 0;
                vals.push_back(std::stod(tok, &used));
                if (used != tok.size()) {
                    throw std::invalid_argument(tok);
                }
            } catch (const std::exception &) {
                throw Error(ErrorKind::config, source + ":" + std::to_string(lineno)
                                                   + ": bad number '" + tok + "'");
            }
        }
        if (vals.empty()) {
            continue;
        }
        if (vals.size() != 3 && vals.size() != 4) {
            throw Error(ErrorKind::config, source + ":" + std::to_string(lineno)
                                               + ": expected 3 or 4 columns, got "
                                               + std::to_string(vals.size()));
        }
        const int n = static_cast<int>(vals.size());
        if (columns == 0) {
            columns = n;
        } else if (columns != n) {
            throw Error(ErrorKind::config, source + ":" + std::to_string(lineno)
                                               + ": inconsistent column count");
        }
        pos.push_back({vals[0], vals[1], vals[2]});
        if (n == 4) {
            weights.push_back(vals[3]);
        }
    }
    if (pos.empty()) {
        throw Error(ErrorKind::config, source + ": no atom positions");
    }
    std::optional<std::vector<double>> sw;
    if (columns == 4) {
        sw = std::move(weights);
    }
    EnsembleModel e = EnsembleModel::discrete(std::move(pos), c6, std::move(sw));
    e.validate();
    return e;
}

EnsembleModel read_positions_file(const std::string &path, double c6)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::config, "cannot open positions file '" + path + "'");
    }
    return read_positions(in, c6, path);
}

CooperativitySet make_cooperativity(const FamilySums &blocked, const FamilySums &eit,
                                    double gamma_e, double omega0)
{
    CooperativitySet s;
    s.omega0 = omega0;
    s.c_star_v = blocked.t;
    s.c_b = blocked.t.real();
    s.c_b_prime_abs = std::abs(blocked.t.imag());
    s.imag_positive = blocked.t.imag() >= 0;
    s.c_alpha = -I * gamma_e * blocked.dt;
    s.c_eta = -0.5 * I * gamma_e * gamma_e * blocked.d2t;
    s.c_beta = blocked.beta;
    s.c_chi = blocked.chi;
    s.c_star_eit = eit.t;
    s.c_alpha_eit = -I * gamma_e * eit.dt;
    s.c_eta_eit = -0.5 * I * gamma_e * gamma_e * eit.d2t;
    return s;
}

CooperativitySet CooperativitySet::from_cb(double c_b, double c_b_prime,
                                           const AtomCavityParams &params)
{
    if (!(c_b >= 0) || !std::isfinite(c_b) || !std::isfinite(c_b_prime)) {
        throw_domain("C_b must be >= 0 and C_b' finite");
    }
    CooperativitySet s = eit(params, 0.0);
    s.c_star_v = cplx(c_b, c_b_prime);
    s.c_b = c_b;
    s.c_b_prime_abs = std::abs(c_b_prime);
    s.imag_positive = c_b_prime >= 0;
    s.c_alpha = s.c_alpha_eit;
    s.c_eta = s.c_eta_eit;
    s.c_beta = 0.0;
    s.c_chi = 0.0;
    return s;
}

CooperativitySet CooperativitySet::eit(const AtomCavityParams &params, double omega0)
{
    params.validate();
    const FamilySums one = atom_families(shared_atom(params), 0.0, omega0);
    const FamilySums all = one * static_cast<double>(params.n_atoms);
    CooperativitySet s = make_cooperativity(all, all, params.gamma_e, omega0);
    s.n_eit_alpha = static_cast<double>(params.n_atoms);
    s.n_eit_eta = s.n_eit_alpha;
    return s;
}

double blockade_zeta(const AtomCavityParams &params, const EnsembleModel &ens)
{
    if (!(ens.c6 > 0)) {
        throw_domain("c6 must be > 0");
    }
    return params.half_drive_sq() / (ens.c6 * params.gamma_e);
}

double blockade_radius(const AtomCavityParams &params, const EnsembleModel &ens)
{
    const double z = blockade_zeta(params, ens);
    if (!(z > 0)) {
        throw_domain("blockade radius needs a nonzero drive");
    }
    return std::pow(z, -1.0 / 6.0);
}

double blockade_coop_per_density(const AtomCavityParams &params, double c6)
{
    const double z = blockade_zeta(params, EnsembleModel::uniform(1.0, c6));
    return (2.0 / 3.0) * params.coop_single * pi * pi / std::sqrt(2.0 * z);
}

double density_for_blockade(const AtomCavityParams &params, double c6, double c_b)
{
    if (!(c_b >= 0)) {
        throw_domain("C_b must be >= 0");
    }
    return c_b / blockade_coop_per_density(params, c6);
}

cplx continuum_cstar(const AtomCavityParams &params, const EnsembleModel &ens, double omega,
                     bool blocked)
{
    const LocalAtom atom = shared_atom(params);
    const cplx t0 = atom_term(atom, 0.0, omega);
    if (!blocked) {
        return static_cast<double>(params.n_atoms) * t0;
    }
    // t(V) - t(0) = C G W iV / (B (B + i a V)), B = a c0 + W; over all space
    // int 4 pi r^2 dr / (1 + z r^6) = (2 pi^2 / 3) / sqrt(z) with z = -i B / (c6 a).
    const cplx a(atom.gamma_e, -atom.delta - omega);
    const cplx c0(atom.gamma_r, atom.delta_two - omega);
    const cplx b = a * c0 + atom.half_drive_sq;
    cplx excess = 0.0;
    if (ens.density > 0) {
        const cplx z = -I * b / (ens.c6 * a);
        if (z.imag() == 0 && z.real() <= 0) {
            throw Error(ErrorKind::singular_input,
                        "continuum interaction integral diverges at this detuning");
        }
        const cplx radial = (2.0 * pi * pi / 3.0) / std::sqrt(z);
        excess = ens.density * atom.coop * atom.gamma_e * atom.half_drive_sq / (b * a) * radial;
    }
    return static_cast<double>(params.n_atoms - 1) * t0 + excess;
}

CooperativitySet continuum_cooperativity(const AtomCavityParams &params, const EnsembleModel &ens,
                                         double omega0)
{
    check_continuum(params, ens);
    const LocalAtom atom = shared_atom(params);
    const FamilySums free = atom_families(atom, 0.0, omega0);

    FamilySums blocked = free * static_cast<double>(params.n_atoms - 1);
    if (ens.density > 0 && params.half_drive_sq() > 0) {
        blocked += continuum_excess(params, ens, omega0);
    }
    // The value itself comes from the closed form, not the quadrature.
    blocked.t = continuum_cstar(params, ens, omega0, true);

    const FamilySums eit = free * static_cast<double>(params.n_atoms);
    CooperativitySet s = make_cooperativity(blocked, eit, params.gamma_e, omega0);
    double n_blocked = 0;
    if (params.half_drive_sq() > 0) {
        const double rb = blockade_radius(params, ens);
        n_blocked = ens.density * 4.0 / 3.0 * pi * rb * rb * rb;
    }
    s.n_eit_alpha = static_cast<double>(params.n_atoms) - n_blocked;
    s.n_eit_eta = s.n_eit_alpha;
    return s;
}

CooperativitySet discrete_cooperativity(const AtomCavityParams &params,
                                        const PerAtomOverrides &overrides,
                                        const EnsembleModel &ens, std::size_t stored_at,
                                        double omega0)
{
    params.validate();
    check_discrete(overrides, ens);
    const std::size_t n = ens.size();
    if (stored_at >= n) {
        throw_domain("stored atom index " + std::to_string(stored_at) + " out of range (n = "
                     + std::to_string(n) + ")");
    }
    const double v_b = params.half_drive_sq() / params.gamma_e;
    FamilySums blocked, eit;
    double unblocked = 0;
    for (std::size_t l = 0; l < n; ++l) {
        const LocalAtom atom = local_atom(params, overrides, l);
        eit += atom_families(atom, 0.0, omega0);
        if (l == stored_at) {
            continue;
        }
        const double v = ens.interaction(stored_at, l);
        blocked += atom_families(atom, v, omega0);
        if (v < v_b) {
            unblocked += 1;
        }
    }
    CooperativitySet s = make_cooperativity(blocked, eit, params.gamma_e, omega0);
    s.n_eit_alpha = unblocked;
    s.n_eit_eta = unblocked;
    return s;
}

CooperativitySet inhomogeneous_cooperativity(const AtomCavityParams &params,
                                             const PerAtomOverrides &overrides,
                                             const EnsembleModel &ens, double omega0)
{
    params.validate();
    if (!ens.spin_wave) {
        throw_domain("inhomogeneous cooperativity needs spin-wave weights");
    }
    check_discrete(overrides, ens);
    const std::size_t n = ens.size();
    const double v_b = params.half_drive_sq() / params.gamma_e;

    std::vector<LocalAtom> atoms;
    atoms.reserve(n);
    FamilySums eit;
    for (std::size_t l = 0; l < n; ++l) {
        atoms.push_back(local_atom(params, overrides, l));
        eit += atom_families(atoms.back(), 0.0, omega0);
    }

    cplx inverse_sum = 0.0;
    FamilySums averaged;
    double unblocked = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double w = (*ens.spin_wave)[k];
        if (w == 0) {
            continue;
        }
        FamilySums sk;
        double uk = 0;
        for (std::size_t l = 0; l < n; ++l) {
            if (l == k) {
                continue;
            }
            const double v = ens.interaction(k, l);
            sk += atom_families(atoms[l], v, omega0);
            if (v < v_b) {
                uk += 1;
            }
        }
        inverse_sum += w / (1.0 + sk.t);
        averaged += sk * w;
        unblocked += w * uk;
    }
    if (inverse_sum == 0.0) {
        throw Error(ErrorKind::singular_input, "spin-wave average of 1/(1 + C_k) vanishes");
    }
    averaged.t = 1.0 / inverse_sum - 1.0;
    CooperativitySet s = make_cooperativity(averaged, eit, params.gamma_e, omega0);
    s.n_eit_alpha = unblocked;
    s.n_eit_eta = unblocked;
    return s;
}

} // namespace rydgate
