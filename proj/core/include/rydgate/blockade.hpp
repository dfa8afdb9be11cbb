#pragma once

#include "rydgate/params.hpp"
#include "rydgate/susceptibility.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rydgate {

struct Vec3 {
    double x = 0, y = 0, z = 0;
};

enum class Geometry { infinite_uniform, sphere, box };

const char *to_string(Geometry g);

// Atomic ensemble: either a uniform density (continuum and Monte-Carlo
// modes) or explicit positions. V(r) = c6 / r^6 with c6 > 0.
struct EnsembleModel {
    double density = 0; // atoms per um^3
    double c6 = 0;      // rad/us um^6
    std::optional<std::vector<Vec3>> positions;
    std::optional<std::vector<double>> spin_wave; // |alpha_k|^2
    Geometry geometry = Geometry::infinite_uniform;
    double sphere_radius = 0;
    std::array<double, 3> box_lengths{0, 0, 0};

    static EnsembleModel uniform(double density, double c6);
    static EnsembleModel discrete(std::vector<Vec3> positions, double c6,
                                  std::optional<std::vector<double>> spin_wave = std::nullopt);

    bool is_discrete() const { return positions.has_value(); }
    std::size_t size() const { return positions ? positions->size() : 0; }

    // c6 / |r_k - r_l|^6; coincident positions raise an error naming the pair.
    double interaction(std::size_t k, std::size_t l) const;

    void validate() const;
};

// Minimal positions file: "x y z [w]" per line in um, '#' comments.
EnsembleModel read_positions(std::istream &in, double c6, const std::string &source = "<stream>");
EnsembleModel read_positions_file(const std::string &path, double c6);

// Effective cooperativities of the ensemble with one stored Rydberg
// excitation (c_star_v and families) and without (the *_eit members),
// all evaluated at probe detuning omega0.
//
// Sign convention: V = +c6/r^6 puts Im(c_star_v) > 0 at resonance. Only
// c_b and |c_b'| enter the fidelities, so the sign is kept as a flag.
struct CooperativitySet {
    cplx c_star_v;
    double c_b = 0;
    double c_b_prime_abs = 0;
    bool imag_positive = true;

    cplx c_alpha, c_beta, c_eta, c_chi;

    cplx c_star_eit; // zero at resonance
    cplx c_alpha_eit, c_eta_eit;

    double n_eit_alpha = 0;
    double n_eit_eta = 0;

    double omega0 = 0;

    // Homogeneous superatom with the given C_b, C_b' at resonance: the
    // unblocked atoms carry the full EIT dispersion and the blocked ones
    // contribute no dispersion, which is the regime of the closed-form
    // fidelities.
    static CooperativitySet from_cb(double c_b, double c_b_prime, const AtomCavityParams &params);

    // EIT-only set: no stored excitation.
    static CooperativitySet eit(const AtomCavityParams &params, double omega0 = 0);
};

// Builds a set from raw sums (blocked and unblocked) at omega0.
CooperativitySet make_cooperativity(const FamilySums &blocked, const FamilySums &eit,
                                    double gamma_e, double omega0);

// zeta = |Omega|^2 / (4 c6 Gamma_e)  [um^-6]
double blockade_zeta(const AtomCavityParams &params, const EnsembleModel &ens);

// Radius where V(r) = |Omega/2|^2 / Gamma_e.
double blockade_radius(const AtomCavityParams &params, const EnsembleModel &ens);

// Closed-form C_b = |C_b'| of a uniform continuum per unit density.
double blockade_coop_per_density(const AtomCavityParams &params, double c6);

// Density giving a requested continuum C_b.
double density_for_blockade(const AtomCavityParams &params, double c6, double c_b);

// Sum over a uniform continuum with one excitation stored at the origin
// (blocked) or none (eit), at any probe detuning. params.n_atoms counts the
// atoms; the blocked case has n_atoms - 1 partners whose departure from
// the unblocked response is integrated over all space in closed form.
cplx continuum_cstar(const AtomCavityParams &params, const EnsembleModel &ens, double omega,
                     bool blocked);

CooperativitySet continuum_cooperativity(const AtomCavityParams &params, const EnsembleModel &ens,
                                         double omega0 = 0);

// Direct sums over explicit positions; the stored atom is excluded. The
// atom count is the number of positions.
CooperativitySet discrete_cooperativity(const AtomCavityParams &params,
                                        const PerAtomOverrides &overrides,
                                        const EnsembleModel &ens, std::size_t stored_at,
                                        double omega0 = 0);

// Spin-wave averaged blocked cooperativity, C^inh = 1 / sum_k |a_k|^2 (1 + C_k)^-1 - 1,
// with Rydberg linewidths included.
CooperativitySet inhomogeneous_cooperativity(const AtomCavityParams &params,
                                             const PerAtomOverrides &overrides,
                                             const EnsembleModel &ens, double omega0 = 0);

struct MonteCarloOptions {
    std::size_t n_samples = 100000;
    std::uint64_t seed = 1;
    unsigned threads = 0;       // 0 = hardware concurrency
    double cutoff_radii = 2.0;  // pair cutoff in units of r_b (infinite_uniform)
};

struct MonteCarloResult {
    cplx c_star_v;
    double c_b = 0;
    double c_b_prime_abs = 0;
    double partner_density = 0; // density seen by each stored site
    double cutoff = 0;          // um; 0 for direct sums
    std::size_t n_samples = 0;
    std::size_t pairs = 0;
};

// Monte-Carlo estimate of the resonant blocked cooperativity for a
// uniformly filled geometry.
//  infinite_uniform: n_samples atoms in a periodic cube at ens.density,
//    averaged over every site as the stored one; pairs beyond the cutoff
//    are replaced by the continuum tail.
//  sphere / box: n_samples partners uniform in the region, stored atom
//    at its center, direct sum.
// The result depends only on (seed, n_samples), not on the thread count.
MonteCarloResult monte_carlo_cooperativity(const AtomCavityParams &params,
                                           const EnsembleModel &ens,
                                           const MonteCarloOptions &opt = {});

// Uniform positions in the geometry's region (the periodic cube for
// infinite_uniform); draw i uses counters 3i..3i+2 of `seed`.
std::vector<Vec3> sample_positions(const EnsembleModel &ens, std::size_t n, std::uint64_t seed);

} // namespace rydgate
