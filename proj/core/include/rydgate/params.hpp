#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace rydgate {

// Cavity, atomic and drive parameters shared by all atoms.
// Rates are angular, in rad/us; C = |G|^2 / (kappa Gamma_e).
struct AtomCavityParams {
    double kappa = 0;       // cavity field decay rate
    double gamma_e = 0;     // excited-state width
    double gamma_r = 0;     // Rydberg-state width
    double omega_drive = 0; // classical drive Rabi frequency
    double coop_single = 0; // single-atom cooperativity
    std::size_t n_atoms = 1;
    double delta = 0;       // one-photon detuning
    double delta_two = 0;   // two-photon detuning

    // |G|^2 is derived from the cooperativity and never stored.
    double coupling_sq() const { return coop_single * kappa * gamma_e; }
    double half_drive_sq() const { return 0.25 * omega_drive * omega_drive; }
    double total_coop() const { return static_cast<double>(n_atoms) * coop_single; }
    bool resonant() const { return delta == 0 && delta_two == 0; }

    // Inverse group delay of the EIT reflection, (1/kappa + N C Gamma_e / |Omega/2|^2)^-1.
    double eit_width() const;

    void validate() const;
};

// Cavity QED parameters of the reference experiment: Gamma_e = (2pi) 3 MHz,
// kappa = (2pi) 10 MHz, C = 0.025, N C = 20, Omega = (2pi) 36 MHz.
AtomCavityParams reference_params();

// Optional per-atom values; an absent list means every atom uses the
// shared value from AtomCavityParams.
struct PerAtomOverrides {
    std::optional<std::vector<double>> omega_drive;
    std::optional<std::vector<double>> coop_single;
    std::optional<std::vector<double>> gamma_e;
    std::optional<std::vector<double>> gamma_r;
    std::optional<std::vector<double>> delta;
    std::optional<std::vector<double>> delta_two;

    bool empty() const;
    void validate(std::size_t n_atoms) const;
};

// Resolved parameters of one atom.
struct LocalAtom {
    double coop = 0;
    double gamma_e = 0;
    double gamma_r = 0;
    double half_drive_sq = 0;
    double delta = 0;
    double delta_two = 0;
};

LocalAtom local_atom(const AtomCavityParams &params, const PerAtomOverrides &overrides,
                     std::size_t index);

} // namespace rydgate
