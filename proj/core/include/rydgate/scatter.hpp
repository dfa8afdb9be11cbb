#pragma once

#include "rydgate/blockade.hpp"

#include <complex>
#include <functional>
#include <optional>

namespace rydgate {

// R(w) = 2 / (1 - i w / kappa + sum) - 1 for a given atom sum.
cplx reflection_from_sum(cplx atom_sum, double omega, double kappa);

// Exact reflection from explicit atoms: with stored_at set, the stored atom
// is removed and the others see V_kl; without it every atom has V = 0.
// Without positions, stored_at must be empty and params.n_atoms identical
// atoms are used.
cplx reflection_exact(const AtomCavityParams &params, const PerAtomOverrides &overrides,
                      const EnsembleModel &ens, std::optional<std::size_t> stored_at,
                      double omega);

// Same for a uniform continuum (closed-form interaction integral).
cplx reflection_continuum(const AtomCavityParams &params, const EnsembleModel &ens, bool blocked,
                          double omega);

// 2 / (1 + C*_v) - 1; with omega_zero_limit false the cavity detuning
// term -i w0 / kappa is kept (needs kappa).
cplx reflection_from_cooperativity(const CooperativitySet &coop, bool omega_zero_limit = true,
                                   double kappa = 0);

struct TaylorTriple {
    cplx r;  // R(w0)
    cplx d1; // dR/dw
    cplx d2; // d^2R/dw^2
};

enum class Branch { blocked, eit };

TaylorTriple taylor_coefficients(const CooperativitySet &coop, const AtomCavityParams &params,
                                 double omega0, Branch branch = Branch::blocked);

struct ReflectionSpectrum {
    std::function<cplx(double)> r_blocked; // spin-wave averaged
    std::function<cplx(double)> r_eit;
    TaylorTriple taylor_blocked;
    TaylorTriple taylor_eit;
    double omega0 = 0;
};

// Uniform continuum with the excitation stored at the origin.
ReflectionSpectrum continuum_spectrum(const AtomCavityParams &params, const EnsembleModel &ens,
                                      double omega0 = 0);

// Explicit atoms. With stored_at the blocked reflection is R_k; otherwise
// it is sum_k |a_k|^2 R_k over the spin wave (uniform when absent).
ReflectionSpectrum discrete_spectrum(const AtomCavityParams &params,
                                     const PerAtomOverrides &overrides, const EnsembleModel &ens,
                                     std::optional<std::size_t> stored_at = std::nullopt,
                                     double omega0 = 0);

// Frequency-independent reflections, e.g. the ideal gate (1, -1).
ReflectionSpectrum constant_spectrum(cplx r_eit, cplx r_blocked);

} // namespace rydgate
