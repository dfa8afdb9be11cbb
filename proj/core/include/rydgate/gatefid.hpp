#pragma once

#include "rydgate/blockade.hpp"
#include "rydgate/pulse.hpp"
#include "rydgate/scatter.hpp"

#include <string>
#include <vector>

namespace rydgate {

enum class Method { exact_integration, leading_order };

const char *to_string(Method m);

struct FidelityReport {
    double f_cj = 0;      // single-rail Choi-Jamiolkowski
    double f_swap = 0;    // dual-rail conditional swap
    double f_cj_dual = 0; // dual-rail conditional CJ
    double p_suc = 0;
    Method method = Method::exact_integration;
    cplx delta_r, delta_r1, delta_r2;
    std::vector<std::string> warnings;
};

// Exact frequency integrals over the pulse. The spin-wave average is
// already part of spec.r_blocked.
double fcj_single_rail_exact(const ReflectionSpectrum &spec, const PulseSpectrum &pulse,
                             const quad::Options &opt = {});

struct SwapFigures {
    double f_swap = 0;
    double p_suc = 0;
};

SwapFigures fswap_exact(const ReflectionSpectrum &spec, const PulseSpectrum &pulse,
                        const quad::Options &opt = {});

// |int (2 + R_g - R_k)|^2 / (16 P_suc): the unconditional CJ overlap divided
// by the success probability.
double fcj_dual_conditional(const ReflectionSpectrum &spec, const PulseSpectrum &pulse,
                            const quad::Options &opt = {});

FidelityReport exact_report(const ReflectionSpectrum &spec, const PulseSpectrum &pulse,
                            const quad::Options &opt = {});

// Leading-order closed forms. Only C_b, |C_b'|, the EIT delay
// 1/kappa + N C Gamma_e / |Omega/2|^2 and the pulse variance enter.
enum class Truncation {
    leading,    // dominant terms only
    next_order, // with the first correction retained
};

double fcj_single_rail_leading(const CooperativitySet &coop, const AtomCavityParams &params,
                               const PulseSpectrum &pulse, Truncation tr = Truncation::leading);

SwapFigures fswap_leading(const CooperativitySet &coop, const AtomCavityParams &params,
                          const PulseSpectrum &pulse, Truncation tr = Truncation::leading);

// Conditional CJ to the same order: the swap value minus the mode-mismatch
// loss |dR'|^2 dw^2 / 16 with dR' ~ 2i (EIT delay).
double fcj_dual_leading(const CooperativitySet &coop, const AtomCavityParams &params,
                        const PulseSpectrum &pulse);

FidelityReport leading_report(const CooperativitySet &coop, const AtomCavityParams &params,
                              const PulseSpectrum &pulse);

struct DeltaR {
    cplx r;  // R_g - R_k
    cplx d1; // R_g' - R_k'
    cplx d2; // R_g'' - R_k''
};

DeltaR delta_r_terms(const CooperativitySet &coop, const AtomCavityParams &params);

// Second-order moment expansions built from the Taylor data.
double fcj_expansion(const DeltaR &d, double variance);
SwapFigures fswap_expansion(const DeltaR &d, const TaylorTriple &eit, const TaylorTriple &blocked,
                            double variance);

// Regime warnings for the closed forms (C_b < 3).
std::vector<std::string> regime_warnings(const CooperativitySet &coop);

} // namespace rydgate
