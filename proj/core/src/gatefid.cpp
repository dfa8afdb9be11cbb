#include "rydgate/gatefid.hpp"

#include "rydgate/error.hpp"

#include <algorithm>
#include <cmath>

namespace rydgate {

namespace {

double norm2(cplx z) { return std::norm(z); }

double pulse_variance(const PulseSpectrum &pulse)
{
    if (pulse.shape() == PulseShape::lorentzian) {
        throw_domain("closed-form fidelities need a finite pulse variance");
    }
    return pulse.variance();
}

struct Bandwidth {
    double delay; // 1/kappa + N C Gamma_e / |Omega/2|^2
    double absorb; // N C Gamma_e^2 / |Omega/2|^4
};

Bandwidth bandwidth_coefficients(const AtomCavityParams &p)
{
    const double w = p.half_drive_sq();
    const double nc = p.total_coop();
    return {1.0 / p.kappa + nc * p.gamma_e / w, nc * p.gamma_e * p.gamma_e / (w * w)};
}

// One adaptive pass shared by every exact figure: Re/Im of the overlap
// int (2 + R_g - R_k), int |2 + R_g - R_k|^2 and int (2 + |R_g|^2 + |R_k|^2).
// A common node set keeps |overlap|^2 <= int |.|^2 exact in floating point.
struct ExactMoments {
    cplx overlap;
    double contrast = 0;
    double p_suc = 0;
};

ExactMoments exact_moments(const ReflectionSpectrum &spec, const PulseSpectrum &pulse,
                           const quad::Options &opt)
{
    using V4 = quad::Vec<4>;
    const V4 m = integrate_spectrum_as<V4>(
        pulse,
        [&](double w) {
            const cplx rg = spec.r_eit(w);
            const cplx rk = spec.r_blocked(w);
            const cplx d = 2.0 + rg - rk;
            V4 out;
            out[0] = d.real();
            out[1] = d.imag();
            out[2] = norm2(d);
            out[3] = 2.0 + norm2(rg) + norm2(rk);
            return out;
        },
        opt);
    ExactMoments e;
    e.overlap = cplx(m[0], m[1]);
    e.contrast = m[2];
    e.p_suc = 0.25 * m[3];
    if (!(e.p_suc > 0)) {
        throw Error(ErrorKind::undefined_conditional, "success probability is zero");
    }
    return e;
}

double clamp_unit(double x, const char *name, std::vector<std::string> &warnings)
{
    if (x < 0 || x > 1) {
        warnings.push_back(std::string(name) + " closed form " + std::to_string(x)
                           + " lies outside [0, 1]; clamped");
        return std::clamp(x, 0.0, 1.0);
    }
    return x;
}

} // namespace

const char *to_string(Method m)
{
    return m == Method::exact_integration ? "exact_integration" : "leading_order";
}

double fcj_single_rail_exact(const ReflectionSpectrum &spec, const PulseSpectrum &pulse,
                             const quad::Options &opt)
{
    return norm2(exact_moments(spec, pulse, opt).overlap) / 16.0;
}

SwapFigures fswap_exact(const ReflectionSpectrum &spec, const PulseSpectrum &pulse,
                        const quad::Options &opt)
{
    const ExactMoments e = exact_moments(spec, pulse, opt);
    return {e.contrast / (16.0 * e.p_suc), e.p_suc};
}

double fcj_dual_conditional(const ReflectionSpectrum &spec, const PulseSpectrum &pulse,
                            const quad::Options &opt)
{
    const ExactMoments e = exact_moments(spec, pulse, opt);
    return norm2(e.overlap) / (16.0 * e.p_suc);
}

FidelityReport exact_report(const ReflectionSpectrum &spec, const PulseSpectrum &pulse,
                            const quad::Options &opt)
{
    const ExactMoments e = exact_moments(spec, pulse, opt);
    FidelityReport r;
    r.method = Method::exact_integration;
    r.f_cj = norm2(e.overlap) / 16.0;
    r.p_suc = e.p_suc;
    r.f_swap = e.contrast / (16.0 * e.p_suc);
    r.f_cj_dual = norm2(e.overlap) / (16.0 * e.p_suc);
    r.delta_r = spec.taylor_eit.r - spec.taylor_blocked.r;
    r.delta_r1 = spec.taylor_eit.d1 - spec.taylor_blocked.d1;
    r.delta_r2 = spec.taylor_eit.d2 - spec.taylor_blocked.d2;
    return r;
}

double fcj_single_rail_leading(const CooperativitySet &coop, const AtomCavityParams &params,
                               const PulseSpectrum &pulse, Truncation tr)
{
    const double v = pulse_variance(pulse);
    const Bandwidth bw = bandwidth_coefficients(params);
    const double cb = coop.c_b;
    const double cp2 = coop.c_b_prime_abs * coop.c_b_prime_abs;
    const double d = (1 + cb) * (1 + cb) + cp2;
    const double gate = 1.0 - (1 + cb) / d;
    if (tr == Truncation::leading) {
        return gate - bw.absorb * v - bw.delay * bw.delay * v;
    }
    const double dressing = 1.0 + (cb * (1 + cb) + cp2) / d;
    return gate + 1.0 / (4.0 * d) - 0.5 * bw.absorb * v * dressing
           - 0.5 * bw.delay * bw.delay * dressing * v;
}

SwapFigures fswap_leading(const CooperativitySet &coop, const AtomCavityParams &params,
                          const PulseSpectrum &pulse, Truncation tr)
{
    const double v = pulse_variance(pulse);
    const Bandwidth bw = bandwidth_coefficients(params);
    const double cb = coop.c_b;
    const double cp2 = coop.c_b_prime_abs * coop.c_b_prime_abs;
    const double d = (1 + cb) * (1 + cb) + cp2;
    const double s = cb * cb + cp2;

    SwapFigures out;
    out.p_suc = 1.0 - cb / d - bw.absorb * v;
    if (tr == Truncation::leading) {
        out.f_swap = 1.0 - 1.0 / s - (3 * cb * cb - cp2) / (4 * s * s)
                     - 0.75 * bw.delay * bw.delay * v;
    } else {
        const double m = s + 2 * cb;
        out.f_swap = 1.0 - 3.0 / (4 * m) - cb * cb / (m * m)
                     - 0.75 * bw.delay * bw.delay * (1.0 + cb / m) * v;
    }
    return out;
}

double fcj_dual_leading(const CooperativitySet &coop, const AtomCavityParams &params,
                        const PulseSpectrum &pulse)
{
    const double v = pulse_variance(pulse);
    const Bandwidth bw = bandwidth_coefficients(params);
    return fswap_leading(coop, params, pulse).f_swap - 0.25 * bw.delay * bw.delay * v;
}

FidelityReport leading_report(const CooperativitySet &coop, const AtomCavityParams &params,
                              const PulseSpectrum &pulse)
{
    FidelityReport r;
    r.method = Method::leading_order;
    r.warnings = regime_warnings(coop);
    const SwapFigures sw = fswap_leading(coop, params, pulse);
    r.f_cj = clamp_unit(fcj_single_rail_leading(coop, params, pulse), "F_CJ", r.warnings);
    r.f_swap = clamp_unit(sw.f_swap, "F_swap", r.warnings);
    r.p_suc = clamp_unit(sw.p_suc, "P_suc", r.warnings);
    r.f_cj_dual = clamp_unit(fcj_dual_leading(coop, params, pulse), "F'_CJ", r.warnings);
    const DeltaR dr = delta_r_terms(coop, params);
    r.delta_r = dr.r;
    r.delta_r1 = dr.d1;
    r.delta_r2 = dr.d2;
    return r;
}

DeltaR delta_r_terms(const CooperativitySet &coop, const AtomCavityParams &params)
{
    const TaylorTriple g = taylor_coefficients(coop, params, coop.omega0, Branch::eit);
    const TaylorTriple k = taylor_coefficients(coop, params, coop.omega0, Branch::blocked);
    return {g.r - k.r, g.d1 - k.d1, g.d2 - k.d2};
}

double fcj_expansion(const DeltaR &d, double variance)
{
    return (4.0 + norm2(d.r) + 4.0 * d.r.real() + 2.0 * d.d2.real() * variance
            + (d.r * std::conj(d.d2)).real() * variance)
           / 16.0;
}

SwapFigures fswap_expansion(const DeltaR &d, const TaylorTriple &eit, const TaylorTriple &blocked,
                            double variance)
{
    auto moment = [variance](const TaylorTriple &t) {
        return norm2(t.r) + norm2(t.d1) * variance + (t.r * std::conj(t.d2)).real() * variance;
    };
    SwapFigures out;
    out.p_suc = 0.25 * (2.0 + moment(eit) + moment(blocked));
    const double num = 4.0 + norm2(d.r) + 4.0 * d.r.real() + norm2(d.d1) * variance
                       + 2.0 * d.d2.real() * variance + (d.r * std::conj(d.d2)).real() * variance;
    out.f_swap = num / (16.0 * out.p_suc);
    return out;
}

std::vector<std::string> regime_warnings(const CooperativitySet &coop)
{
    std::vector<std::string> w;
    if (coop.c_b < 3) {
        w.push_back("C_b = " + std::to_string(coop.c_b)
                    + " < 3: closed-form fidelities are outside their regime of validity");
    }
    return w;
}

} // namespace rydgate
