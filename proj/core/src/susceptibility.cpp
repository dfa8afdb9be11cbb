#include "rydgate/susceptibility.hpp"

#include <cmath>

namespace rydgate {

namespace {

constexpr cplx I(0.0, 1.0);

cplx detuned_width(const LocalAtom &atom, double omega)
{
    return cplx(atom.gamma_e, -atom.delta - omega);
}

} // namespace

cplx atom_term(const LocalAtom &atom, double v, double omega)
{
    const double scale = atom.coop * atom.gamma_e;
    const cplx a = detuned_width(atom, omega);
    if (std::isinf(v)) {
        return scale / a;
    }
    const cplx c(atom.gamma_r, atom.delta_two + v - omega);
    return scale * c / (a * c + atom.half_drive_sq);
}

AtomResponse atom_response(const LocalAtom &atom, double v, double omega)
{
    const double scale = atom.coop * atom.gamma_e;
    const cplx a = detuned_width(atom, omega);
    if (std::isinf(v)) {
        const cplx inv = 1.0 / a;
        return {scale * inv, scale * I * inv * inv, -2.0 * scale * inv * inv * inv};
    }
    // t = n / q with n' = -i, n'' = 0, q' = -i (a + c), q'' = -2.
    const cplx n(atom.gamma_r, atom.delta_two + v - omega);
    const cplx q = a * n + atom.half_drive_sq;
    const cplx dq = -I * (a + n);
    const cplx inv = 1.0 / q;
    const cplx num1 = -I * q - n * dq;
    const cplx t = n * inv;
    const cplx dt = num1 * inv * inv;
    const cplx d2t = 2.0 * n * inv * inv - 2.0 * dq * num1 * inv * inv * inv;
    return {scale * t, scale * dt, scale * d2t};
}

FamilySums atom_families(const LocalAtom &atom, double v, double omega0)
{
    const AtomResponse r = atom_response(atom, v, omega0);
    FamilySums f{r.t, r.dt, r.d2t, {}, {}};

    // Auxiliary families, written in the form that stays finite as V -> w0:
    //   beta: C (u^2 + W) (i G)^3 u / Q^3,   chi: C W w0 (i G)^3 / Q^3,
    //   Q = i G u + u w0 + W,  u = V - w0.
    const double w = atom.half_drive_sq;
    const cplx ig3 = std::pow(I * atom.gamma_e, 3);
    if (std::isinf(v)) {
        f.beta = atom.coop;
        f.chi = 0.0;
    } else {
        const double u = v - omega0;
        const cplx q = I * atom.gamma_e * u + u * omega0 + w;
        const cplx q3 = q * q * q;
        f.beta = atom.coop * (u * u + w) * ig3 * u / q3;
        f.chi = atom.coop * w * omega0 * ig3 / q3;
    }
    return f;
}

FamilySums &FamilySums::operator+=(const FamilySums &o)
{
    t += o.t;
    dt += o.dt;
    d2t += o.d2t;
    beta += o.beta;
    chi += o.chi;
    return *this;
}

FamilySums FamilySums::operator-(const FamilySums &o) const
{
    return {t - o.t, dt - o.dt, d2t - o.d2t, beta - o.beta, chi - o.chi};
}

FamilySums FamilySums::operator*(double s) const
{
    return {t * s, dt * s, d2t * s, beta * s, chi * s};
}

} // namespace rydgate
