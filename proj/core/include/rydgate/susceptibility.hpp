#pragma once

#include "rydgate/params.hpp"

#include <complex>

namespace rydgate {

using cplx = std::complex<double>;

// Cooperativity contributed by one atom at probe detuning w,
//   t(w) = C Gamma_e c / (a c + |Omega/2|^2),
//   a = Gamma_e - i Delta - i w,   c = Gamma_r + i (delta + V - w),
// so the cavity reflection is 2 / (1 - i w / kappa + sum_l t_l) - 1.
// V = +inf gives the fully blocked two-level response C Gamma_e / a.
struct AtomResponse {
    cplx t;   // value
    cplx dt;  // d/dw
    cplx d2t; // d^2/dw^2
};

cplx atom_term(const LocalAtom &atom, double v, double omega);
AtomResponse atom_response(const LocalAtom &atom, double v, double omega);

// Sums over atoms that fix R and its first two derivatives at w0, plus the
// two auxiliary families used only for diagnostics.
struct FamilySums {
    cplx t;    // sum t_l
    cplx dt;   // sum t_l'
    cplx d2t;  // sum t_l''
    cplx beta;
    cplx chi;

    FamilySums &operator+=(const FamilySums &o);
    FamilySums operator-(const FamilySums &o) const;
    FamilySums operator*(double s) const;
};

FamilySums atom_families(const LocalAtom &atom, double v, double omega0);

} // namespace rydgate
