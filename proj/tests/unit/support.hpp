#pragma once

#include "oracles.hpp"

#include "rydgate/blockade.hpp"
#include "rydgate/error.hpp"
#include "rydgate/params.hpp"

#include <cmath>
#include <complex>
#include <random>

namespace testing {

inline rydgate::AtomCavityParams to_params(const oracle::Cavity &c)
{
    rydgate::AtomCavityParams p;
    p.kappa = c.kappa;
    p.gamma_e = c.gamma_e;
    p.gamma_r = c.gamma_r;
    p.omega_drive = c.rabi;
    p.coop_single = c.coop;
    p.n_atoms = static_cast<std::size_t>(c.n_atoms);
    p.delta = c.delta;
    p.delta_two = c.delta_two;
    return p;
}

inline rydgate::EnsembleModel to_ensemble(const oracle::Cavity &c)
{
    return rydgate::EnsembleModel::uniform(c.density, c.c6);
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
inline double rel(std::complex<double> a, std::complex<double> b) { return std::abs(a - b) / std::abs(b); }

template <class F>
rydgate::ErrorKind kind_of(F &&f)
{
    try {
        f();
    } catch (const rydgate::Error &e) {
        return e.kind();
    }
    throw std::runtime_error("expected a rydgate::Error");
}

// Log-uniform draw in [lo, hi].
inline double log_uniform(std::mt19937_64 &g, double lo, double hi)
{
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(g));
}

} // namespace testing
