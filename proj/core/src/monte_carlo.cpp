#include "rydgate/blockade.hpp"

#include "rydgate/error.hpp"
#include "rydgate/quadrature.hpp"
#include "rydgate/rng.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

namespace rydgate {

namespace {

constexpr double pi = std::numbers::pi;
constexpr std::size_t n_blocks = 64; // fixed reduction partition

// t(V) - t(0) at resonance-free general detunings, written out to keep the
// pair loop free of library complex division.
struct PairKernel {
    double scale, ar, ai, cr, ci0, w;
    cplx t0;

    PairKernel(const LocalAtom &atom, double omega)
    {
        scale = atom.coop * atom.gamma_e;
        ar = atom.gamma_e;
        ai = -atom.delta - omega;
        cr = atom.gamma_r;
        ci0 = atom.delta_two - omega;
        w = atom.half_drive_sq;
        t0 = atom_term(atom, 0.0, omega);
    }

    cplx operator()(double v) const
    {
        const double ci = ci0 + v;
        const double qr = ar * cr - ai * ci + w;
        const double qi = ar * ci + ai * cr;
        const double inv = scale / (qr * qr + qi * qi);
        return cplx((cr * qr + ci * qi) * inv, (ci * qr - cr * qi) * inv) - t0;
    }
};

double cube_side(double density, std::size_t n)
{
    return std::cbrt(static_cast<double>(n) / density);
}

unsigned resolve_threads(unsigned requested)
{
    if (requested == 0) {
        requested = std::max(1u, std::thread::hardware_concurrency());
    }
    return requested;
}

// Runs body(block) for block = 0..n_blocks-1 and returns the partial sums
// added in block order.
template <class Body>
std::pair<cplx, std::size_t> reduce_blocks(unsigned threads, Body body)
{
    std::vector<cplx> partial(n_blocks);
    std::vector<std::size_t> counts(n_blocks, 0);
    std::vector<std::exception_ptr> failures(n_blocks);
    auto worker = [&](unsigned tid) {
        for (std::size_t b = tid; b < n_blocks; b += threads) {
            try {
                auto [s, c] = body(b);
                partial[b] = s;
                counts[b] = c;
            } catch (...) {
                failures[b] = std::current_exception();
            }
        }
    };
    threads = std::min<unsigned>(threads, n_blocks);
    if (threads <= 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker, t);
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    for (const auto &f : failures) {
        if (f) {
            std::rethrow_exception(f);
        }
    }
    cplx sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        sum += partial[b];
        pairs += counts[b];
    }
    return {sum, pairs};
}

cplx continuum_tail(const PairKernel &kernel, double c6, double density, double r_cut)
{
    if (density == 0) {
        return 0.0;
    }
    auto f = [&](double r) -> cplx {
        const double r2 = r * r;
        return 4.0 * pi * r2 * kernel(c6 / (r2 * r2 * r2));
    };
    quad::Options opt;
    opt.rel_tol = 1e-11;
    opt.abs_tol = 1e-15;
    return density * quad::require_converged(quad::integrate_upper<cplx>(f, r_cut, opt),
                                             "Monte-Carlo tail integral");
}

MonteCarloResult periodic_estimate(const AtomCavityParams &params, const EnsembleModel &ens,
                                   const MonteCarloOptions &opt)
{
    const std::size_t n = opt.n_samples;
    const double side = cube_side(ens.density, n);
    const double rb = blockade_radius(params, ens);
    const double r_cut = std::min(opt.cutoff_radii * rb, 0.5 * side);
    const double rc2 = r_cut * r_cut;
    const double half = 0.5 * side;
    const PairKernel kernel(local_atom(params, PerAtomOverrides{}, 0), 0.0);

    const std::vector<Vec3> pos = sample_positions(ens, n, opt.seed);

    auto wrap = [side, half](double d) {
        if (d > half) return d - side;
        if (d < -half) return d + side;
        return d;
    };
    auto pair_term = [&](const Vec3 &a, const Vec3 &b, cplx &acc, std::size_t &count) {
        const double dx = wrap(a.x - b.x), dy = wrap(a.y - b.y), dz = wrap(a.z - b.z);
        const double r2 = dx * dx + dy * dy + dz * dz;
        if (r2 < rc2) {
            if (r2 == 0) {
                throw Error(ErrorKind::singular_input, "coincident Monte-Carlo samples");
            }
            acc += kernel(ens.c6 / (r2 * r2 * r2));
            ++count;
        }
    };

    const unsigned threads = resolve_threads(opt.threads);
    // Cells of side >= r_cut / reach; the (2 reach + 1)^3 stencil must not
    // wrap onto itself.
    int reach = 2;
    int m = static_cast<int>(std::floor(reach * side / r_cut));
    if (m < 2 * reach + 1) {
        reach = 1;
        m = static_cast<int>(std::floor(side / r_cut));
    }
    std::pair<cplx, std::size_t> total;

    if (m < 2 * reach + 1) {
        // Too few cells for a distinct stencil: all pairs.
        total = reduce_blocks(threads, [&](std::size_t b) {
            cplx acc = 0.0;
            std::size_t count = 0;
            for (std::size_t i = b; i < n; i += n_blocks) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    pair_term(pos[i], pos[j], acc, count);
                }
            }
            return std::pair<cplx, std::size_t>{acc, count};
        });
    } else {
        const double cell = side / m;
        const std::size_t n_cells = static_cast<std::size_t>(m) * m * m;
        auto coord = [&](double x) { return std::min(m - 1, static_cast<int>(x / cell)); };
        auto cell_of = [&](const Vec3 &p) {
            return (static_cast<std::size_t>(coord(p.x)) * m + coord(p.y)) * m + coord(p.z);
        };
        std::vector<std::size_t> start(n_cells + 1, 0);
        for (const Vec3 &p : pos) {
            ++start[cell_of(p) + 1];
        }
        for (std::size_t c = 0; c < n_cells; ++c) {
            start[c + 1] += start[c];
        }
        std::vector<Vec3> sorted(n);
        {
            std::vector<std::size_t> fill(start.begin(), start.end() - 1);
            for (const Vec3 &p : pos) {
                sorted[fill[cell_of(p)]++] = p;
            }
        }
        total = reduce_blocks(threads, [&](std::size_t b) {
            cplx acc = 0.0;
            std::size_t count = 0;
            for (std::size_t c = b; c < n_cells; c += n_blocks) {
                const int cx = static_cast<int>(c / (m * m));
                const int cy = static_cast<int>((c / m) % m);
                const int cz = static_cast<int>(c % m);
                for (int ox = -reach; ox <= reach; ++ox) {
                    for (int oy = -reach; oy <= reach; ++oy) {
                        for (int oz = -reach; oz <= reach; ++oz) {
                            const std::size_t nb =
                                (static_cast<std::size_t>((cx + ox + m) % m) * m + (cy + oy + m) % m) * m
                                + (cz + oz + m) % m;
                            if (start[nb + 1] <= start[c] + 1) {
                                continue; // every j would precede i
                            }
                            for (std::size_t i = start[c]; i < start[c + 1]; ++i) {
                                for (std::size_t j = std::max(start[nb], i + 1); j < start[nb + 1]; ++j) {
                                    pair_term(sorted[i], sorted[j], acc, count);
                                }
                            }
                        }
                    }
                }
            }
            return std::pair<cplx, std::size_t>{acc, count};
        });
    }

    MonteCarloResult out;
    out.n_samples = n;
    out.cutoff = r_cut;
    out.pairs = total.second;
    out.partner_density = static_cast<double>(n - 1) / (side * side * side);
    const cplx inside = 2.0 * total.first / static_cast<double>(n);
    const cplx tail = continuum_tail(kernel, ens.c6, out.partner_density, r_cut);
    out.c_star_v = inside + tail + static_cast<double>(params.n_atoms - 1) * kernel.t0;
    return out;
}

MonteCarloResult centered_estimate(const AtomCavityParams &params, const EnsembleModel &ens,
                                   const MonteCarloOptions &opt)
{
    const std::size_t n = opt.n_samples;
    const PairKernel kernel(local_atom(params, PerAtomOverrides{}, 0), 0.0);
    const std::vector<Vec3> pos = sample_positions(ens, n, opt.seed);
    Vec3 center{};

    const unsigned threads = resolve_threads(opt.threads);
    auto total = reduce_blocks(threads, [&](std::size_t b) {
        cplx acc = 0.0;
        std::size_t count = 0;
        for (std::size_t i = b; i < n; i += n_blocks) {
            const double dx = pos[i].x - center.x, dy = pos[i].y - center.y, dz = pos[i].z - center.z;
            const double r2 = dx * dx + dy * dy + dz * dz;
            if (r2 == 0) {
                throw Error(ErrorKind::singular_input, "sample coincides with the stored atom");
            }
            acc += kernel(ens.c6 / (r2 * r2 * r2));
            ++count;
        }
        return std::pair<cplx, std::size_t>{acc, count};
    });

    double volume = 0;
    if (ens.geometry == Geometry::sphere) {
        volume = 4.0 / 3.0 * pi * std::pow(ens.sphere_radius, 3);
    } else {
        volume = ens.box_lengths[0] * ens.box_lengths[1] * ens.box_lengths[2];
    }
    MonteCarloResult out;
    out.n_samples = n;
    out.pairs = total.second;
    out.partner_density = static_cast<double>(n) / volume;
    out.c_star_v = total.first + static_cast<double>(params.n_atoms - 1) * kernel.t0;
    return out;
}

} // namespace

std::vector<Vec3> sample_positions(const EnsembleModel &ens, std::size_t n, std::uint64_t seed)
{
    std::vector<Vec3> pos(n);
    auto u = [seed](std::size_t i, int axis) {
        return counter_uniform(seed, 3 * static_cast<std::uint64_t>(i) + axis);
    };
    switch (ens.geometry) {
    case Geometry::infinite_uniform: {
        if (!(ens.density > 0)) {
            throw_domain("periodic sampling needs a positive density");
        }
        const double side = cube_side(ens.density, n);
        for (std::size_t i = 0; i < n; ++i) {
            pos[i] = {side * u(i, 0), side * u(i, 1), side * u(i, 2)};
        }
        break;
    }
    case Geometry::sphere: {
        const double radius = ens.sphere_radius;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = radius * std::cbrt(u(i, 0));
            const double ct = 2.0 * u(i, 1) - 1.0;
            const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
            const double phi = 2.0 * pi * u(i, 2);
            pos[i] = {r * st * std::cos(phi), r * st * std::sin(phi), r * ct};
        }
        break;
    }
    case Geometry::box: {
        const auto &l = ens.box_lengths;
        for (std::size_t i = 0; i < n; ++i) {
            pos[i] = {l[0] * (u(i, 0) - 0.5), l[1] * (u(i, 1) - 0.5), l[2] * (u(i, 2) - 0.5)};
        }
        break;
    }
    }
    return pos;
}

MonteCarloResult monte_carlo_cooperativity(const AtomCavityParams &params,
                                           const EnsembleModel &ens,
                                           const MonteCarloOptions &opt)
{
    params.validate();
    ens.validate();
    if (opt.n_samples < 2) {
        throw_domain("Monte Carlo needs at least two samples");
    }
    if (!(opt.cutoff_radii > 0)) {
        throw_domain("Monte-Carlo cutoff must be positive");
    }
    MonteCarloResult r = ens.geometry == Geometry::infinite_uniform
                             ? periodic_estimate(params, ens, opt)
                             : centered_estimate(params, ens, opt);
    r.c_b = r.c_star_v.real();
    r.c_b_prime_abs = std::abs(r.c_star_v.imag());
    return r;
}

} // namespace rydgate
