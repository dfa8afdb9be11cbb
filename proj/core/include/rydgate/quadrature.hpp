#pragma once

#include "rydgate/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <string>
#include <vector>

// Adaptive Gauss-Kronrod (7/15 point) integration for real and complex
// integrands. Global subdivision: the interval with the largest error
// estimate is bisected until the total estimate meets the tolerance.
namespace rydgate::quad {

struct Options {
    double rel_tol = 1e-8;
    double abs_tol = 1e-14;
    int max_intervals = 4000;
};

// Fixed-size real vector integrand; several integrals share one node set.
template <std::size_t N>
struct Vec {
    std::array<double, N> v{};

    double &operator[](std::size_t i) { return v[i]; }
    double operator[](std::size_t i) const { return v[i]; }
    Vec &operator+=(const Vec &o)
    {
        for (std::size_t i = 0; i < N; ++i) v[i] += o.v[i];
        return *this;
    }
    friend Vec operator+(Vec a, const Vec &b) { return a += b; }
    friend Vec operator-(Vec a, const Vec &b)
    {
        for (std::size_t i = 0; i < N; ++i) a.v[i] -= b.v[i];
        return a;
    }
    friend Vec operator*(Vec a, double s)
    {
        for (double &x : a.v) x *= s;
        return a;
    }
};

template <class T>
struct Result {
    T value{};
    double error = 0;
    int intervals = 0;
    bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> xk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
inline constexpr std::array<double, 8> wk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
// Gauss weights for the odd Kronrod nodes xk[1], xk[3], xk[5], xk[7].
inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(std::complex<double> z) { return std::abs(z); }

template <std::size_t N>
double magnitude(const Vec<N> &x)
{
    double m = 0;
    for (double c : x.v) m = std::max(m, std::abs(c));
    return m;
}

inline bool all_finite(double x) { return std::isfinite(x); }
template <std::size_t N>
bool all_finite(const Vec<N> &x)
{
    for (double c : x.v) {
        if (!std::isfinite(c)) return false;
    }
    return true;
}
inline bool all_finite(std::complex<double> z)
{
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

template <class T>
struct Segment {
    double a, b;
    T value;
    double error;
    bool operator<(const Segment &o) const { return error < o.error; }
};

template <class T, class F>
Segment<T> gk15(F &f, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T fc = f(c);
    T kron = fc * wk[7];
    T gauss = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xk[j];
        T f1 = f(c - dx);
        T f2 = f(c + dx);
        kron += (f1 + f2) * wk[j];
        if (j % 2 == 1) {
            gauss += (f1 + f2) * wg[j / 2];
        }
    }
    T value = kron * h;
    double err = magnitude((kron - gauss) * h);
    if (!all_finite(value)) {
        err = std::numeric_limits<double>::infinity();
    }
    return {a, b, value, err};
}

} // namespace detail

// Integral of f over the finite interval [a, b]; never throws.
template <class T, class F>
Result<T> integrate_finite(F &&f, double a, double b, const Options &opt = {})
{
    using Seg = detail::Segment<T>;
    std::priority_queue<Seg> heap;
    Seg first = detail::gk15<T>(f, a, b);
    T total = first.value;
    double err = first.error;
    heap.push(first);
    int count = 1;
    while (count < opt.max_intervals) {
        const double tol = std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(total));
        if (err <= tol) {
            break;
        }
        Seg worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push(worst);
            break; // interval no longer divisible in double precision
        }
        Seg left = detail::gk15<T>(f, worst.a, mid);
        Seg right = detail::gk15<T>(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++count;
    }
    // Re-add from scratch to shed accumulated rounding in the running sums.
    T sum{};
    double esum = 0;
    while (!heap.empty()) {
        sum += heap.top().value;
        esum += heap.top().error;
        heap.pop();
    }
    Result<T> r;
    r.value = sum;
    r.error = esum;
    r.intervals = count;
    r.converged = detail::all_finite(sum)
                  && esum <= std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(sum));
    return r;
}

// Integral over [a, inf) via x = a + s/(1-s), s in [0, 1).
template <class T, class F>
Result<T> integrate_upper(F &&f, double a, const Options &opt = {})
{
    auto g = [&f, a](double s) -> T {
        const double one_minus = 1.0 - s;
        const double x = a + s / one_minus;
        return f(x) * (1.0 / (one_minus * one_minus));
    };
    return integrate_finite<T>(g, 0.0, 1.0, opt);
}

template <class T>
T require_converged(const Result<T> &r, const char *what)
{
    if (!r.converged) {
        throw NumericalFailure(std::string(what) + ": quadrature did not converge (estimated error "
                                   + std::to_string(r.error) + " after " + std::to_string(r.intervals)
                                   + " intervals)",
                               r.error);
    }
    return r.value;
}

} // namespace rydgate::quad
