#pragma once

#include "rydgate/quadrature.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>

namespace rydgate {

enum class PulseShape { gaussian, lorentzian, delta };

const char *to_string(PulseShape shape);
PulseShape parse_pulse_shape(const std::string &name);

// Normalized spectral density |phi(w)|^2 of an incoming photon.
// For a Lorentzian, `width` is the half-width at half maximum and the
// variance is infinite; only exact integration accepts it.
class PulseSpectrum {
public:
    static PulseSpectrum gaussian(double center, double sigma);
    static PulseSpectrum lorentzian(double center, double half_width);
    static PulseSpectrum delta(double center = 0);
    // dw = 1/T, used as the standard deviation (or half-width).
    static PulseSpectrum from_duration(PulseShape shape, double center, double duration_ns);

    PulseShape shape() const { return m_shape; }
    double center() const { return m_center; }
    double width() const { return m_width; }
    double variance() const;
    // sqrt(variance); throws for a Lorentzian.
    double bandwidth() const;

private:
    PulseSpectrum(PulseShape shape, double center, double width)
        : m_shape(shape), m_center(center), m_width(width) {}

    PulseShape m_shape;
    double m_center;
    double m_width;
};

double spectral_density(const PulseSpectrum &pulse, double omega);

using SpectralFunction = std::function<std::complex<double>(double)>;

// Integral of |phi(w)|^2 f(w) dw. Delta pulses return f(center).
std::complex<double> integrate_spectrum(const PulseSpectrum &pulse, const SpectralFunction &f,
                                        const quad::Options &opt = {});

double integrate_spectrum_real(const PulseSpectrum &pulse, const std::function<double(double)> &f,
                               const quad::Options &opt = {});

// Generic form for any integrand type the quadrature accepts.
template <class T, class F>
T integrate_spectrum_as(const PulseSpectrum &pulse, F &&f, const quad::Options &opt = {})
{
    const double c = pulse.center();
    const double w = pulse.width();
    switch (pulse.shape()) {
    case PulseShape::delta:
        return f(c);
    case PulseShape::gaussian: {
        constexpr double window = 8.0; // standard deviations on each side
        auto g = [&](double x) -> T { return f(x) * spectral_density(pulse, x); };
        auto r = quad::integrate_finite<T>(g, c - window * w, c + window * w, opt);
        return quad::require_converged(r, "gaussian spectrum integral");
    }
    case PulseShape::lorentzian: {
        // w = c + gamma tan(theta) turns the Lorentzian measure into dtheta / pi.
        auto g = [&](double theta) -> T { return f(c + w * std::tan(theta)) * std::numbers::inv_pi; };
        const double h = 0.5 * std::numbers::pi;
        auto r = quad::integrate_finite<T>(g, -h, h, opt);
        return quad::require_converged(r, "lorentzian spectrum integral");
    }
    }
    return T{};
}

} // namespace rydgate
