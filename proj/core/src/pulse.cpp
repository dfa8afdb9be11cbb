#include "rydgate/pulse.hpp"

#include "rydgate/error.hpp"
#include "rydgate/units.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace rydgate {

namespace {

void check_width(double width, const char *what)
{
    if (!(width > 0) || !std::isfinite(width)) {
        throw_domain(std::string(what) + " must be positive and finite");
    }
}

} // namespace

const char *to_string(PulseShape shape)
{
    switch (shape) {
    case PulseShape::gaussian: return "gaussian";
    case PulseShape::lorentzian: return "lorentzian";
    case PulseShape::delta: return "delta";
    }
    return "?";
}

PulseShape parse_pulse_shape(const std::string &name)
{
    if (name == "gaussian") return PulseShape::gaussian;
    if (name == "lorentzian") return PulseShape::lorentzian;
    if (name == "delta") return PulseShape::delta;
    throw Error(ErrorKind::config, "unknown pulse shape '" + name + "'");
}

PulseSpectrum PulseSpectrum::gaussian(double center, double sigma)
{
    check_width(sigma, "gaussian standard deviation");
    return PulseSpectrum(PulseShape::gaussian, center, sigma);
}

PulseSpectrum PulseSpectrum::lorentzian(double center, double half_width)
{
    check_width(half_width, "lorentzian half-width");
    return PulseSpectrum(PulseShape::lorentzian, center, half_width);
}

PulseSpectrum PulseSpectrum::delta(double center)
{
    return PulseSpectrum(PulseShape::delta, center, 0.0);
}

PulseSpectrum PulseSpectrum::from_duration(PulseShape shape, double center, double duration_ns)
{
    if (shape == PulseShape::delta) {
        return delta(center);
    }
    const double dw = units::bandwidth_from_duration_ns(duration_ns);
    return shape == PulseShape::gaussian ? gaussian(center, dw) : lorentzian(center, dw);
}

double PulseSpectrum::variance() const
{
    switch (m_shape) {
    case PulseShape::delta: return 0.0;
    case PulseShape::gaussian: return m_width * m_width;
    case PulseShape::lorentzian: return std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

double PulseSpectrum::bandwidth() const
{
    if (m_shape == PulseShape::lorentzian) {
        throw_domain("lorentzian pulse has no finite variance");
    }
    return m_width;
}

double spectral_density(const PulseSpectrum &pulse, double omega)
{
    const double x = omega - pulse.center();
    const double w = pulse.width();
    switch (pulse.shape()) {
    case PulseShape::gaussian:
        return std::exp(-0.5 * (x / w) * (x / w)) / (w * std::sqrt(2.0 * std::numbers::pi));
    case PulseShape::lorentzian:
        return w / (std::numbers::pi * (x * x + w * w));
    case PulseShape::delta:
        break;
    }
    throw_domain("delta pulse has no pointwise spectral density");
}

std::complex<double> integrate_spectrum(const PulseSpectrum &pulse, const SpectralFunction &f,
                                        const quad::Options &opt)
{
    return integrate_spectrum_as<std::complex<double>>(pulse, f, opt);
}

double integrate_spectrum_real(const PulseSpectrum &pulse, const std::function<double(double)> &f,
                               const quad::Options &opt)
{
    return integrate_spectrum_as<double>(pulse, f, opt);
}

} // namespace rydgate
