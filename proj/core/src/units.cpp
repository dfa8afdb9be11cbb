#include "rydgate/units.hpp"

#include "rydgate/error.hpp"

#include <cmath>
#include <string>

namespace rydgate {

const char *to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::domain: return "domain error";
    case ErrorKind::config: return "config error";
    case ErrorKind::numerical_failure: return "numerical failure";
    case ErrorKind::singular_input: return "singular input";
    case ErrorKind::undefined_conditional: return "undefined conditional";
    }
    return "error";
}

namespace units {

double bandwidth_from_duration_ns(double duration_ns)
{
    if (!(duration_ns > 0) || !std::isfinite(duration_ns)) {
        throw_domain("pulse duration must be positive and finite, got "
                     + std::to_string(duration_ns) + " ns");
    }
    return 1.0 / ns_to_us(duration_ns);
}

} // namespace units
} // namespace rydgate
