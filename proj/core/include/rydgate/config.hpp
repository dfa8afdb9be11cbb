#pragma once

#include "rydgate/blockade.hpp"
#include "rydgate/params.hpp"
#include "rydgate/pulse.hpp"
#include "rydgate/units.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace rydgate {

// Parameters read from a "key = value" file. Frequencies are given in units
// of (2 pi) MHz and converted once here; the stored values are rad/us.
struct ModelConfig {
    AtomCavityParams params = reference_params();
    PulseShape pulse_shape = PulseShape::gaussian;
    double pulse_duration_ns = 300;
    double omega0 = 0;                     // rad/us
    double density = 0.25;                 // um^-3
    double c6 = units::from_2pi_mhz(8.31e6); // rad/us um^6
    std::uint64_t seed = 1;

    PulseSpectrum pulse() const;
    EnsembleModel ensemble() const;

    // Resolved values in input units, in a fixed key order.
    std::vector<std::pair<std::string, std::string>> resolved() const;
};

// Applies assignments on top of `base`. Unknown keys, malformed lines and
// bad values raise ErrorKind::config naming the line.
ModelConfig parse_config(std::istream &in, const std::string &source = "<stream>",
                         ModelConfig base = {});
ModelConfig load_config(const std::string &path, ModelConfig base = {});

// Keys accepted by parse_config.
const std::vector<std::string> &config_keys();

} // namespace rydgate
