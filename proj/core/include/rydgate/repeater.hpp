#pragma once

#include "rydgate/params.hpp"

#include <cstddef>
#include <vector>

namespace rydgate {

enum class SourceModel { probabilistic_raman, perfect_single_excitation };
enum class SwapModel { linear_optics, rydberg };

const char *to_string(SourceModel m);
const char *to_string(SwapModel m);

// Gate used for the swap when SwapModel::rydberg; bandwidth is dw in rad/us.
struct RydbergSwap {
    double c_b = 25;
    double c_b_prime = 25;
    double bandwidth = 0;
    AtomCavityParams params = reference_params();
};

struct RepeaterConfig {
    double total_distance = 1000;    // km
    double attenuation_length = 22;  // km
    double signal_speed = 2e5;       // km/s
    std::size_t n_stations = 33;     // largest station count; links = n_stations - 1
    double source_rate = 1e8;        // Hz
    double eta_readout = 0.9;
    double eta_detector = 0.9;
    SourceModel source_model = SourceModel::perfect_single_excitation;
    SwapModel swap_model = SwapModel::rydberg;
    RydbergSwap rydberg;

    double c_dx = 1.0;              // double-excitation coefficient, w0 = 1 - c_dx p
    double recursion_factor = 1.5;  // waiting-time factor per nesting level
    double p_source = 0;            // > 0 fixes the Raman excitation probability; 0 optimizes
    bool linear_needs_readout = false; // multiply linear-optics swaps by eta_readout^2

    std::size_t max_levels() const; // log2(n_stations - 1)
    void validate() const;
};

struct RateResult {
    double r_secret_per_station = 0; // Hz
    double qber = 0.5;
    double werner_parameter = 0;
    std::size_t swap_levels_used = 0;
    double mean_total_time = 0; // s
    double secret_fraction = 0;
    double p_source = 0;
    std::size_t stations_used = 0;
    bool infinite_time = false;
};

double swap_success_probability(const RepeaterConfig &cfg);

// Depolarizing parameter of one swap operation.
double gate_werner(const RepeaterConfig &cfg);
double swap_fidelity_propagation(double w_left, double w_right, const RepeaterConfig &cfg);

// Werner parameter of an elementary pair.
double double_excitation_error(const RepeaterConfig &cfg, double p_source);

struct LinkTimes {
    double p0 = 0;          // elementary heralding probability
    double period = 0;      // s between attempts
    std::vector<double> t;  // t[i]: mean time for a pair spanning 2^i links
    bool infinite = false;
};

LinkTimes mean_link_time(const RepeaterConfig &cfg, std::size_t levels, double p_source);

double binary_entropy(double q);
double secret_fraction(double qber);

// Rate with a fixed nesting depth and source probability.
RateResult rate_at_levels(const RepeaterConfig &cfg, std::size_t levels, double p_source);

// Best depth in [0, max_levels()] (and best Raman probability per depth).
RateResult secret_key_rate(const RepeaterConfig &cfg);

} // namespace rydgate
