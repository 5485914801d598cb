#pragma once

#include <cstdint>
#include <string_view>

namespace qcae
{

enum class ClockShape : std::uint8_t
{
    Ramp,
    Gaussian
};

enum class ClockPhase : std::uint8_t
{
    Switch,
    Hold,
    Release,
    Relax
};

std::string_view to_string(ClockShape shape);
std::string_view to_string(ClockPhase phase);
ClockShape parse_clock_shape(std::string_view text);

/// Four-phase clock. Zone 0 starts at t = 0 with its relax plateau, followed
/// by the falling slope (switch), low plateau (hold) and rising slope
/// (release). Zone k lags zone 0 by k·cycle_time/4.
struct ClockConfig
{
    double gamma_high = 9.8e-22;  // J
    double gamma_low = 3.8e-23;  // J
    double slope_time = 100e-12;  // s
    double plateau_time = 100e-12;  // s
    ClockShape shape = ClockShape::Gaussian;
    static constexpr int n_zones = 4;

    [[nodiscard]] double cycle_time() const noexcept { return 2.0 * slope_time + 2.0 * plateau_time; }
    [[nodiscard]] double zone_delay(int zone) const noexcept { return zone * cycle_time() / n_zones; }

    void validate() const;
};

/// Tunnelling energy γ of `zone` at time t ≥ 0.
double gamma_at(const ClockConfig& config, int zone, double t);

ClockPhase phase_at(const ClockConfig& config, int zone, double t);

/// Start of `phase` for `zone` within clock cycle `cycle` (t = cycle·T + offset).
double phase_start(const ClockConfig& config, int zone, ClockPhase phase, long cycle);

}  // namespace qcae
