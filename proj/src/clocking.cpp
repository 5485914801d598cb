#include "qcae/clocking.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qcae
{

namespace
{

// Fraction of the transition completed at normalised slope position x ∈ [0, 1].
double transition(ClockShape shape, double x)
{
    if (shape == ClockShape::Ramp)
    {
        return x;
    }
    // error-function profile truncated at ±3σ, σ = slope/6, rescaled to [0, 1]
    static const double edge = std::erf(3.0 / std::numbers::sqrt2);
    return 0.5 + std::erf((x - 0.5) * 6.0 / std::numbers::sqrt2) / (2.0 * edge);
}

// Time since the start of the zone's current cycle, in [0, T).
double local_time(const ClockConfig& c, int zone, double t)
{
    const double period = c.cycle_time();
    double u = t - c.zone_delay(zone);
    u -= std::floor(u / period) * period;
    if (u >= period)
    {
        u -= period;
    }
    return u < 0.0 ? 0.0 : u;
}

}  // namespace

std::string_view to_string(ClockShape shape)
{
    return shape == ClockShape::Ramp ? "ramp" : "gaussian";
}

std::string_view to_string(ClockPhase phase)
{
    switch (phase)
    {
        case ClockPhase::Switch: return "switch";
        case ClockPhase::Hold: return "hold";
        case ClockPhase::Release: return "release";
        case ClockPhase::Relax: return "relax";
    }
    return "relax";
}

ClockShape parse_clock_shape(std::string_view text)
{
    if (text == "ramp" || text == "RAMP")
    {
        return ClockShape::Ramp;
    }
    if (text == "gaussian" || text == "GAUSSIAN")
    {
        return ClockShape::Gaussian;
    }
    throw std::invalid_argument("unknown clock shape '" + std::string(text) + "' (expected ramp|gaussian)");
}

void ClockConfig::validate() const
{
    if (!(slope_time > 0.0))
    {
        throw std::invalid_argument("clock slope time must be positive");
    }
    if (!(plateau_time >= 0.0))
    {
        throw std::invalid_argument("clock plateau time must be non-negative");
    }
    if (!(gamma_high > gamma_low) || !(gamma_low > 0.0))
    {
        throw std::invalid_argument("clock requires gamma_high > gamma_low > 0");
    }
}

double gamma_at(const ClockConfig& c, int zone, double t)
{
    const double u = local_time(c, zone, t);
    const double p = c.plateau_time;
    const double s = c.slope_time;
    const double swing = c.gamma_high - c.gamma_low;
    if (u < p)
    {
        return c.gamma_high;
    }
    if (u < p + s)
    {
        return c.gamma_high - swing * transition(c.shape, (u - p) / s);
    }
    if (u < 2.0 * p + s)
    {
        return c.gamma_low;
    }
    return c.gamma_low + swing * transition(c.shape, std::min(1.0, (u - 2.0 * p - s) / s));
}

ClockPhase phase_at(const ClockConfig& c, int zone, double t)
{
    const double u = local_time(c, zone, t);
    const double p = c.plateau_time;
    const double s = c.slope_time;
    if (u < p)
    {
        return ClockPhase::Relax;
    }
    if (u < p + s)
    {
        return ClockPhase::Switch;
    }
    if (u < 2.0 * p + s)
    {
        return ClockPhase::Hold;
    }
    return ClockPhase::Release;
}

double phase_start(const ClockConfig& c, int zone, ClockPhase phase, long cycle)
{
    const double p = c.plateau_time;
    const double s = c.slope_time;
    double offset = 0.0;
    switch (phase)
    {
        case ClockPhase::Relax: offset = 0.0; break;
        case ClockPhase::Switch: offset = p; break;
        case ClockPhase::Hold: offset = p + s; break;
        case ClockPhase::Release: offset = 2.0 * p + s; break;
    }
    return static_cast<double>(cycle) * c.cycle_time() + c.zone_delay(zone) + offset;
}

}  // namespace qcae
