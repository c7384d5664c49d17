#include "holdover/error_budget.hpp"

#include <cmath>
#include <limits>

#include "holdover/units.hpp"

namespace holdover {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double require_positive(double v, const char* what)
{
    if (!(v > 0.0)) fail(Errc::invalid_argument, std::string(what) + " must be positive");
    return v;
}

} // namespace

const char* to_string(OscClass c)
{
    switch (c) {
    case OscClass::XO: return "xo";
    case OscClass::TCXO: return "tcxo";
    case OscClass::OCXO: return "ocxo";
    case OscClass::CMOS: break;
    }
    return "cmos";
}

OscClass osc_class_from_string(std::string_view text)
{
    if (text == "xo") return OscClass::XO;
    if (text == "tcxo") return OscClass::TCXO;
    if (text == "ocxo") return OscClass::OCXO;
    if (text == "cmos") return OscClass::CMOS;
    fail(Errc::parse, "unknown oscillator class '" + std::string(text) +
                          "' (expected xo, tcxo, ocxo or cmos)");
}

void validate(const OscillatorSpec& spec)
{
    const TemperatureModel& m = spec.temperature;
    if (!(m.x_min_c < m.x_max_c))
        fail(Errc::invalid_argument,
             "operating range is empty: x_min " + units::format_double(m.x_min_c) +
                 " C must be below x_max " + units::format_double(m.x_max_c) + " C");
    if (m.kind != TempModelKind::ConstantBound && (m.x0_c < m.x_min_c || m.x0_c > m.x_max_c))
        fail(Errc::invalid_argument,
             "calibration temperature " + units::format_double(m.x0_c) +
                 " C outside the operating range");
    if (m.kind == TempModelKind::ConstantBound && m.y_temp < 0.0)
        fail(Errc::invalid_argument, "constant temperature bound must be non-negative");
    if (m.kind == TempModelKind::Linear && m.slope_per_c < 0.0)
        fail(Errc::invalid_argument, "linear temperature slope must be non-negative");

    if (spec.aging.y_age_at_tdata < 0.0)
        fail(Errc::invalid_argument, "aging figure must be non-negative");
    if (spec.aging.y_age_at_tdata > 0.0 || !spec.aging.included_in_accuracy)
        if (!(spec.aging.t_data_s > 0.0))
            fail(Errc::invalid_argument, "aging horizon must be positive");

    if (spec.minor.k_per_g < 0.0 || spec.minor.a_max_g < 0.0 || spec.minor.y_supp < 0.0 ||
        spec.minor.y_calib < 0.0 || spec.minor.y_grav < 0.0)
        fail(Errc::invalid_argument, "minor-source bounds must be non-negative");
}

double temp_accuracy(const TemperatureModel& model, double x_c)
{
    if (x_c < model.x_min_c)
        fail(Errc::out_of_range,
             "temperature " + units::format_double(x_c) + " C below the operating minimum " +
                 units::format_double(model.x_min_c) + " C");
    if (x_c > model.x_max_c)
        fail(Errc::out_of_range,
             "temperature " + units::format_double(x_c) + " C above the operating maximum " +
                 units::format_double(model.x_max_c) + " C");

    switch (model.kind) {
    case TempModelKind::ConstantBound:
        return model.y_temp;
    case TempModelKind::Linear:
        return model.slope_per_c * std::fabs(x_c - model.x0_c);
    case TempModelKind::Parabolic:
        break;
    }
    double dx = x_c - model.x0_c;
    return std::fabs(model.a_per_c2) * dx * dx;
}

double worst_case_temp_accuracy(const TemperatureModel& model)
{
    if (model.kind == TempModelKind::ConstantBound) return model.y_temp;
    double at_min = temp_accuracy(model, model.x_min_c);
    double at_max = temp_accuracy(model, model.x_max_c);
    return at_min > at_max ? at_min : at_max;
}

double aging_bound(const AgingSpec& spec, double elapsed_s)
{
    if (elapsed_s < 0.0)
        fail(Errc::invalid_argument, "negative elapsed time for the aging bound");
    if (spec.included_in_accuracy) return 0.0;
    if (spec.y_age_at_tdata == 0.0) return 0.0;
    if (elapsed_s <= spec.t_data_s) return spec.y_age_at_tdata;
    return spec.y_age_at_tdata * (elapsed_s / spec.t_data_s);
}

double vibration_accuracy(double k_per_g, double accel_g)
{
    if (k_per_g < 0.0 || accel_g < 0.0)
        fail(Errc::invalid_argument, "vibration sensitivity and acceleration must be non-negative");
    return k_per_g * accel_g;
}

double total_accuracy_bound(const OscillatorSpec& spec, double elapsed_s)
{
    return worst_case_temp_accuracy(spec.temperature) + aging_bound(spec.aging, elapsed_s) +
           spec.minor.sum();
}

BoundResult misalignment_bound(const OscillatorSpec& spec, double t_reset_s)
{
    require_positive(t_reset_s, "holdover period");

    const double y_temp = worst_case_temp_accuracy(spec.temperature);
    const double y_age = spec.aging.included_in_accuracy ? 0.0 : spec.aging.y_age_at_tdata;
    const double t_data = spec.aging.t_data_s;

    BoundResult result;
    result.t_reset_s = t_reset_s;
    result.breakdown.temperature_s = y_temp * t_reset_s;
    result.breakdown.minor_s = spec.minor.sum() * t_reset_s;
    if (y_age == 0.0)
        result.breakdown.aging_s = 0.0;
    else if (t_reset_s <= t_data)
        result.breakdown.aging_s = y_age * t_reset_s;
    else
        result.breakdown.aging_s = 0.5 * y_age * (t_data + t_reset_s * t_reset_s / t_data);

    result.bound_s =
        result.breakdown.temperature_s + result.breakdown.aging_s + result.breakdown.minor_s;
    return result;
}

double max_reset_period(const OscillatorSpec& spec, double t_loose_s)
{
    require_positive(t_loose_s, "loose-sync threshold");

    // Temperature and the minor sources accrue at a constant rate; aging is
    // the only time-dependent term.
    const double const_rate = worst_case_temp_accuracy(spec.temperature) + spec.minor.sum();
    const double y_age = spec.aging.included_in_accuracy ? 0.0 : spec.aging.y_age_at_tdata;
    const double t_data = spec.aging.t_data_s;

    if (const_rate + y_age == 0.0) return kInf;

    double t_linear = t_loose_s / (const_rate + y_age);
    if (y_age == 0.0 || t_linear <= t_data) return t_linear;

    // Past the datasheet horizon the aging term integrates quadratically:
    //   (y_age / (2 t_data)) T^2 + const_rate T + (y_age t_data / 2 - t_loose) = 0.
    // Being on this branch guarantees t_loose > (const_rate + y_age) t_data,
    // so rhs below is positive and the root is real.
    const double a = y_age / (2.0 * t_data);
    const double rhs = t_loose_s - 0.5 * y_age * t_data;
    return 2.0 * rhs / (const_rate + std::sqrt(const_rate * const_rate + 4.0 * a * rhs));
}

double max_reset_period_bisect(const OscillatorSpec& spec, double t_loose_s, double lo_s,
                               double hi_s, double rel_tol)
{
    require_positive(t_loose_s, "loose-sync threshold");
    double b_lo = misalignment_bound(spec, lo_s).bound_s;
    double b_hi = misalignment_bound(spec, hi_s).bound_s;
    if (b_hi <= t_loose_s) return kInf;  // not bracketed; bound too flat for this range
    if (b_lo > t_loose_s)
        fail(Errc::invalid_argument, "bisection bracket does not contain the crossing");

    for (int i = 0; i < 200 && (hi_s - lo_s) > rel_tol * hi_s; ++i) {
        double mid = 0.5 * (lo_s + hi_s);
        if (misalignment_bound(spec, mid).bound_s <= t_loose_s)
            lo_s = mid;
        else
            hi_s = mid;
    }
    return 0.5 * (lo_s + hi_s);
}

BoundResult suitability(const OscillatorSpec& spec, const SyncRequirement& req)
{
    validate(req);
    double tl = req.t_loose_s;
    return evaluate(spec, req.t_reset_s, std::span<const double>(&tl, 1));
}

BoundResult evaluate(const OscillatorSpec& spec, double t_reset_s,
                     std::span<const double> t_loose_s)
{
    BoundResult result = misalignment_bound(spec, t_reset_s);
    result.verdicts.reserve(t_loose_s.size());
    for (double tl : t_loose_s) {
        TlVerdict v;
        v.t_loose_s = tl;
        v.t_r_max_s = max_reset_period(spec, tl);
        v.suitable = result.bound_s <= tl;
        result.verdicts.push_back(v);
    }
    return result;
}

} // namespace holdover
