#pragma once

#include <span>
#include <string>
#include <vector>

#include "holdover/clock_model.hpp"
#include "holdover/error.hpp"

namespace holdover {

enum class OscClass { XO, TCXO, OCXO, CMOS };

const char* to_string(OscClass c);
OscClass osc_class_from_string(std::string_view text);

enum class TempModelKind {
    ConstantBound,  // single worst-case figure over the operating range
    Linear,         // slope * |x - x0|
    Parabolic,      // a * (x - x0)^2
};

/// Datasheet temperature behaviour plus the operating range the vendor
/// guarantees. Temperatures are degrees Celsius, coefficients are
/// dimensionless fractions per degree (or per degree squared).
struct TemperatureModel {
    TempModelKind kind = TempModelKind::ConstantBound;
    double y_temp = 0.0;        // ConstantBound figure
    double slope_per_c = 0.0;   // Linear
    double a_per_c2 = 0.0;      // Parabolic (sign as in the datasheet; bounds use |a|)
    double x0_c = 25.0;         // calibration temperature
    double x_min_c = 0.0;
    double x_max_c = 0.0;
};

/// Long-term aging figure at the datasheet horizon (typically one year).
/// Some vendors fold aging into the combined accuracy figure; those parts
/// set included_in_accuracy and contribute no separate aging term.
struct AgingSpec {
    double y_age_at_tdata = 0.0;
    double t_data_s = 0.0;
    bool included_in_accuracy = false;
};

/// Bounds that are usually negligible and default to zero: vibration
/// sensitivity times the worst expected acceleration, supply-variation,
/// residual frequency-calibration offset, and gravity.
struct MinorSources {
    double k_per_g = 0.0;   // fraction per g of acceleration
    double a_max_g = 0.0;   // worst expected acceleration
    double y_supp = 0.0;
    double y_calib = 0.0;
    double y_grav = 0.0;

    double sum() const { return k_per_g * a_max_g + y_supp + y_calib + y_grav; }
};

struct OscillatorSpec {
    std::string manufacturer;
    std::string model;
    OscClass osc_class = OscClass::TCXO;
    TemperatureModel temperature;
    AgingSpec aging;
    MinorSources minor;
    double f0_hz = 0.0;  // informational; 0 = unspecified
};

void validate(const OscillatorSpec& spec);

struct BoundBreakdown {
    double temperature_s = 0.0;
    double aging_s = 0.0;
    double minor_s = 0.0;
};

/// Verdict against one loose-sync threshold.
struct TlVerdict {
    double t_loose_s = 0.0;
    double t_r_max_s = 0.0;  // +infinity when every bound is zero
    bool suitable = false;
};

struct BoundResult {
    double bound_s = 0.0;     // worst-case |misalignment| over the holdover period
    double t_reset_s = 0.0;
    BoundBreakdown breakdown;
    std::vector<TlVerdict> verdicts;

    bool all_suitable() const
    {
        for (const auto& v : verdicts)
            if (!v.suitable) return false;
        return true;
    }
};

/// Magnitude of the worst-case accuracy loss at temperature x.
/// Out-of-range temperatures are an error naming the violated limit.
double temp_accuracy(const TemperatureModel& model, double x_c);

/// Worst case of temp_accuracy over the whole operating range. Both the
/// linear and the parabolic model are monotone in |x - x0|, so the maximum
/// sits on a range boundary.
double worst_case_temp_accuracy(const TemperatureModel& model);

/// Aging bound after `elapsed` seconds of free run: the datasheet figure up
/// to its horizon, growing linearly past it. Zero when the figure is
/// already folded into the combined accuracy.
double aging_bound(const AgingSpec& spec, double elapsed_s);

/// Acceleration-induced accuracy loss: sensitivity times acceleration.
double vibration_accuracy(double k_per_g, double accel_g);

/// Worst-case instantaneous accuracy after `elapsed` seconds: the sum of
/// every per-source bound.
double total_accuracy_bound(const OscillatorSpec& spec, double elapsed_s);

/// Worst-case misalignment accumulated over a holdover period t_reset,
/// with a per-source breakdown. The aging term integrates as a constant up
/// to the datasheet horizon and linearly beyond it.
BoundResult misalignment_bound(const OscillatorSpec& spec, double t_reset_s);

/// Longest holdover period whose misalignment bound stays within t_loose.
/// Closed form; +infinity when every bound is zero.
double max_reset_period(const OscillatorSpec& spec, double t_loose_s);

/// Bisection inverse of misalignment_bound over [lo, hi]; independent check
/// for the closed form.
double max_reset_period_bisect(const OscillatorSpec& spec, double t_loose_s,
                               double lo_s = 1.0, double hi_s = 100.0 * 31'536'000.0,
                               double rel_tol = 1e-12);

/// Bound at req.t_reset plus the suitability verdict against req.t_loose.
BoundResult suitability(const OscillatorSpec& spec, const SyncRequirement& req);

/// Bound at t_reset with one verdict per requested threshold.
BoundResult evaluate(const OscillatorSpec& spec, double t_reset_s,
                     std::span<const double> t_loose_s);

} // namespace holdover
