#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "holdover/clock_model.hpp"
#include "holdover/error_budget.hpp"

namespace holdover {

// ---------------------------------------------------------------------------
// Temperature profiles. All are total functions of elapsed time; the ramp
// holds its end temperature once finished, the periodic ones repeat forever.

struct ConstantTemp {
    double x_c = 25.0;
};

struct RampTemp {
    double start_c = 25.0;
    double end_c = 25.0;
    double duration_s = 1.0;
};

struct DiurnalTemp {
    double mean_c = 25.0;
    double amplitude_c = 0.0;
    double period_s = 86'400.0;
};

/// Hot/cold dwell cycling, high phase first.
struct CyclingTemp {
    double high_c = 60.0;
    double low_c = -40.0;
    double dwell_s = 43'200.0;
};

class TemperatureProfile {
public:
    using Variant = std::variant<ConstantTemp, RampTemp, DiurnalTemp, CyclingTemp>;

    TemperatureProfile() : v_(ConstantTemp{}) {}
    TemperatureProfile(Variant v);  // validates period/dwell/duration > 0

    double at(double t_s) const;
    double min_c() const;
    double max_c() const;
    /// First instant the profile reaches its extreme; used in range errors.
    double first_time_at(double x_c) const;
    std::string describe() const;
    const Variant& variant() const { return v_; }

private:
    Variant v_;
};

// ---------------------------------------------------------------------------
// Aging fits: smooth models of the cumulative aging loss, kept at or under
// the piecewise prudential bound and anchored to the datasheet figure.

class AgingFit {
public:
    enum class Kind { Linear, Logarithmic };

    static AgingFit linear(double rate_per_s, double offset);
    static AgingFit logarithmic(double scale, double knee_rate_per_s);

    /// rate * t with rate = figure / horizon: equals the datasheet figure at
    /// the horizon and tracks the prudential bound beyond it.
    static AgingFit anchored_linear(const AgingSpec& spec);

    /// scale * ln(k t + 1) anchored to the datasheet figure at the horizon,
    /// with k chosen so the curve reaches half the figure at `half_time_s`.
    static AgingFit anchored_log(const AgingSpec& spec, double half_time_s = 30.0 * 86'400.0);

    double at(double t_s) const;
    Kind kind() const { return kind_; }

private:
    AgingFit() = default;
    Kind kind_ = Kind::Linear;
    double rate_per_s_ = 0.0;
    double offset_ = 0.0;
    double scale_ = 0.0;
    double knee_rate_per_s_ = 0.0;
};

struct FitComparisonRow {
    double t_s;
    double y_linear;
    double y_log;
    double bound;
};

/// Sampled linear fit, log fit and prudential bound over [0, horizon].
/// A fit crossing above the bound is a validation error naming the first
/// crossing time.
std::vector<FitComparisonRow> aging_fit_compare(const AgingSpec& spec, const AgingFit& fit_linear,
                                                const AgingFit& fit_log, double horizon_s,
                                                double step_s);

std::string fit_compare_csv(const std::vector<FitComparisonRow>& rows);

// ---------------------------------------------------------------------------
// Scenario configuration.

enum class PowerMode { HighPower, PowerLimited };
enum class AccuracyMode {
    Modeled,  // temperature model / seeded residual plus the aging fit
    AtBound,  // accuracy pinned at the worst-case bound at every instant
};

class DutySchedule {
public:
    static DutySchedule always_on();
    static DutySchedule always_off();
    static DutySchedule intervals(std::vector<std::pair<double, double>> on_intervals_s);

    bool is_on(double t_s) const;
    bool never_on() const;
    std::string describe() const;

private:
    enum class Kind { AlwaysOn, AlwaysOff, Intervals };
    Kind kind_ = Kind::AlwaysOn;
    std::vector<std::pair<double, double>> on_;  // sorted, non-overlapping, [start, end)
};

struct ScenarioConfig {
    PowerMode mode = PowerMode::HighPower;
    OscillatorSpec primary;
    std::optional<OscillatorSpec> secondary;  // required (and only allowed) when power limited
    DutySchedule duty = DutySchedule::always_on();
    TemperatureProfile profile;
    AgingFit::Kind fit_kind = AgingFit::Kind::Logarithmic;
    AccuracyMode accuracy = AccuracyMode::Modeled;
    SyncRequirement req{std::numeric_limits<double>::infinity(),
                        std::numeric_limits<double>::infinity()};
    double sample_step_s = 0.0;
    std::uint64_t seed = 0;
    double temp_block_s = 3600.0;  // hold time of the seeded temperature residual
    bool aging_restart_on_reset = false;
};

struct TrajectorySample {
    double t_s;
    double y;
    double delta_t_s;
    bool secondary_active;
    bool violating;
};

struct ViolationInterval {
    double first_s;
    double last_s;
};

struct ClockTrajectory {
    std::vector<TrajectorySample> samples;
    std::vector<ViolationInterval> violations;
    std::vector<double> reset_times_s;
    double t_loose_s = 0.0;
    double sample_step_s = 0.0;
    double duration_s = 0.0;
};

/// Instantaneous modeled accuracy of one free-running clock: the signed
/// temperature term (analytic model, or a seeded residual held over fixed
/// blocks when only a constant bound is known), the aging fit, and the
/// residual calibration offset.
double instantaneous_accuracy(const OscillatorSpec& spec, const TemperatureProfile& profile,
                              const AgingFit& fit, double t_elapsed_s, std::uint64_t seed,
                              double temp_block_s = 3600.0);

/// Step the scenario from the last reset over `duration`, integrating the
/// accuracy into the misalignment, switching clocks per the duty schedule,
/// zeroing the misalignment at every reset-period multiple, and recording
/// loose-sync violations.
ClockTrajectory simulate(const ScenarioConfig& config, double duration_s);

/// Earliest sampled time with |misalignment| above the threshold.
std::optional<double> first_violation(const ClockTrajectory& traj, const SyncRequirement& req);

/// CSV export: t_s,y_frac,delta_t_s,active_clock,violation
std::string trajectory_csv(const ClockTrajectory& traj);

/// View of a trajectory as clock samples against a nominal frequency.
std::vector<ClockSample> to_clock_samples(const ClockTrajectory& traj, double f0_hz);

/// Derived frequency metrics at sample index `i`, using a centered window.
FrequencyMetrics metrics_at(const ClockTrajectory& traj, std::span<const ClockSample> samples,
                            std::size_t i, double f0_hz, double window_s);

} // namespace holdover
