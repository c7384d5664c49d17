#pragma once

#include <span>
#include <vector>

#include "holdover/error.hpp"

namespace holdover {

/// Ideal reference a device clock is compared against: the nominal output
/// frequency and the instant of the last phase calibration.
struct NominalClock {
    double f0_hz = 0.0;
    double t0_s = 0.0;
};

void validate(const NominalClock& clock);

/// One observation of a running clock: true time, accumulated phase in
/// cycles, and the instantaneous output frequency. The clock's own time
/// reading is always derived as theta/f0, never stored.
struct ClockSample {
    double t_s = 0.0;
    double theta_c_cycles = 0.0;
    double fc_hz = 0.0;

    double clock_time_s(double f0_hz) const { return theta_c_cycles / f0_hz; }
};

/// Loose-synchronization policy: the largest tolerated |misalignment| and
/// the period between workshop resets. A reset zeroes the misalignment.
struct SyncRequirement {
    double t_loose_s = 0.0;
    double t_reset_s = 0.0;
};

void validate(const SyncRequirement& req);

/// Windowed frequency average and the normalized deviation of the
/// instantaneous frequency from it.
struct WindowStability {
    double ys = 0.0;       // (F_c(t) - F_bar) / f0
    double fbar_hz = 0.0;  // mean frequency over the window
};

/// Derived frequency quantities at one instant of a trajectory.
struct FrequencyMetrics {
    double delta_f_hz = 0.0;  // F_c - f0
    double delta_t_s = 0.0;   // accumulated clock error
    double y = 0.0;           // (F_c - f0) / f0
    double ys = 0.0;          // deviation from the windowed mean, fraction of f0
    double fbar_hz = 0.0;
    double window_s = 0.0;
};

/// Averaging-window classification; informational only.
enum class StabilityWindowClass { ShortTerm, Intermediate, LongTerm };

StabilityWindowClass stability_window_class(double window_s);
const char* to_string(StabilityWindowClass c);

/// Piecewise-linear function of time on a strictly increasing sample grid.
class SampledSeries {
public:
    SampledSeries() = default;
    SampledSeries(std::vector<double> times_s, std::vector<double> values);

    template <typename F>
    static SampledSeries from_function(F&& f, double t_begin_s, double t_end_s, std::size_t n)
    {
        std::vector<double> t(n), v(n);
        for (std::size_t i = 0; i < n; ++i) {
            t[i] = t_begin_s + (t_end_s - t_begin_s) * static_cast<double>(i) /
                                   static_cast<double>(n - 1);
            v[i] = f(t[i]);
        }
        return SampledSeries(std::move(t), std::move(v));
    }

    std::size_t size() const { return times_.size(); }
    std::span<const double> times() const { return times_; }
    std::span<const double> values() const { return values_; }
    double front_time() const { return times_.front(); }
    double back_time() const { return times_.back(); }

    /// Linear interpolation; outside the grid -> insufficient-data error.
    double value_at(double t_s) const;

    /// Trapezoidal integral over [a, b], with interpolated partial segments.
    double integrate(double a_s, double b_s) const;

private:
    std::vector<double> times_;
    std::vector<double> values_;
};

/// Normalized frequency deviation (F_c - f0)/f0.
double accuracy(double fc_hz, double f0_hz);

/// Mean frequency over the centered window [t - T0/2, t + T0/2] and the
/// normalized deviation of F_c(t) from it. The window must be fully covered
/// by the samples; it is never silently truncated at trajectory edges.
WindowStability stability_over_window(std::span<const ClockSample> samples, double window_s,
                                      double t_s, double f0_hz);

/// Accumulated clock error between t0 and t: the integral of the accuracy.
double integrate_misalignment(const SampledSeries& accuracy_of_t, double t0_s, double t_s);

/// True iff the misalignment is within the loose-sync threshold.
inline bool sync_ok(double delta_t_s, const SyncRequirement& req)
{
    double d = delta_t_s < 0 ? -delta_t_s : delta_t_s;
    return d <= req.t_loose_s;
}

} // namespace holdover
