#include "holdover/clock_model.hpp"

#include <algorithm>
#include <cmath>

#include "holdover/units.hpp"

namespace holdover {

void validate(const NominalClock& clock)
{
    if (!(clock.f0_hz > 0.0))
        fail(Errc::invalid_argument,
             "nominal frequency must be positive, got " + units::format_double(clock.f0_hz) + " Hz");
}

void validate(const SyncRequirement& req)
{
    if (!(req.t_loose_s > 0.0))
        fail(Errc::invalid_argument, "loose-sync threshold must be positive");
    if (!(req.t_reset_s > 0.0))
        fail(Errc::invalid_argument, "reset period must be positive");
}

StabilityWindowClass stability_window_class(double window_s)
{
    if (window_s < 100.0) return StabilityWindowClass::ShortTerm;
    if (window_s > units::seconds_per_day) return StabilityWindowClass::LongTerm;
    return StabilityWindowClass::Intermediate;
}

const char* to_string(StabilityWindowClass c)
{
    switch (c) {
    case StabilityWindowClass::ShortTerm: return "short-term";
    case StabilityWindowClass::LongTerm: return "long-term";
    case StabilityWindowClass::Intermediate: break;
    }
    return "intermediate";
}

SampledSeries::SampledSeries(std::vector<double> times_s, std::vector<double> values)
    : times_(std::move(times_s)), values_(std::move(values))
{
    if (times_.size() != values_.size())
        fail(Errc::invalid_argument, "sample times and values differ in length");
    if (times_.empty())
        fail(Errc::invalid_argument, "empty sample series");
    for (std::size_t i = 1; i < times_.size(); ++i)
        if (!(times_[i] > times_[i - 1]))
            fail(Errc::invalid_argument, "sample times must be strictly increasing");
}

double SampledSeries::value_at(double t_s) const
{
    if (t_s < times_.front() || t_s > times_.back())
        fail(Errc::insufficient_data,
             "time " + units::format_double(t_s) + " s outside the sampled range [" +
                 units::format_double(times_.front()) + ", " + units::format_double(times_.back()) +
                 "] s");
    auto it = std::lower_bound(times_.begin(), times_.end(), t_s);
    std::size_t hi = static_cast<std::size_t>(it - times_.begin());
    if (hi == 0) return values_.front();
    if (times_[hi] == t_s) return values_[hi];
    std::size_t lo = hi - 1;
    double w = (t_s - times_[lo]) / (times_[hi] - times_[lo]);
    return values_[lo] + w * (values_[hi] - values_[lo]);
}

double SampledSeries::integrate(double a_s, double b_s) const
{
    if (b_s < a_s) fail(Errc::invalid_argument, "integration interval end precedes start");
    if (a_s < times_.front() || b_s > times_.back())
        fail(Errc::insufficient_data, "integration interval not covered by the samples");
    if (a_s == b_s) return 0.0;

    double va = value_at(a_s);
    auto it = std::upper_bound(times_.begin(), times_.end(), a_s);
    std::size_t i = static_cast<std::size_t>(it - times_.begin());

    double acc = 0.0;
    double t_prev = a_s;
    double v_prev = va;
    while (i < times_.size() && times_[i] < b_s) {
        acc += 0.5 * (v_prev + values_[i]) * (times_[i] - t_prev);
        t_prev = times_[i];
        v_prev = values_[i];
        ++i;
    }
    double vb = value_at(b_s);
    acc += 0.5 * (v_prev + vb) * (b_s - t_prev);
    return acc;
}

double accuracy(double fc_hz, double f0_hz)
{
    if (!(f0_hz > 0.0))
        fail(Errc::invalid_argument,
             "nominal frequency must be positive, got " + units::format_double(f0_hz) + " Hz");
    return (fc_hz - f0_hz) / f0_hz;
}

WindowStability stability_over_window(std::span<const ClockSample> samples, double window_s,
                                      double t_s, double f0_hz)
{
    if (!(f0_hz > 0.0))
        fail(Errc::invalid_argument, "nominal frequency must be positive");
    if (!(window_s > 0.0))
        fail(Errc::invalid_argument, "averaging window must be positive");
    if (samples.size() < 2)
        fail(Errc::insufficient_data, "need at least two samples for a windowed average");

    std::vector<double> t(samples.size()), f(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        t[i] = samples[i].t_s;
        f[i] = samples[i].fc_hz;
    }
    SampledSeries freq(std::move(t), std::move(f));

    double lo = t_s - window_s / 2.0;
    double hi = t_s + window_s / 2.0;
    if (lo < freq.front_time() || hi > freq.back_time())
        fail(Errc::insufficient_data,
             "window [" + units::format_double(lo) + ", " + units::format_double(hi) +
                 "] s not covered by the samples; refusing to truncate a centered average");

    double fbar = freq.integrate(lo, hi) / window_s;
    double fc = freq.value_at(t_s);
    // Normalizing the deviation by f0 keeps the accuracy decomposition
    // y = ys + (fbar - f0)/f0 an exact identity at every sample.
    return {(fc - fbar) / f0_hz, fbar};
}

double integrate_misalignment(const SampledSeries& accuracy_of_t, double t0_s, double t_s)
{
    if (t_s < t0_s)
        fail(Errc::invalid_argument, "misalignment interval ends before it starts (t < t0)");
    return accuracy_of_t.integrate(t0_s, t_s);
}

} // namespace holdover
