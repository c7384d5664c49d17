#include "holdover/clock_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "holdover/units.hpp"

namespace holdover {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic uniform in [-1, 1) from (seed, block).
double residual_unit(std::uint64_t seed, std::uint64_t block)
{
    std::uint64_t h = splitmix64(seed ^ splitmix64(block));
    double u01 = static_cast<double>(h >> 11) * 0x1.0p-53;
    return 2.0 * u01 - 1.0;
}

} // namespace

// ---------------------------------------------------------------------------
// Temperature profiles

TemperatureProfile::TemperatureProfile(Variant v) : v_(std::move(v))
{
    if (const auto* r = std::get_if<RampTemp>(&v_)) {
        if (!(r->duration_s > 0.0))
            fail(Errc::invalid_argument, "ramp duration must be positive");
    } else if (const auto* d = std::get_if<DiurnalTemp>(&v_)) {
        if (!(d->period_s > 0.0))
            fail(Errc::invalid_argument, "diurnal period must be positive");
        if (d->amplitude_c < 0.0)
            fail(Errc::invalid_argument, "diurnal amplitude must be non-negative");
    } else if (const auto* c = std::get_if<CyclingTemp>(&v_)) {
        if (!(c->dwell_s > 0.0))
            fail(Errc::invalid_argument, "cycling dwell must be positive");
    }
}

double TemperatureProfile::at(double t_s) const
{
    return std::visit(
        [t_s](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ConstantTemp>) {
                return p.x_c;
            } else if constexpr (std::is_same_v<T, RampTemp>) {
                if (t_s <= 0.0) return p.start_c;
                if (t_s >= p.duration_s) return p.end_c;
                return p.start_c + (p.end_c - p.start_c) * (t_s / p.duration_s);
            } else if constexpr (std::is_same_v<T, DiurnalTemp>) {
                return p.mean_c +
                       p.amplitude_c * std::sin(2.0 * std::numbers::pi * t_s / p.period_s);
            } else {
                auto cycle = static_cast<std::uint64_t>(std::floor(t_s / p.dwell_s));
                return (cycle % 2 == 0) ? p.high_c : p.low_c;
            }
        },
        v_);
}

double TemperatureProfile::min_c() const
{
    return std::visit(
        [](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ConstantTemp>) return p.x_c;
            else if constexpr (std::is_same_v<T, RampTemp>) return std::min(p.start_c, p.end_c);
            else if constexpr (std::is_same_v<T, DiurnalTemp>) return p.mean_c - p.amplitude_c;
            else return std::min(p.high_c, p.low_c);
        },
        v_);
}

double TemperatureProfile::max_c() const
{
    return std::visit(
        [](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ConstantTemp>) return p.x_c;
            else if constexpr (std::is_same_v<T, RampTemp>) return std::max(p.start_c, p.end_c);
            else if constexpr (std::is_same_v<T, DiurnalTemp>) return p.mean_c + p.amplitude_c;
            else return std::max(p.high_c, p.low_c);
        },
        v_);
}

double TemperatureProfile::first_time_at(double x_c) const
{
    return std::visit(
        [x_c](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ConstantTemp>) {
                (void)p;
                return 0.0;
            } else if constexpr (std::is_same_v<T, RampTemp>) {
                return x_c == p.start_c ? 0.0 : p.duration_s;
            } else if constexpr (std::is_same_v<T, DiurnalTemp>) {
                if (x_c >= p.mean_c + p.amplitude_c) return 0.25 * p.period_s;
                if (x_c <= p.mean_c - p.amplitude_c) return 0.75 * p.period_s;
                return 0.0;
            } else {
                return x_c == p.high_c ? 0.0 : p.dwell_s;
            }
        },
        v_);
}

std::string TemperatureProfile::describe() const
{
    using units::format_double;
    return std::visit(
        [](const auto& p) -> std::string {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ConstantTemp>)
                return "constant " + format_double(p.x_c) + " C";
            else if constexpr (std::is_same_v<T, RampTemp>)
                return "ramp " + format_double(p.start_c) + ".." + format_double(p.end_c) +
                       " C over " + units::format_duration(p.duration_s);
            else if constexpr (std::is_same_v<T, DiurnalTemp>)
                return "diurnal mean " + format_double(p.mean_c) + " C amplitude " +
                       format_double(p.amplitude_c) + " C period " +
                       units::format_duration(p.period_s);
            else
                return "cycling " + format_double(p.high_c) + ".." + format_double(p.low_c) +
                       " C dwell " + units::format_duration(p.dwell_s);
        },
        v_);
}

// ---------------------------------------------------------------------------
// Aging fits

AgingFit AgingFit::linear(double rate_per_s, double offset)
{
    AgingFit f;
    f.kind_ = Kind::Linear;
    f.rate_per_s_ = rate_per_s;
    f.offset_ = offset;
    return f;
}

AgingFit AgingFit::logarithmic(double scale, double knee_rate_per_s)
{
    if (!(knee_rate_per_s > 0.0))
        fail(Errc::invalid_argument, "logarithmic fit rate must be positive");
    AgingFit f;
    f.kind_ = Kind::Logarithmic;
    f.scale_ = scale;
    f.knee_rate_per_s_ = knee_rate_per_s;
    return f;
}

AgingFit AgingFit::anchored_linear(const AgingSpec& spec)
{
    double y = spec.included_in_accuracy ? 0.0 : spec.y_age_at_tdata;
    if (y == 0.0) return linear(0.0, 0.0);
    return linear(y / spec.t_data_s, 0.0);
}

AgingFit AgingFit::anchored_log(const AgingSpec& spec, double half_time_s)
{
    double y = spec.included_in_accuracy ? 0.0 : spec.y_age_at_tdata;
    if (y == 0.0) return logarithmic(0.0, 1.0);
    if (!(spec.t_data_s > 0.0))
        fail(Errc::invalid_argument, "aging horizon must be positive");
    // Choose k so that ln(k*half + 1) is half of ln(k*t_data + 1); exact
    // solution of the half-value condition for the anchored curve.
    double half = std::min(half_time_s, spec.t_data_s / 4.0);
    double k = (spec.t_data_s - 2.0 * half) / (half * half);
    double scale = y / std::log(k * spec.t_data_s + 1.0);
    return logarithmic(scale, k);
}

double AgingFit::at(double t_s) const
{
    if (kind_ == Kind::Linear) return rate_per_s_ * t_s + offset_;
    return scale_ * std::log(knee_rate_per_s_ * t_s + 1.0);
}

std::vector<FitComparisonRow> aging_fit_compare(const AgingSpec& spec, const AgingFit& fit_linear,
                                                const AgingFit& fit_log, double horizon_s,
                                                double step_s)
{
    if (!(horizon_s > 0.0)) fail(Errc::invalid_argument, "comparison horizon must be positive");
    if (!(step_s > 0.0)) fail(Errc::invalid_argument, "comparison step must be positive");

    std::vector<FitComparisonRow> rows;
    rows.reserve(static_cast<std::size_t>(horizon_s / step_s) + 2);
    for (double t = 0.0;; t += step_s) {
        if (t > horizon_s) t = horizon_s;
        FitComparisonRow row{t, fit_linear.at(t), fit_log.at(t), aging_bound(spec, t)};
        // Allow for rounding at the anchor where fit and bound coincide.
        double tol = 1e-12 * std::max(1e-30, row.bound);
        for (double fit_value : {row.y_linear, row.y_log}) {
            if (fit_value > row.bound + tol)
                fail(Errc::invalid_argument,
                     "aging fit exceeds the prudential bound, first crossing at t = " +
                         units::format_double(t) + " s (" + units::format_double(fit_value) +
                         " > " + units::format_double(row.bound) + ")");
        }
        rows.push_back(row);
        if (t >= horizon_s) break;
    }
    return rows;
}

std::string fit_compare_csv(const std::vector<FitComparisonRow>& rows)
{
    std::string out = "t_s,y_lin_frac,y_log_frac,bound_frac\n";
    for (const auto& r : rows) {
        out += units::format_double(r.t_s);
        out += ',';
        out += units::format_double(r.y_linear);
        out += ',';
        out += units::format_double(r.y_log);
        out += ',';
        out += units::format_double(r.bound);
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Duty schedules

DutySchedule DutySchedule::always_on()
{
    DutySchedule d;
    d.kind_ = Kind::AlwaysOn;
    return d;
}

DutySchedule DutySchedule::always_off()
{
    DutySchedule d;
    d.kind_ = Kind::AlwaysOff;
    return d;
}

DutySchedule DutySchedule::intervals(std::vector<std::pair<double, double>> on_intervals_s)
{
    std::sort(on_intervals_s.begin(), on_intervals_s.end());
    for (std::size_t i = 0; i < on_intervals_s.size(); ++i) {
        const auto& [start, end] = on_intervals_s[i];
        if (!(end > start))
            fail(Errc::invalid_argument, "duty interval end must be after its start");
        if (i > 0 && start < on_intervals_s[i - 1].second)
            fail(Errc::invalid_argument, "duty intervals overlap");
    }
    DutySchedule d;
    d.kind_ = Kind::Intervals;
    d.on_ = std::move(on_intervals_s);
    return d;
}

bool DutySchedule::is_on(double t_s) const
{
    switch (kind_) {
    case Kind::AlwaysOn: return true;
    case Kind::AlwaysOff: return false;
    case Kind::Intervals: break;
    }
    auto it = std::upper_bound(on_.begin(), on_.end(), t_s,
                               [](double t, const auto& iv) { return t < iv.first; });
    if (it == on_.begin()) return false;
    --it;
    return t_s < it->second;
}

bool DutySchedule::never_on() const
{
    return kind_ == Kind::AlwaysOff || (kind_ == Kind::Intervals && on_.empty());
}

std::string DutySchedule::describe() const
{
    switch (kind_) {
    case Kind::AlwaysOn: return "always_on";
    case Kind::AlwaysOff: return "always_off";
    case Kind::Intervals: break;
    }
    std::string out;
    for (const auto& [start, end] : on_) {
        if (!out.empty()) out += ", ";
        out += units::format_double(start) + " s.." + units::format_double(end) + " s";
    }
    return out.empty() ? "always_off" : out;
}

// ---------------------------------------------------------------------------
// Accuracy evaluation and the simulation loop

namespace {

double modeled_temperature_term(const OscillatorSpec& spec, double x_c, double t_elapsed_s,
                                std::uint64_t seed, double temp_block_s)
{
    const TemperatureModel& m = spec.temperature;
    switch (m.kind) {
    case TempModelKind::Parabolic: {
        double dx = x_c - m.x0_c;
        return m.a_per_c2 * dx * dx;  // signed, as the crystal cut dictates
    }
    case TempModelKind::Linear:
        return m.slope_per_c * std::fabs(x_c - m.x0_c);
    case TempModelKind::ConstantBound:
        break;
    }
    // Compensated (or unmodeled) parts expose no analytic temperature curve;
    // exercise the full +-bound with a seeded residual held over fixed blocks.
    if (m.y_temp == 0.0) return 0.0;
    auto block = static_cast<std::uint64_t>(std::floor(t_elapsed_s / temp_block_s));
    return residual_unit(seed, block) * m.y_temp;
}

void check_profile_range(const OscillatorSpec& spec, const TemperatureProfile& profile)
{
    const TemperatureModel& m = spec.temperature;
    for (double extreme : {profile.min_c(), profile.max_c()}) {
        if (extreme < m.x_min_c || extreme > m.x_max_c) {
            double when = profile.first_time_at(extreme);
            fail(Errc::out_of_range,
                 "profile reaches " + units::format_double(extreme) + " C at t = " +
                     units::format_double(when) + " s, outside the operating range [" +
                     units::format_double(m.x_min_c) + ", " + units::format_double(m.x_max_c) +
                     "] C of " + spec.model);
        }
    }
}

struct ActiveClock {
    const OscillatorSpec* spec;
    AgingFit fit;
};

} // namespace

double instantaneous_accuracy(const OscillatorSpec& spec, const TemperatureProfile& profile,
                              const AgingFit& fit, double t_elapsed_s, std::uint64_t seed,
                              double temp_block_s)
{
    double x = profile.at(t_elapsed_s);
    const TemperatureModel& m = spec.temperature;
    if (x < m.x_min_c || x > m.x_max_c)
        fail(Errc::out_of_range,
             "temperature " + units::format_double(x) + " C at t = " +
                 units::format_double(t_elapsed_s) + " s outside the operating range of " +
                 spec.model);
    return modeled_temperature_term(spec, x, t_elapsed_s, seed, temp_block_s) + fit.at(t_elapsed_s) +
           spec.minor.y_calib;
}

ClockTrajectory simulate(const ScenarioConfig& config, double duration_s)
{
    validate(config.primary);
    if (config.mode == PowerMode::PowerLimited) {
        if (!config.secondary)
            fail(Errc::invalid_argument, "power-limited scenario needs a secondary clock");
        validate(*config.secondary);
    } else if (config.secondary) {
        fail(Errc::invalid_argument, "high-power scenario must not name a secondary clock");
    }
    if (!(config.sample_step_s > 0.0))
        fail(Errc::invalid_argument, "sample step must be positive");
    if (std::isfinite(config.req.t_loose_s) && config.sample_step_s > config.req.t_loose_s / 10.0)
        fail(Errc::invalid_argument,
             "sample step must not exceed a tenth of the loose-sync threshold");
    if (!(duration_s >= config.sample_step_s))
        fail(Errc::invalid_argument, "duration must cover at least one sample step");
    if (config.req.t_reset_s < config.sample_step_s)
        fail(Errc::invalid_argument, "reset period shorter than the sample step");

    check_profile_range(config.primary, config.profile);
    if (config.secondary) check_profile_range(*config.secondary, config.profile);

    auto make_fit = [&](const OscillatorSpec& spec) {
        return config.fit_kind == AgingFit::Kind::Linear ? AgingFit::anchored_linear(spec.aging)
                                                         : AgingFit::anchored_log(spec.aging);
    };
    ActiveClock primary{&config.primary, make_fit(config.primary)};
    std::optional<ActiveClock> secondary;
    if (config.secondary) secondary = ActiveClock{&*config.secondary, make_fit(*config.secondary)};

    const double h = config.sample_step_s;
    const double t_reset = config.req.t_reset_s;
    const auto n_steps = static_cast<std::size_t>(std::floor(duration_s / h + 1e-9));

    ClockTrajectory traj;
    traj.t_loose_s = config.req.t_loose_s;
    traj.sample_step_s = h;
    traj.duration_s = static_cast<double>(n_steps) * h;
    traj.samples.reserve(n_steps + 1);

    double last_reset = 0.0;
    auto active_at = [&](double t) -> const ActiveClock& {
        if (config.mode == PowerMode::PowerLimited && !config.duty.is_on(t)) return *secondary;
        return primary;
    };
    auto eval_y = [&](double t) -> double {
        const ActiveClock& active = active_at(t);
        double aging_elapsed = config.aging_restart_on_reset ? t - last_reset : t;
        if (config.accuracy == AccuracyMode::AtBound)
            return worst_case_temp_accuracy(active.spec->temperature) +
                   aging_bound(active.spec->aging, aging_elapsed) + active.spec->minor.sum();
        double x = config.profile.at(t);
        return modeled_temperature_term(*active.spec, x, t, config.seed, config.temp_block_s) +
               active.fit.at(aging_elapsed) + active.spec->minor.y_calib;
    };

    double delta = 0.0;
    double next_reset = t_reset;
    double y_prev = eval_y(0.0);
    bool in_violation = false;

    auto record = [&](double t, double y) {
        bool violating = std::isfinite(traj.t_loose_s) && std::fabs(delta) > traj.t_loose_s;
        traj.samples.push_back(
            {t, y, delta, &active_at(t) != &primary, violating});
        if (violating) {
            if (!in_violation) traj.violations.push_back({t, t});
            traj.violations.back().last_s = t;
        }
        in_violation = violating;
    };

    record(0.0, y_prev);
    double t_prev = 0.0;
    for (std::size_t k = 1; k <= n_steps; ++k) {
        double t = static_cast<double>(k) * h;
        double y = eval_y(t);

        // Split the step at reset instants so the zeroing is exact even when
        // the grid does not land on a reset-period multiple.
        double seg_start = t_prev;
        double y_start = y_prev;
        while (next_reset > seg_start && next_reset <= t) {
            double y_at_reset = eval_y(next_reset);
            delta += 0.5 * (y_start + y_at_reset) * (next_reset - seg_start);
            traj.reset_times_s.push_back(next_reset);
            delta = 0.0;
            last_reset = next_reset;
            seg_start = next_reset;
            // accuracy may depend on the reset through the aging clock
            y_start = eval_y(next_reset);
            next_reset += t_reset;
        }
        delta += 0.5 * (y_start + y) * (t - seg_start);

        record(t, y);
        t_prev = t;
        y_prev = y;
    }
    return traj;
}

std::optional<double> first_violation(const ClockTrajectory& traj, const SyncRequirement& req)
{
    for (const auto& s : traj.samples)
        if (std::fabs(s.delta_t_s) > req.t_loose_s) return s.t_s;
    return std::nullopt;
}

std::string trajectory_csv(const ClockTrajectory& traj)
{
    std::string out = "t_s,y_frac,delta_t_s,active_clock,violation\n";
    for (const auto& s : traj.samples) {
        out += units::format_double(s.t_s);
        out += ',';
        out += units::format_double(s.y);
        out += ',';
        out += units::format_double(s.delta_t_s);
        out += ',';
        out += s.secondary_active ? "secondary" : "primary";
        out += ',';
        out += s.violating ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::vector<ClockSample> to_clock_samples(const ClockTrajectory& traj, double f0_hz)
{
    if (!(f0_hz > 0.0)) fail(Errc::invalid_argument, "nominal frequency must be positive");
    std::vector<ClockSample> out;
    out.reserve(traj.samples.size());
    for (const auto& s : traj.samples) {
        // clock time = true time + misalignment, phase = f0 * clock time
        out.push_back({s.t_s, f0_hz * (s.t_s + s.delta_t_s), f0_hz * (1.0 + s.y)});
    }
    return out;
}

FrequencyMetrics metrics_at(const ClockTrajectory& traj, std::span<const ClockSample> samples,
                            std::size_t i, double f0_hz, double window_s)
{
    if (i >= traj.samples.size()) fail(Errc::invalid_argument, "sample index out of range");
    const TrajectorySample& s = traj.samples[i];
    WindowStability w = stability_over_window(samples, window_s, s.t_s, f0_hz);
    FrequencyMetrics m;
    m.delta_f_hz = samples[i].fc_hz - f0_hz;
    m.delta_t_s = s.delta_t_s;
    m.y = accuracy(samples[i].fc_hz, f0_hz);
    m.ys = w.ys;
    m.fbar_hz = w.fbar_hz;
    m.window_s = window_s;
    return m;
}

} // namespace holdover
