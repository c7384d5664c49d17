#include "holdover.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "holdover/catalog.hpp"
#include "holdover/clock_sim.hpp"
#include "holdover/error_budget.hpp"
#include "holdover/units.hpp"

using namespace holdover;

struct ho_catalog {
    std::vector<CatalogEntry> entries;
};

struct ho_evaluation {
    std::vector<OscillatorSpec> specs;
    std::vector<BoundResult> results;
};

struct ho_trajectory {
    ClockTrajectory traj;
    double max_abs_delta_t_s = 0.0;
    double first_violation_s = -1.0;
    double bound_margin_s = 0.0;
};

namespace {

thread_local std::string t_last_error;

ho_status map_errc(Errc code)
{
    switch (code) {
    case Errc::invalid_argument: return HO_ERR_INVALID_ARGUMENT;
    case Errc::parse: return HO_ERR_PARSE;
    case Errc::out_of_range: return HO_ERR_OUT_OF_RANGE;
    case Errc::not_found: return HO_ERR_NOT_FOUND;
    case Errc::io: return HO_ERR_IO;
    case Errc::insufficient_data: return HO_ERR_INSUFFICIENT_DATA;
    case Errc::internal: break;
    }
    return HO_ERR_INTERNAL;
}

template <typename F>
ho_status guarded(F&& f)
{
    try {
        f();
        t_last_error.clear();
        return HO_OK;
    } catch (const Error& e) {
        t_last_error = e.what();
        return map_errc(e.code());
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return HO_ERR_INTERNAL;
    } catch (...) {
        t_last_error = "unknown failure";
        return HO_ERR_INTERNAL;
    }
}

ho_status fail_arg(const char* message)
{
    t_last_error = message;
    return HO_ERR_INVALID_ARGUMENT;
}

char* copy_text(const std::string& s)
{
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::string read_file(const char* path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::io, std::string("cannot open '") + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ReportFormat to_format(ho_format format)
{
    return format == HO_FORMAT_MARKDOWN ? ReportFormat::Markdown : ReportFormat::Csv;
}

void summarize(ho_trajectory& t)
{
    double max_abs = 0.0;
    for (const auto& s : t.traj.samples) max_abs = std::max(max_abs, std::fabs(s.delta_t_s));
    t.max_abs_delta_t_s = max_abs;
    t.first_violation_s = t.traj.violations.empty() ? -1.0 : t.traj.violations.front().first_s;
}

ho_trajectory* run_scenario(const std::string& text, double duration_s)
{
    ParsedScenario scenario = parse_scenario_text(text);
    auto t = std::make_unique<ho_trajectory>();
    t->traj = simulate(scenario.config, duration_s);
    summarize(*t);

    // Margin against the worst involved clock's bound envelope, measured from
    // the most recent reset.
    const OscillatorSpec* worst = &scenario.config.primary;
    if (scenario.config.secondary) {
        double b_primary = misalignment_bound(scenario.config.primary, t->traj.duration_s).bound_s;
        double b_secondary =
            misalignment_bound(*scenario.config.secondary, t->traj.duration_s).bound_s;
        if (b_secondary > b_primary) worst = &*scenario.config.secondary;
    }
    double margin = std::numeric_limits<double>::infinity();
    std::size_t reset_idx = 0;
    double last_reset = 0.0;
    for (const auto& s : t->traj.samples) {
        while (reset_idx < t->traj.reset_times_s.size() &&
               t->traj.reset_times_s[reset_idx] <= s.t_s)
            last_reset = t->traj.reset_times_s[reset_idx++];
        double elapsed = s.t_s - last_reset;
        if (elapsed <= 0.0) continue;
        double envelope = misalignment_bound(*worst, elapsed).bound_s;
        margin = std::min(margin, envelope - std::fabs(s.delta_t_s));
    }
    t->bound_margin_s = margin;
    return t.release();
}

} // namespace

extern "C" {

const char* ho_version(void)
{
    return "1.0.0";
}

const char* ho_status_str(ho_status status)
{
    switch (status) {
    case HO_OK: return "ok";
    case HO_ERR_INVALID_ARGUMENT: return "invalid argument";
    case HO_ERR_PARSE: return "parse error";
    case HO_ERR_OUT_OF_RANGE: return "out of range";
    case HO_ERR_NOT_FOUND: return "not found";
    case HO_ERR_IO: return "i/o error";
    case HO_ERR_INSUFFICIENT_DATA: return "insufficient data";
    case HO_ERR_INTERNAL: break;
    }
    return "internal error";
}

const char* ho_last_error(void)
{
    return t_last_error.c_str();
}

void ho_text_free(char* text)
{
    delete[] text;
}

ho_status ho_parse_duration(const char* text, double* seconds)
{
    if (!text || !seconds) return fail_arg("null argument");
    return guarded([&] { *seconds = units::parse_duration(text); });
}

ho_status ho_parse_signed_duration(const char* text, double* seconds)
{
    if (!text || !seconds) return fail_arg("null argument");
    return guarded([&] { *seconds = units::parse_duration(text, /*allow_negative=*/true); });
}

ho_status ho_parse_accuracy(const char* text, double* fraction)
{
    if (!text || !fraction) return fail_arg("null argument");
    return guarded([&] { *fraction = units::parse_accuracy(text); });
}

ho_status ho_format_duration(double seconds, char** text)
{
    if (!text) return fail_arg("null argument");
    return guarded([&] { *text = copy_text(units::format_duration(seconds)); });
}

ho_status ho_catalog_embedded(int table, ho_catalog** out)
{
    if (!out) return fail_arg("null argument");
    return guarded([&] {
        if (table != 0 && table != 2 && table != 3)
            fail(Errc::invalid_argument,
                 "no such table: " + std::to_string(table) + " (expected 0, 2 or 3)");
        auto catalog = std::make_unique<ho_catalog>();
        for (const CatalogEntry& e : embedded_catalog())
            if (table == 0 || e.table == table) catalog->entries.push_back(e);
        *out = catalog.release();
    });
}

ho_status ho_catalog_from_text(const char* text, ho_catalog** out)
{
    if (!text || !out) return fail_arg("null argument");
    return guarded([&] {
        auto catalog = std::make_unique<ho_catalog>();
        catalog->entries = catalog_from_text(text);
        *out = catalog.release();
    });
}

ho_status ho_catalog_from_file(const char* path, ho_catalog** out)
{
    if (!path || !out) return fail_arg("null argument");
    return guarded([&] {
        auto catalog = std::make_unique<ho_catalog>();
        catalog->entries = catalog_from_text(read_file(path));
        *out = catalog.release();
    });
}

ho_status ho_catalog_select(const ho_catalog* catalog, const char* device, ho_catalog** out)
{
    if (!catalog || !device || !out) return fail_arg("null argument");
    return guarded([&] {
        auto selected = std::make_unique<ho_catalog>();
        for (const CatalogEntry* e : find_devices(catalog->entries, device))
            selected->entries.push_back(*e);
        if (selected->entries.empty())
            fail(Errc::not_found, std::string("unknown device '") + device + "'");
        *out = selected.release();
    });
}

void ho_catalog_free(ho_catalog* catalog)
{
    delete catalog;
}

size_t ho_catalog_count(const ho_catalog* catalog)
{
    return catalog ? catalog->entries.size() : 0;
}

ho_status ho_catalog_device_name(const ho_catalog* catalog, size_t index, char** name)
{
    if (!catalog || !name) return fail_arg("null argument");
    return guarded([&] {
        if (index >= catalog->entries.size())
            fail(Errc::invalid_argument, "device index out of range");
        *name = copy_text(catalog->entries[index].display_name);
    });
}

ho_status ho_catalog_render(const ho_catalog* catalog, char** text)
{
    if (!catalog || !text) return fail_arg("null argument");
    return guarded([&] {
        std::vector<OscillatorSpec> specs;
        specs.reserve(catalog->entries.size());
        for (const CatalogEntry& e : catalog->entries) specs.push_back(e.spec);
        *text = copy_text(render_spec_file(specs));
    });
}

ho_status ho_evaluate(const ho_catalog* catalog, double t_reset_s, const double* t_loose_s,
                      size_t n_t_loose, ho_evaluation** out)
{
    if (!catalog || !out || (n_t_loose > 0 && !t_loose_s)) return fail_arg("null argument");
    return guarded([&] {
        auto evaluation = std::make_unique<ho_evaluation>();
        std::span<const double> tls(t_loose_s, n_t_loose);
        for (const CatalogEntry& e : catalog->entries) {
            evaluation->specs.push_back(e.spec);
            evaluation->results.push_back(evaluate(e.spec, t_reset_s, tls));
        }
        *out = evaluation.release();
    });
}

void ho_evaluation_free(ho_evaluation* evaluation)
{
    delete evaluation;
}

size_t ho_evaluation_count(const ho_evaluation* evaluation)
{
    return evaluation ? evaluation->results.size() : 0;
}

ho_status ho_evaluation_bound(const ho_evaluation* evaluation, size_t device, double* bound_s)
{
    if (!evaluation || !bound_s) return fail_arg("null argument");
    return guarded([&] {
        if (device >= evaluation->results.size())
            fail(Errc::invalid_argument, "device index out of range");
        *bound_s = evaluation->results[device].bound_s;
    });
}

ho_status ho_evaluation_breakdown(const ho_evaluation* evaluation, size_t device,
                                  double* temperature_s, double* aging_s, double* minor_s)
{
    if (!evaluation) return fail_arg("null argument");
    return guarded([&] {
        if (device >= evaluation->results.size())
            fail(Errc::invalid_argument, "device index out of range");
        const BoundBreakdown& b = evaluation->results[device].breakdown;
        if (temperature_s) *temperature_s = b.temperature_s;
        if (aging_s) *aging_s = b.aging_s;
        if (minor_s) *minor_s = b.minor_s;
    });
}

ho_status ho_evaluation_max_reset(const ho_evaluation* evaluation, size_t device, size_t tl_index,
                                  double* t_r_max_s)
{
    if (!evaluation || !t_r_max_s) return fail_arg("null argument");
    return guarded([&] {
        if (device >= evaluation->results.size())
            fail(Errc::invalid_argument, "device index out of range");
        const auto& verdicts = evaluation->results[device].verdicts;
        if (tl_index >= verdicts.size())
            fail(Errc::invalid_argument, "threshold index out of range");
        *t_r_max_s = verdicts[tl_index].t_r_max_s;
    });
}

ho_status ho_evaluation_suitable(const ho_evaluation* evaluation, size_t device, size_t tl_index,
                                 int* suitable)
{
    if (!evaluation || !suitable) return fail_arg("null argument");
    return guarded([&] {
        if (device >= evaluation->results.size())
            fail(Errc::invalid_argument, "device index out of range");
        const auto& verdicts = evaluation->results[device].verdicts;
        if (tl_index >= verdicts.size())
            fail(Errc::invalid_argument, "threshold index out of range");
        *suitable = verdicts[tl_index].suitable ? 1 : 0;
    });
}

ho_status ho_evaluation_render(const ho_evaluation* evaluation, ho_format format, char** text)
{
    if (!evaluation || !text) return fail_arg("null argument");
    return guarded([&] {
        *text = copy_text(render_report(evaluation->specs, evaluation->results, to_format(format)));
    });
}

ho_status ho_bound(const ho_catalog* catalog, size_t device, double t_reset_s, double* bound_s)
{
    if (!catalog || !bound_s) return fail_arg("null argument");
    return guarded([&] {
        if (device >= catalog->entries.size())
            fail(Errc::invalid_argument, "device index out of range");
        *bound_s = misalignment_bound(catalog->entries[device].spec, t_reset_s).bound_s;
    });
}

ho_status ho_max_reset_period(const ho_catalog* catalog, size_t device, double t_loose_s,
                              double* t_r_max_s)
{
    if (!catalog || !t_r_max_s) return fail_arg("null argument");
    return guarded([&] {
        if (device >= catalog->entries.size())
            fail(Errc::invalid_argument, "device index out of range");
        *t_r_max_s = max_reset_period(catalog->entries[device].spec, t_loose_s);
    });
}

ho_status ho_table_report(int table, ho_format format, char** text, int* all_pass)
{
    if (!text) return fail_arg("null argument");
    return guarded([&] {
        std::vector<TableRowCheck> rows = check_table(table);
        *text = copy_text(render_table_report(table, to_format(format)));
        if (all_pass) *all_pass = all_rows_pass(rows) ? 1 : 0;
    });
}

ho_status ho_simulate_text(const char* scenario_text, double duration_s, ho_trajectory** out)
{
    if (!scenario_text || !out) return fail_arg("null argument");
    return guarded([&] { *out = run_scenario(scenario_text, duration_s); });
}

ho_status ho_simulate_file(const char* scenario_path, double duration_s, ho_trajectory** out)
{
    if (!scenario_path || !out) return fail_arg("null argument");
    return guarded([&] { *out = run_scenario(read_file(scenario_path), duration_s); });
}

void ho_trajectory_free(ho_trajectory* trajectory)
{
    delete trajectory;
}

size_t ho_trajectory_count(const ho_trajectory* trajectory)
{
    return trajectory ? trajectory->traj.samples.size() : 0;
}

ho_status ho_trajectory_sample(const ho_trajectory* trajectory, size_t index, double* t_s,
                               double* y_fraction, double* delta_t_s, int* active_secondary,
                               int* violating)
{
    if (!trajectory || !t_s || !y_fraction || !delta_t_s) return fail_arg("null argument");
    return guarded([&] {
        if (index >= trajectory->traj.samples.size())
            fail(Errc::invalid_argument, "sample index out of range");
        const TrajectorySample& s = trajectory->traj.samples[index];
        *t_s = s.t_s;
        *y_fraction = s.y;
        *delta_t_s = s.delta_t_s;
        if (active_secondary) *active_secondary = s.secondary_active ? 1 : 0;
        if (violating) *violating = s.violating ? 1 : 0;
    });
}

ho_status ho_trajectory_summary(const ho_trajectory* trajectory, double* max_abs_delta_t_s,
                                double* first_violation_s, int* reset_count,
                                double* bound_margin_s)
{
    if (!trajectory) return fail_arg("null argument");
    return guarded([&] {
        if (max_abs_delta_t_s) *max_abs_delta_t_s = trajectory->max_abs_delta_t_s;
        if (first_violation_s) *first_violation_s = trajectory->first_violation_s;
        if (reset_count) *reset_count = static_cast<int>(trajectory->traj.reset_times_s.size());
        if (bound_margin_s) *bound_margin_s = trajectory->bound_margin_s;
    });
}

ho_status ho_trajectory_csv(const ho_trajectory* trajectory, char** text)
{
    if (!trajectory || !text) return fail_arg("null argument");
    return guarded([&] { *text = copy_text(trajectory_csv(trajectory->traj)); });
}

ho_status ho_fit_compare_csv(double y_age_fraction, double t_data_s, double horizon_s,
                             double step_s, char** text)
{
    if (!text) return fail_arg("null argument");
    return guarded([&] {
        if (!(y_age_fraction >= 0.0)) fail(Errc::invalid_argument, "aging figure must be >= 0");
        if (!(t_data_s > 0.0)) fail(Errc::invalid_argument, "aging horizon must be positive");
        AgingSpec spec{y_age_fraction, t_data_s, false};
        auto rows = aging_fit_compare(spec, AgingFit::anchored_linear(spec),
                                      AgingFit::anchored_log(spec), horizon_s, step_s);
        *text = copy_text(fit_compare_csv(rows));
    });
}

int ho_sync_ok(double delta_t_s, double t_loose_s)
{
    return sync_ok(delta_t_s, SyncRequirement{t_loose_s, 1.0}) ? 1 : 0;
}

} // extern "C"
