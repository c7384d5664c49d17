// Command-line front end over the holdover C API.
//
// Exit codes: 0 success (and every verdict positive), 2 a domain verdict is
// negative (unsuitable device, reproduction mismatch, sync violation),
// 1 usage or input error.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "holdover.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitVerdict = 2;

struct TextDeleter {
    void operator()(char* p) const { ho_text_free(p); }
};
using Text = std::unique_ptr<char, TextDeleter>;

struct CatalogDeleter {
    void operator()(ho_catalog* p) const { ho_catalog_free(p); }
};
using Catalog = std::unique_ptr<ho_catalog, CatalogDeleter>;

struct EvaluationDeleter {
    void operator()(ho_evaluation* p) const { ho_evaluation_free(p); }
};
using Evaluation = std::unique_ptr<ho_evaluation, EvaluationDeleter>;

struct TrajectoryDeleter {
    void operator()(ho_trajectory* p) const { ho_trajectory_free(p); }
};
using Trajectory = std::unique_ptr<ho_trajectory, TrajectoryDeleter>;

[[noreturn]] void die(const std::string& message)
{
    std::fprintf(stderr, "error: %s\n", message.c_str());
    std::exit(kExitError);
}

void check(ho_status status)
{
    if (status != HO_OK)
        die(std::string(ho_status_str(status)) + ": " + ho_last_error());
}

double parse_duration_or_die(const std::string& text)
{
    double seconds = 0.0;
    check(ho_parse_duration(text.c_str(), &seconds));
    return seconds;
}

std::vector<double> parse_duration_list(const std::string& text)
{
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        std::string item = text.substr(pos, (comma == std::string::npos ? text.size() : comma) - pos);
        pos = comma == std::string::npos ? text.size() + 1 : comma + 1;
        if (item.empty()) die("empty duration in list '" + text + "'");
        out.push_back(parse_duration_or_die(item));
    }
    return out;
}

ho_format parse_format(const std::string& text)
{
    if (text == "csv") return HO_FORMAT_CSV;
    if (text == "markdown" || text == "md") return HO_FORMAT_MARKDOWN;
    die("unknown format '" + text + "' (expected csv or markdown)");
}

std::string pretty_duration(double seconds)
{
    Text text;
    char* raw = nullptr;
    check(ho_format_duration(seconds, &raw));
    text.reset(raw);
    return text.get();
}

int cmd_evaluate(const std::string& spec_path, const std::string& device,
                 const std::string& treset, const std::string& tl, const std::string& format)
{
    if (spec_path.empty() == device.empty())
        die("pick exactly one of --spec FILE or --device NAME");

    Catalog catalog;
    ho_catalog* raw = nullptr;
    if (!spec_path.empty()) {
        check(ho_catalog_from_file(spec_path.c_str(), &raw));
        catalog.reset(raw);
    } else {
        check(ho_catalog_embedded(0, &raw));
        Catalog embedded(raw);
        ho_catalog* selected = nullptr;
        check(ho_catalog_select(embedded.get(), device.c_str(), &selected));
        catalog.reset(selected);
    }

    double t_reset = parse_duration_or_die(treset);
    std::vector<double> tls = parse_duration_list(tl);

    ho_evaluation* eval_raw = nullptr;
    check(ho_evaluate(catalog.get(), t_reset, tls.data(), tls.size(), &eval_raw));
    Evaluation evaluation(eval_raw);

    char* text_raw = nullptr;
    check(ho_evaluation_render(evaluation.get(), parse_format(format), &text_raw));
    Text text(text_raw);
    std::fputs(text.get(), stdout);

    for (size_t i = 0; i < ho_evaluation_count(evaluation.get()); ++i)
        for (size_t j = 0; j < tls.size(); ++j) {
            int suitable = 0;
            check(ho_evaluation_suitable(evaluation.get(), i, j, &suitable));
            if (!suitable) return kExitVerdict;
        }
    return kExitOk;
}

int cmd_catalog(int table, const std::string& format)
{
    char* text_raw = nullptr;
    int all_pass = 0;
    check(ho_table_report(table, parse_format(format), &text_raw, &all_pass));
    Text text(text_raw);
    std::fputs(text.get(), stdout);
    return all_pass ? kExitOk : kExitVerdict;
}

int cmd_simulate(const std::string& scenario_path, const std::string& duration,
                 const std::string& out_path)
{
    double duration_s = parse_duration_or_die(duration);
    ho_trajectory* traj_raw = nullptr;
    check(ho_simulate_file(scenario_path.c_str(), duration_s, &traj_raw));
    Trajectory traj(traj_raw);

    char* csv_raw = nullptr;
    check(ho_trajectory_csv(traj.get(), &csv_raw));
    Text csv(csv_raw);
    if (out_path.empty()) {
        std::fputs(csv.get(), stdout);
    } else {
        std::FILE* f = std::fopen(out_path.c_str(), "wb");
        if (!f) die("cannot write '" + out_path + "'");
        std::fputs(csv.get(), f);
        std::fclose(f);
    }

    double max_abs = 0.0, first_violation = -1.0, margin = 0.0;
    int resets = 0;
    check(ho_trajectory_summary(traj.get(), &max_abs, &first_violation, &resets, &margin));

    std::printf("# samples=%zu max_abs_delta_t_s=%.9g first_violation_s=",
                ho_trajectory_count(traj.get()), max_abs);
    if (first_violation < 0.0)
        std::printf("none");
    else
        std::printf("%.9g", first_violation);
    std::printf(" resets=%d bound_margin_s=%.9g\n", resets, margin);
    std::printf("# max |delta_t| = %s, first violation = %s, bound margin = %s\n",
                pretty_duration(max_abs).c_str(),
                first_violation < 0.0 ? "none" : pretty_duration(first_violation).c_str(),
                pretty_duration(margin).c_str());
    return first_violation >= 0.0 ? kExitVerdict : kExitOk;
}

int cmd_fit_compare(const std::string& yage, const std::string& tdata, const std::string& horizon,
                    const std::string& step, const std::string& out_path)
{
    double y_age = 0.0;
    check(ho_parse_accuracy(yage.c_str(), &y_age));
    double t_data = parse_duration_or_die(tdata);
    double horizon_s = parse_duration_or_die(horizon);
    double step_s = step.empty() ? horizon_s / 400.0 : parse_duration_or_die(step);

    char* text_raw = nullptr;
    check(ho_fit_compare_csv(y_age, t_data, horizon_s, step_s, &text_raw));
    Text text(text_raw);
    if (out_path.empty()) {
        std::fputs(text.get(), stdout);
    } else {
        std::FILE* f = std::fopen(out_path.c_str(), "wb");
        if (!f) die("cannot write '" + out_path + "'");
        std::fputs(text.get(), f);
        std::fclose(f);
    }
    return kExitOk;
}

int cmd_check(const std::string& delta_t, const std::string& tl)
{
    double delta_s = 0.0;
    check(ho_parse_signed_duration(delta_t.c_str(), &delta_s));
    double tl_s = parse_duration_or_die(tl);
    int ok = ho_sync_ok(delta_s, tl_s);
    std::printf("%s: |delta_t| = %s, threshold = %s\n", ok ? "ok" : "violation",
                pretty_duration(delta_s < 0 ? -delta_s : delta_s).c_str(),
                pretty_duration(tl_s).c_str());
    return ok ? kExitOk : kExitVerdict;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Worst-case clock holdover bounds, device survey reproduction and "
                 "clock-error simulation"};
    app.require_subcommand(1);

    std::string spec_path, device, treset, tl, format = "csv";
    auto* evaluate = app.add_subcommand(
        "evaluate", "Bound, maximum holdover and suitability for one or more devices");
    evaluate->add_option("--spec", spec_path, "spec file to evaluate");
    evaluate->add_option("--device", device, "device name from the embedded catalog");
    evaluate->add_option("--treset", treset, "holdover (reset) period, e.g. 2y")->required();
    evaluate->add_option("--tl", tl, "loose-sync threshold(s), comma separated, e.g. 15s,165s")
        ->required();
    evaluate->add_option("--format", format, "csv or markdown");

    int table = 0;
    std::string catalog_format = "csv";
    auto* catalog = app.add_subcommand(
        "catalog", "Recompute an embedded survey table and check the published figures");
    catalog->add_option("--table", table, "table number (2 or 3)")->required();
    catalog->add_option("--format", catalog_format, "csv or markdown");

    std::string scenario_path, duration, out_path;
    auto* simulate = app.add_subcommand("simulate", "Run a scenario file and export the trajectory");
    simulate->add_option("--scenario", scenario_path, "scenario file")->required();
    simulate->add_option("--duration", duration, "simulated time span, e.g. 30d")->required();
    simulate->add_option("--out", out_path, "trajectory CSV path (default: stdout)");

    std::string yage, tdata, horizon, step, fit_out;
    auto* fit = app.add_subcommand("fit-compare",
                                   "Aging fits versus the prudential bound as CSV");
    fit->add_option("--yage", yage, "aging figure, e.g. 1ppm")->required();
    fit->add_option("--tdata", tdata, "datasheet aging horizon, e.g. 1y")->required();
    fit->add_option("--horizon", horizon, "comparison horizon, e.g. 2y")->required();
    fit->add_option("--step", step, "sample step (default horizon/400)");
    fit->add_option("--out", fit_out, "output path (default: stdout)");

    std::string delta_t, check_tl;
    auto* checkcmd = app.add_subcommand("check", "Check a misalignment against a threshold");
    checkcmd->add_option("--delta-t", delta_t, "clock misalignment, e.g. 120s")->required();
    checkcmd->add_option("--tl", check_tl, "loose-sync threshold, e.g. 165s")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (evaluate->parsed()) return cmd_evaluate(spec_path, device, treset, tl, format);
        if (catalog->parsed()) return cmd_catalog(table, catalog_format);
        if (simulate->parsed()) return cmd_simulate(scenario_path, duration, out_path);
        if (fit->parsed()) return cmd_fit_compare(yage, tdata, horizon, step, fit_out);
        if (checkcmd->parsed()) return cmd_check(delta_t, check_tl);
    } catch (const std::exception& e) {
        die(e.what());
    }
    return kExitError;
}
