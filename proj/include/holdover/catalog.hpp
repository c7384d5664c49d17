#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "holdover/clock_sim.hpp"
#include "holdover/error_budget.hpp"

namespace holdover {

/// Figures published for a device: the two-year misalignment bound and the
/// maximum holdover periods for the 15 s and 165 s thresholds, in the units
/// of the table the device appears in (seconds/days/years for the TCXO
/// table, minutes/days/days for the CMOS table).
struct PublishedFigures {
    double bound = 0.0;
    double t_r_max_15 = 0.0;
    double t_r_max_165 = 0.0;
    bool t_r_max_165_published = true;  // false: no published value, computed here
};

struct CatalogEntry {
    OscillatorSpec spec;
    int table = 0;  // 2 = TCXO survey, 3 = CMOS survey, 0 = user-provided
    std::optional<PublishedFigures> published;
    /// Unique lookup name: the model, or model@<grade>ppm when one model
    /// ships in several temperature grades.
    std::string display_name;
};

/// Parses the line-oriented `key = value` spec-file grammar. Entries are
/// separated by blank lines; every numeric value carries a unit token.
/// Errors cite the offending line.
std::vector<OscillatorSpec> parse_spec_text(const std::string& text);

/// Inverse of parse_spec_text: re-parsing the output reproduces the specs
/// field for field.
std::string render_spec_file(std::span<const OscillatorSpec> specs);

std::vector<CatalogEntry> catalog_from_text(const std::string& text);

/// Built-in survey: 15 TCXO parts and 11 CMOS RTC parts with their
/// published figures.
const std::vector<CatalogEntry>& embedded_catalog();

/// Entries whose model or display name equals `name`.
std::vector<const CatalogEntry*> find_devices(const std::vector<CatalogEntry>& catalog,
                                              const std::string& name);

enum class ReportFormat { Csv, Markdown };

/// Evaluation report: one row per device with the bound, its per-source
/// breakdown and one maximum-holdover/suitability pair per threshold.
std::string render_report(std::span<const OscillatorSpec> specs,
                          std::span<const BoundResult> results, ReportFormat format);

struct TableCellCheck {
    double computed = 0.0;
    std::optional<double> published;
    bool pass = true;
};

struct TableRowCheck {
    const CatalogEntry* entry = nullptr;
    TableCellCheck bound;
    TableCellCheck t_r_max_15;
    TableCellCheck t_r_max_165;
    bool pass = true;
    std::string notes;
};

/// Recomputes one embedded table (holdover 2 years, thresholds 15 s and
/// 165 s) and compares every cell against its published figure within
/// +-0.01 of the table's printed unit.
std::vector<TableRowCheck> check_table(int table);

bool all_rows_pass(const std::vector<TableRowCheck>& rows);

std::string render_table_report(int table, ReportFormat format);

/// Scenario files reuse the spec-file grammar plus `scenario.*` keys.
struct ParsedScenario {
    ScenarioConfig config;
    std::vector<OscillatorSpec> specs;
};

ParsedScenario parse_scenario_text(const std::string& text);

} // namespace holdover
