#include "holdover/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "holdover/units.hpp"

namespace holdover {

namespace {

using units::format_double;
using units::format_fixed;

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void fail_at(int line, Errc code, const std::string& message)
{
    fail(code, "line " + std::to_string(line) + ": " + message);
}

template <typename F>
auto at_line(int line, F&& f)
{
    try {
        return f();
    } catch (const Error& e) {
        fail_at(line, e.code(), e.what());
    }
}

double parse_bare_number(std::string_view text, int line, const char* what)
{
    std::string_view s = trim(text);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        fail_at(line, Errc::parse,
                std::string("malformed ") + what + " number '" + std::string(s) + "'");
    return v;
}

// "<min>..<max>" with the unit expected on the right-hand side only.
std::pair<double, double> parse_range(std::string_view text, int line,
                                      double (*parse_rhs)(std::string_view), const char* what)
{
    auto pos = text.find("..");
    if (pos == std::string_view::npos)
        fail_at(line, Errc::parse, std::string("expected '<min>..<max>' in ") + what);
    double lo = parse_bare_number(text.substr(0, pos), line, what);
    double hi = at_line(line, [&] { return parse_rhs(text.substr(pos + 2)); });
    return {lo, hi};
}

bool parse_bool(std::string_view text, int line, const char* what)
{
    std::string_view s = trim(text);
    if (s == "true") return true;
    if (s == "false") return false;
    fail_at(line, Errc::parse, std::string(what) + " must be 'true' or 'false', got '" +
                                   std::string(s) + "'");
}

struct KeyValue {
    std::string value;
    int line;
};

struct RawEntry {
    int start_line = 0;
    std::map<std::string, KeyValue> keys;
};

TemperatureModel parse_temp_model(std::string_view text, int line)
{
    std::string_view s = trim(text);
    auto space = s.find(' ');
    std::string_view kind = space == std::string_view::npos ? s : s.substr(0, space);
    std::string_view rest = space == std::string_view::npos ? std::string_view{} : trim(s.substr(space + 1));

    TemperatureModel m;
    if (kind == "const") {
        m.kind = TempModelKind::ConstantBound;
        m.y_temp = at_line(line, [&] { return units::parse_accuracy(rest); });
        if (m.y_temp < 0.0)
            fail_at(line, Errc::parse, "constant temperature bound must be non-negative");
        return m;
    }
    auto at_pos = rest.find(" at ");
    if (kind == "linear") {
        m.kind = TempModelKind::Linear;
        std::string_view coeff = at_pos == std::string_view::npos ? rest : rest.substr(0, at_pos);
        m.slope_per_c = at_line(line, [&] { return units::parse_per_c(coeff); });
        if (at_pos != std::string_view::npos)
            m.x0_c = at_line(line, [&] { return units::parse_temperature_c(rest.substr(at_pos + 4)); });
        return m;
    }
    if (kind == "parabolic") {
        m.kind = TempModelKind::Parabolic;
        if (at_pos == std::string_view::npos)
            fail_at(line, Errc::parse,
                    "parabolic model needs a calibration point: 'parabolic <A> ppm_per_C2 at <x0> C'");
        m.a_per_c2 = at_line(line, [&] { return units::parse_per_c2(rest.substr(0, at_pos)); });
        m.x0_c = at_line(line, [&] { return units::parse_temperature_c(rest.substr(at_pos + 4)); });
        return m;
    }
    fail_at(line, Errc::parse, "unknown temperature model '" + std::string(kind) +
                                   "' (expected const, linear or parabolic)");
}

OscillatorSpec finalize_entry(const RawEntry& raw)
{
    auto get = [&](const char* key) -> const KeyValue* {
        auto it = raw.keys.find(key);
        return it == raw.keys.end() ? nullptr : &it->second;
    };
    auto require = [&](const char* key) -> const KeyValue& {
        const KeyValue* kv = get(key);
        if (!kv)
            fail_at(raw.start_line, Errc::parse,
                    std::string("entry is missing the mandatory key '") + key + "'");
        return *kv;
    };

    static const std::set<std::string> known = {
        "manufacturer", "model", "class", "temp_range", "temp_model", "y_age",
        "aging_included", "k_vib", "a_max", "y_supp", "y_calib", "y_grav", "f0"};
    for (const auto& [key, kv] : raw.keys)
        if (!known.count(key))
            fail_at(kv.line, Errc::parse, "unknown key '" + key + "'");

    OscillatorSpec spec;
    spec.manufacturer = require("manufacturer").value;
    spec.model = require("model").value;
    {
        const KeyValue& kv = require("class");
        spec.osc_class = at_line(kv.line, [&] { return osc_class_from_string(kv.value); });
    }
    {
        const KeyValue& kv = require("temp_range");
        auto [lo, hi] = parse_range(kv.value, kv.line, units::parse_temperature_c, "temp_range");
        if (lo >= hi)
            fail_at(kv.line, Errc::parse,
                    "temp_range minimum " + format_double(lo) + " C is not below the maximum " +
                        format_double(hi) + " C");
        spec.temperature.x_min_c = lo;
        spec.temperature.x_max_c = hi;
    }
    {
        const KeyValue& kv = require("temp_model");
        TemperatureModel parsed = parse_temp_model(kv.value, kv.line);
        parsed.x_min_c = spec.temperature.x_min_c;
        parsed.x_max_c = spec.temperature.x_max_c;
        if (parsed.kind == TempModelKind::ConstantBound)
            parsed.x0_c = std::clamp(25.0, parsed.x_min_c, parsed.x_max_c);
        spec.temperature = parsed;
    }
    if (const KeyValue* kv = get("aging_included"))
        spec.aging.included_in_accuracy = parse_bool(kv->value, kv->line, "aging_included");
    if (const KeyValue* kv = get("y_age")) {
        auto at_pos = kv->value.find('@');
        if (at_pos == std::string::npos)
            fail_at(kv->line, Errc::parse, "y_age needs a horizon: '<value> ppm @ <duration>'");
        spec.aging.y_age_at_tdata =
            at_line(kv->line, [&] { return units::parse_accuracy(kv->value.substr(0, at_pos)); });
        spec.aging.t_data_s =
            at_line(kv->line, [&] { return units::parse_duration(kv->value.substr(at_pos + 1)); });
        if (!(spec.aging.t_data_s > 0.0))
            fail_at(kv->line, Errc::parse, "y_age horizon must be positive");
    } else if (!spec.aging.included_in_accuracy) {
        fail_at(raw.start_line, Errc::parse,
                "entry is missing the mandatory key 'y_age' (or set aging_included = true)");
    } else {
        spec.aging.t_data_s = units::seconds_per_year;
    }
    if (const KeyValue* kv = get("k_vib"))
        spec.minor.k_per_g = at_line(kv->line, [&] { return units::parse_per_g(kv->value); });
    if (const KeyValue* kv = get("a_max"))
        spec.minor.a_max_g = at_line(kv->line, [&] { return units::parse_acceleration_g(kv->value); });
    if (const KeyValue* kv = get("y_supp"))
        spec.minor.y_supp = at_line(kv->line, [&] { return units::parse_accuracy(kv->value); });
    if (const KeyValue* kv = get("y_calib"))
        spec.minor.y_calib = at_line(kv->line, [&] { return units::parse_accuracy(kv->value); });
    if (const KeyValue* kv = get("y_grav"))
        spec.minor.y_grav = at_line(kv->line, [&] { return units::parse_accuracy(kv->value); });
    if (const KeyValue* kv = get("f0"))
        spec.f0_hz = at_line(kv->line, [&] { return units::parse_frequency_hz(kv->value); });

    at_line(raw.start_line, [&] { validate(spec); return 0; });
    return spec;
}

struct ParsedFile {
    std::vector<OscillatorSpec> specs;
    std::vector<int> entry_lines;
    std::map<std::string, KeyValue> scenario_keys;
};

ParsedFile parse_file(const std::string& text)
{
    ParsedFile out;
    RawEntry current;
    std::set<std::tuple<std::string, std::string, double>> seen;

    auto flush = [&] {
        if (current.keys.empty()) {
            current = RawEntry{};
            return;
        }
        OscillatorSpec spec = finalize_entry(current);
        auto key = std::make_tuple(spec.manufacturer, spec.model,
                                   worst_case_temp_accuracy(spec.temperature));
        if (!seen.insert(key).second)
            fail_at(current.start_line, Errc::parse,
                    "duplicate entry for " + spec.manufacturer + " " + spec.model +
                        " with the same temperature grade");
        out.specs.push_back(std::move(spec));
        out.entry_lines.push_back(current.start_line);
        current = RawEntry{};
    };

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        std::string_view line(text.data() + pos,
                              (nl == std::string::npos ? text.size() : nl) - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        auto hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        std::string_view s = trim(line);
        if (s.empty()) {
            flush();
            continue;
        }
        auto eq = s.find('=');
        if (eq == std::string_view::npos)
            fail_at(line_no, Errc::parse, "expected 'key = value', got '" + std::string(s) + "'");
        std::string key(trim(s.substr(0, eq)));
        std::string value(trim(s.substr(eq + 1)));
        if (key.empty()) fail_at(line_no, Errc::parse, "empty key");

        if (key.rfind("scenario.", 0) == 0) {
            if (!out.scenario_keys.emplace(key, KeyValue{value, line_no}).second)
                fail_at(line_no, Errc::parse, "duplicate key '" + key + "'");
            continue;
        }
        if (current.keys.empty()) current.start_line = line_no;
        if (!current.keys.emplace(key, KeyValue{value, line_no}).second)
            fail_at(line_no, Errc::parse, "duplicate key '" + key + "' within the entry");
    }
    flush();
    return out;
}

} // namespace

std::vector<OscillatorSpec> parse_spec_text(const std::string& text)
{
    ParsedFile parsed = parse_file(text);
    if (!parsed.scenario_keys.empty())
        fail_at(parsed.scenario_keys.begin()->second.line, Errc::parse,
                "scenario keys are not allowed in a plain spec file");
    return std::move(parsed.specs);
}

std::string render_spec_file(std::span<const OscillatorSpec> specs)
{
    std::string out;
    bool first = true;
    for (const OscillatorSpec& spec : specs) {
        if (!first) out += '\n';
        first = false;
        out += "manufacturer = " + spec.manufacturer + '\n';
        out += "model = " + spec.model + '\n';
        out += std::string("class = ") + to_string(spec.osc_class) + '\n';
        out += "temp_range = " + format_double(spec.temperature.x_min_c) + ".." +
               format_double(spec.temperature.x_max_c) + " C\n";
        switch (spec.temperature.kind) {
        case TempModelKind::ConstantBound:
            out += "temp_model = const " + format_double(units::to_ppm(spec.temperature.y_temp)) +
                   " ppm\n";
            break;
        case TempModelKind::Linear:
            out += "temp_model = linear " +
                   format_double(spec.temperature.slope_per_c / units::ppb) + " ppb_per_C at " +
                   format_double(spec.temperature.x0_c) + " C\n";
            break;
        case TempModelKind::Parabolic:
            out += "temp_model = parabolic " +
                   format_double(units::to_ppm(spec.temperature.a_per_c2)) + " ppm_per_C2 at " +
                   format_double(spec.temperature.x0_c) + " C\n";
            break;
        }
        if (spec.aging.y_age_at_tdata != 0.0 || !spec.aging.included_in_accuracy) {
            std::string horizon;
            double t = spec.aging.t_data_s;
            if (std::fmod(t, units::seconds_per_year) == 0.0)
                horizon = format_double(t / units::seconds_per_year) + " year";
            else if (std::fmod(t, units::seconds_per_day) == 0.0)
                horizon = format_double(t / units::seconds_per_day) + " d";
            else
                horizon = format_double(t) + " s";
            out += "y_age = " + format_double(units::to_ppm(spec.aging.y_age_at_tdata)) +
                   " ppm @ " + horizon + '\n';
        }
        if (spec.aging.included_in_accuracy) out += "aging_included = true\n";
        if (spec.minor.k_per_g != 0.0)
            out += "k_vib = " + format_double(spec.minor.k_per_g / units::ppb) + " ppb_per_g\n";
        if (spec.minor.a_max_g != 0.0)
            out += "a_max = " + format_double(spec.minor.a_max_g) + " g\n";
        if (spec.minor.y_supp != 0.0)
            out += "y_supp = " + format_double(units::to_ppm(spec.minor.y_supp)) + " ppm\n";
        if (spec.minor.y_calib != 0.0)
            out += "y_calib = " + format_double(units::to_ppm(spec.minor.y_calib)) + " ppm\n";
        if (spec.minor.y_grav != 0.0)
            out += "y_grav = " + format_double(units::to_ppm(spec.minor.y_grav)) + " ppm\n";
        if (spec.f0_hz != 0.0) out += "f0 = " + format_double(spec.f0_hz) + " Hz\n";
    }
    return out;
}

namespace {

void assign_display_names(std::vector<CatalogEntry>& entries)
{
    std::map<std::string, int> model_count;
    for (const auto& e : entries) ++model_count[e.spec.model];
    for (auto& e : entries) {
        if (model_count[e.spec.model] > 1)
            e.display_name = e.spec.model + "@" +
                             format_double(units::to_ppm(worst_case_temp_accuracy(e.spec.temperature))) +
                             "ppm";
        else
            e.display_name = e.spec.model;
    }
}

struct EmbeddedRow {
    int table;
    const char* manufacturer;
    const char* model;
    OscClass osc_class;
    double x_min_c, x_max_c;
    double y_temp_ppm;
    double y_age_ppm;  // still listed for aging-included parts; 0 = not listed
    bool aging_included;
    double bound;      // table 2: seconds; table 3: minutes
    double tr15;       // days
    double tr165;      // table 2: years; table 3: days
    bool tr165_published;
};

// Published survey figures: the two-year misalignment bound and the maximum
// holdover for the 15 s and 165 s thresholds, as printed by the vendors'
// datasheet survey.
constexpr EmbeddedRow kEmbedded[] = {
    {2, "SEIKO EPSON", "TG-5035CJ", OscClass::TCXO, -40, 105, 0.5, 1, false, 110.38, 115.74, 2.62, true},
    {2, "SEIKO EPSON", "TG2016SMN", OscClass::TCXO, -40, 90, 0.5, 0.5, false, 70.96, 173.61, 3.57, true},
    {2, "SEIKO EPSON", "TG2016SLN", OscClass::TCXO, -40, 85, 0.5, 1, false, 110.38, 115.74, 2.62, true},
    {2, "SEIKO EPSON", "TG-5006CJ", OscClass::TCXO, -30, 85, 0.5, 1, false, 110.38, 115.74, 2.62, true},
    {2, "SEIKO EPSON", "TG2016SKA", OscClass::TCXO, -40, 105, 0.5, 1, false, 110.38, 115.74, 2.62, true},
    {2, "VECTRON", "VT-803", OscClass::TCXO, -40, 85, 1, 0.5, false, 102.49, 115.74, 2.89, true},
    {2, "VECTRON", "VT-706", OscClass::TCXO, -40, 85, 0.5, 1, false, 110.38, 115.74, 2.62, true},
    {2, "VECTRON", "VT-702", OscClass::TCXO, -40, 85, 0.5, 1, false, 110.38, 115.74, 2.62, true},
    {2, "VECTRON", "VT-804", OscClass::TCXO, -40, 85, 2, 1, false, 204.98, 57.87, 1.67, true},
    {2, "NDK", "NT2520SE", OscClass::TCXO, -40, 105, 0.5, 1, false, 110.38, 115.74, 2.62, true},
    {2, "NDK", "NT1612AA", OscClass::TCXO, -30, 85, 0.5, 1, false, 110.38, 115.74, 2.62, true},
    {2, "NDK", "NT1612AJA", OscClass::TCXO, -30, 85, 0.5, 1, false, 110.38, 115.74, 2.62, true},
    {2, "NDK", "NT2016SA", OscClass::TCXO, -30, 85, 0.5, 1, false, 110.38, 115.74, 2.62, true},
    {2, "Maxim Integrated", "DS3231", OscClass::TCXO, -40, 85, 3.5, 1, false, 299.59, 38.58, 1.16, true},
    {2, "Micro Crystal Switzerland", "RV-8803-C7", OscClass::TCXO, -40, 85, 3, 3, false, 425.73, 28.94, 0.87, true},

    {3, "MICREL", "DSC1003", OscClass::CMOS, -40, 105, 10, 5, false, 17.08, 11.57, 127.31, true},
    {3, "MICREL", "DSC1003", OscClass::CMOS, -40, 105, 25, 5, false, 32.85, 5.78, 63.66, true},
    {3, "MICREL", "DSC1003", OscClass::CMOS, -40, 105, 50, 5, false, 59.13, 3.16, 34.72, true},
    {3, "TXC", "7X", OscClass::CMOS, -40, 85, 20, 3, true, 21.02, 8.68, 95.49, true},
    {3, "TXC", "7X", OscClass::CMOS, -40, 85, 25, 3, true, 26.28, 6.94, 76.39, true},
    {3, "TXC", "7X", OscClass::CMOS, -40, 85, 50, 3, true, 52.56, 3.47, 38.19, true},
    {3, "TXC", "7C", OscClass::CMOS, -40, 85, 15, 3, true, 15.76, 11.57, 127.31, true},
    {3, "TXC", "7C", OscClass::CMOS, -40, 85, 25, 3, true, 26.28, 6.94, 76.39, true},
    {3, "TXC", "7C", OscClass::CMOS, -40, 85, 30, 3, true, 31.52, 5.79, 63.66, true},
    {3, "TXC", "7C", OscClass::CMOS, -40, 85, 50, 3, true, 52.56, 3.47, 38.19, true},
    // Aging column published as "/" and the 165 s cell left blank; modeled as
    // aging folded into the 50 ppm figure with no separate term.
    {3, "ECS", "ECS-327ATQ2016MV", OscClass::CMOS, -40, 125, 50, 0, true, 52.56, 3.47, 38.19, false},
};

} // namespace

std::vector<CatalogEntry> catalog_from_text(const std::string& text)
{
    std::vector<CatalogEntry> entries;
    for (OscillatorSpec& spec : parse_spec_text(text))
        entries.push_back(CatalogEntry{std::move(spec), 0, std::nullopt, {}});
    assign_display_names(entries);
    return entries;
}

const std::vector<CatalogEntry>& embedded_catalog()
{
    static const std::vector<CatalogEntry> catalog = [] {
        std::vector<CatalogEntry> entries;
        for (const EmbeddedRow& row : kEmbedded) {
            CatalogEntry e;
            e.spec.manufacturer = row.manufacturer;
            e.spec.model = row.model;
            e.spec.osc_class = row.osc_class;
            e.spec.temperature.kind = TempModelKind::ConstantBound;
            e.spec.temperature.y_temp = units::from_ppm(row.y_temp_ppm);
            e.spec.temperature.x_min_c = row.x_min_c;
            e.spec.temperature.x_max_c = row.x_max_c;
            e.spec.temperature.x0_c = 25.0;
            e.spec.aging.y_age_at_tdata = units::from_ppm(row.y_age_ppm);
            e.spec.aging.t_data_s = units::seconds_per_year;
            e.spec.aging.included_in_accuracy = row.aging_included;
            e.table = row.table;
            e.published = PublishedFigures{row.bound, row.tr15, row.tr165, row.tr165_published};
            validate(e.spec);
            entries.push_back(std::move(e));
        }
        assign_display_names(entries);
        return entries;
    }();
    return catalog;
}

std::vector<const CatalogEntry*> find_devices(const std::vector<CatalogEntry>& catalog,
                                              const std::string& name)
{
    std::vector<const CatalogEntry*> out;
    for (const CatalogEntry& e : catalog)
        if (e.display_name == name || e.spec.model == name) out.push_back(&e);
    return out;
}

namespace {

std::string md_row(const std::vector<std::string>& cells)
{
    std::string out = "|";
    for (const auto& c : cells) out += " " + c + " |";
    out += '\n';
    return out;
}

std::string md_separator(std::size_t n)
{
    std::string out = "|";
    for (std::size_t i = 0; i < n; ++i) out += " --- |";
    out += '\n';
    return out;
}

std::string csv_cell(const std::string& cell)
{
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string quoted = "\"";
    for (char c : cell) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string csv_row(const std::vector<std::string>& cells)
{
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += csv_cell(cells[i]);
    }
    out += '\n';
    return out;
}

std::string tl_label(double tl_s)
{
    return format_double(tl_s) + "s";
}

} // namespace

std::string render_report(std::span<const OscillatorSpec> specs,
                          std::span<const BoundResult> results, ReportFormat format)
{
    if (specs.size() != results.size())
        fail(Errc::invalid_argument, "one result per spec required");

    std::vector<std::string> header = {"manufacturer", "model",      "class",
                                       "x_min_C",      "x_max_C",    "y_temp_ppm",
                                       "y_age_ppm",    "aging_included", "t_reset_s",
                                       "B_s",          "temp_s",     "aging_s",
                                       "minor_s"};
    std::size_t n_tl = results.empty() ? 0 : results.front().verdicts.size();
    for (std::size_t j = 0; j < n_tl; ++j) {
        std::string label = results.empty() ? std::to_string(j)
                                            : tl_label(results.front().verdicts[j].t_loose_s);
        header.push_back("t_r_max_s[tl=" + label + "]");
        header.push_back("t_r_max[tl=" + label + "]");
        header.push_back("suitable[tl=" + label + "]");
    }

    std::string out;
    if (format == ReportFormat::Markdown) {
        out += md_row(header);
        out += md_separator(header.size());
    } else {
        out += csv_row(header);
    }

    for (std::size_t i = 0; i < specs.size(); ++i) {
        const OscillatorSpec& s = specs[i];
        const BoundResult& r = results[i];
        std::vector<std::string> cells = {
            s.manufacturer,
            s.model,
            to_string(s.osc_class),
            format_double(s.temperature.x_min_c),
            format_double(s.temperature.x_max_c),
            format_double(units::to_ppm(worst_case_temp_accuracy(s.temperature))),
            format_double(units::to_ppm(s.aging.y_age_at_tdata)),
            s.aging.included_in_accuracy ? "true" : "false",
            format_double(r.t_reset_s),
            format_fixed(r.bound_s, 2),
            format_fixed(r.breakdown.temperature_s, 2),
            format_fixed(r.breakdown.aging_s, 2),
            format_fixed(r.breakdown.minor_s, 2),
        };
        for (const TlVerdict& v : r.verdicts) {
            cells.push_back(std::isinf(v.t_r_max_s) ? "inf" : format_fixed(v.t_r_max_s, 2));
            cells.push_back(units::format_duration(v.t_r_max_s));
            cells.push_back(v.suitable ? "yes" : "NO");
        }
        out += format == ReportFormat::Markdown ? md_row(cells) : csv_row(cells);
    }
    return out;
}

std::vector<TableRowCheck> check_table(int table)
{
    if (table != 2 && table != 3)
        fail(Errc::invalid_argument, "no such table: " + std::to_string(table) +
                                         " (the embedded survey has tables 2 and 3)");

    const double t_reset = 2.0 * units::seconds_per_year;
    const double tls[2] = {15.0, 165.0};
    const double tol = 0.01 + 1e-9;

    std::vector<TableRowCheck> rows;
    for (const CatalogEntry& entry : embedded_catalog()) {
        if (entry.table != table) continue;
        BoundResult r = evaluate(entry.spec, t_reset, tls);

        TableRowCheck row;
        row.entry = &entry;
        row.bound.computed = table == 2 ? r.bound_s : r.bound_s / units::seconds_per_minute;
        row.t_r_max_15.computed = r.verdicts[0].t_r_max_s / units::seconds_per_day;
        row.t_r_max_165.computed = table == 2
                                       ? r.verdicts[1].t_r_max_s / units::seconds_per_year
                                       : r.verdicts[1].t_r_max_s / units::seconds_per_day;

        const PublishedFigures& pub = *entry.published;
        row.bound.published = pub.bound;
        row.t_r_max_15.published = pub.t_r_max_15;
        if (pub.t_r_max_165_published) row.t_r_max_165.published = pub.t_r_max_165;

        const char* unit_b = table == 2 ? " s" : " min";
        const char* unit_165 = table == 2 ? " years" : " days";
        auto check_cell = [&](TableCellCheck& cell, const char* name, const char* unit) {
            if (!cell.published) return;
            cell.pass = std::fabs(cell.computed - *cell.published) <= tol;
            if (!cell.pass) {
                if (!row.notes.empty()) row.notes += "; ";
                row.notes += std::string(name) + " computed " + format_fixed(cell.computed, 2) +
                             unit + " vs published " + format_fixed(*cell.published, 2) + unit;
            }
        };
        check_cell(row.bound, "B", unit_b);
        check_cell(row.t_r_max_15, "T_R,max(15 s)", " days");
        check_cell(row.t_r_max_165, "T_R,max(165 s)", unit_165);
        if (!pub.t_r_max_165_published) {
            if (!row.notes.empty()) row.notes += "; ";
            row.notes += "T_R,max(165 s) = " + format_fixed(row.t_r_max_165.computed, 2) + unit_165 +
                         " computed here, no published figure";
        }
        row.pass = row.bound.pass && row.t_r_max_15.pass && row.t_r_max_165.pass;
        rows.push_back(std::move(row));
    }
    return rows;
}

bool all_rows_pass(const std::vector<TableRowCheck>& rows)
{
    return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.pass; });
}

std::string render_table_report(int table, ReportFormat format)
{
    std::vector<TableRowCheck> rows = check_table(table);

    const char* b_head = table == 2 ? "B_s" : "B_min";
    const char* tr165_head = table == 2 ? "t_r_max_165s_years" : "t_r_max_165s_days";
    std::vector<std::string> header = {"manufacturer", "model", "x_min_C", "x_max_C",
                                       "y_temp_ppm", "y_age_ppm", "aging_included",
                                       b_head, "B_published",
                                       "t_r_max_15s_days", "t_r_max_15s_published",
                                       tr165_head, "t_r_max_165s_published",
                                       "check", "notes"};

    std::string out;
    if (format == ReportFormat::Markdown) {
        out += md_row(header);
        out += md_separator(header.size());
    } else {
        out += csv_row(header);
    }

    for (const TableRowCheck& row : rows) {
        const OscillatorSpec& s = row.entry->spec;
        auto published_or_blank = [](const TableCellCheck& c) {
            return c.published ? format_fixed(*c.published, 2) : std::string("-");
        };
        std::vector<std::string> cells = {
            s.manufacturer,
            s.model,
            format_double(s.temperature.x_min_c),
            format_double(s.temperature.x_max_c),
            format_double(units::to_ppm(worst_case_temp_accuracy(s.temperature))),
            s.aging.y_age_at_tdata > 0.0 ? format_double(units::to_ppm(s.aging.y_age_at_tdata))
                                         : std::string("-"),
            s.aging.included_in_accuracy ? "true" : "false",
            format_fixed(row.bound.computed, 2),
            published_or_blank(row.bound),
            format_fixed(row.t_r_max_15.computed, 2),
            published_or_blank(row.t_r_max_15),
            format_fixed(row.t_r_max_165.computed, 2),
            published_or_blank(row.t_r_max_165),
            row.pass ? "PASS" : "FAIL",
            row.notes,
        };
        out += format == ReportFormat::Markdown ? md_row(cells) : csv_row(cells);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Scenario files

namespace {

TemperatureProfile parse_profile(const std::string& text, int line)
{
    std::string_view s = trim(text);
    auto space = s.find(' ');
    std::string_view kind = space == std::string_view::npos ? s : s.substr(0, space);
    std::string_view rest = space == std::string_view::npos ? std::string_view{} : trim(s.substr(space + 1));

    if (kind == "constant") {
        double x = at_line(line, [&] { return units::parse_temperature_c(rest); });
        return TemperatureProfile(ConstantTemp{x});
    }
    if (kind == "ramp") {
        auto over = rest.find(" over ");
        if (over == std::string_view::npos)
            fail_at(line, Errc::parse, "ramp profile: 'ramp <a>..<b> C over <duration>'");
        auto [a, b] = parse_range(rest.substr(0, over), line, units::parse_temperature_c, "ramp");
        double dur = at_line(line, [&] { return units::parse_duration(rest.substr(over + 6)); });
        return TemperatureProfile(RampTemp{a, b, dur});
    }
    if (kind == "diurnal") {
        auto amp_pos = rest.find(" amplitude ");
        auto per_pos = rest.find(" period ");
        if (rest.rfind("mean ", 0) != 0 || amp_pos == std::string_view::npos ||
            per_pos == std::string_view::npos || per_pos < amp_pos)
            fail_at(line, Errc::parse,
                    "diurnal profile: 'diurnal mean <x> C amplitude <a> C period <duration>'");
        double mean = at_line(line, [&] {
            return units::parse_temperature_c(rest.substr(5, amp_pos - 5));
        });
        double amp = at_line(line, [&] {
            return units::parse_temperature_c(rest.substr(amp_pos + 11, per_pos - amp_pos - 11));
        });
        double period = at_line(line, [&] { return units::parse_duration(rest.substr(per_pos + 8)); });
        return TemperatureProfile(DiurnalTemp{mean, amp, period});
    }
    if (kind == "cycling") {
        auto dwell_pos = rest.find(" dwell ");
        if (dwell_pos == std::string_view::npos)
            fail_at(line, Errc::parse, "cycling profile: 'cycling <hi>..<lo> C dwell <duration>'");
        auto [hi, lo] = parse_range(rest.substr(0, dwell_pos), line, units::parse_temperature_c,
                                    "cycling");
        double dwell = at_line(line, [&] { return units::parse_duration(rest.substr(dwell_pos + 7)); });
        return TemperatureProfile(CyclingTemp{hi, lo, dwell});
    }
    fail_at(line, Errc::parse, "unknown profile '" + std::string(kind) +
                                   "' (expected constant, ramp, diurnal or cycling)");
}

DutySchedule parse_duty(const std::string& text, int line)
{
    std::string_view s = trim(text);
    if (s == "always_on") return DutySchedule::always_on();
    if (s == "always_off") return DutySchedule::always_off();

    std::vector<std::pair<double, double>> intervals;
    std::size_t pos = 0;
    while (pos < s.size()) {
        auto comma = s.find(',', pos);
        std::string_view item = trim(s.substr(pos, (comma == std::string_view::npos ? s.size() : comma) - pos));
        pos = comma == std::string_view::npos ? s.size() : comma + 1;
        auto dots = item.find("..");
        if (dots == std::string_view::npos)
            fail_at(line, Errc::parse,
                    "duty interval '" + std::string(item) + "' must be '<duration>..<duration>'");
        double a = at_line(line, [&] { return units::parse_duration(item.substr(0, dots)); });
        double b = at_line(line, [&] { return units::parse_duration(item.substr(dots + 2)); });
        intervals.emplace_back(a, b);
    }
    return at_line(line, [&] { return DutySchedule::intervals(std::move(intervals)); });
}

const OscillatorSpec* resolve_model(const std::vector<OscillatorSpec>& specs,
                                    const std::string& name, int line)
{
    const OscillatorSpec* found = nullptr;
    for (const OscillatorSpec& s : specs) {
        if (s.model == name) {
            if (found)
                fail_at(line, Errc::parse,
                        "model '" + name + "' is ambiguous in this file (several grades)");
            found = &s;
        }
    }
    if (!found) fail_at(line, Errc::not_found, "no oscillator entry named '" + name + "'");
    return found;
}

} // namespace

ParsedScenario parse_scenario_text(const std::string& text)
{
    ParsedFile parsed = parse_file(text);
    auto& keys = parsed.scenario_keys;

    auto take = [&](const char* key) -> std::optional<KeyValue> {
        auto it = keys.find(key);
        if (it == keys.end()) return std::nullopt;
        KeyValue kv = it->second;
        keys.erase(it);
        return kv;
    };
    auto require = [&](const char* key) -> KeyValue {
        auto kv = take(key);
        if (!kv) fail(Errc::parse, std::string("scenario is missing the key '") + key + "'");
        return *kv;
    };

    if (parsed.specs.empty())
        fail(Errc::parse, "scenario file has no oscillator entries");

    ParsedScenario out;
    out.specs = std::move(parsed.specs);
    ScenarioConfig& cfg = out.config;

    {
        KeyValue kv = require("scenario.mode");
        if (kv.value == "high_power") cfg.mode = PowerMode::HighPower;
        else if (kv.value == "power_limited") cfg.mode = PowerMode::PowerLimited;
        else
            fail_at(kv.line, Errc::parse,
                    "scenario.mode must be high_power or power_limited, got '" + kv.value + "'");
    }
    {
        KeyValue kv = require("scenario.profile");
        cfg.profile = parse_profile(kv.value, kv.line);
    }

    if (auto kv = take("scenario.primary")) {
        cfg.primary = *resolve_model(out.specs, kv->value, kv->line);
    } else if (cfg.mode == PowerMode::HighPower && out.specs.size() > 1) {
        fail(Errc::parse,
             "several oscillator entries present; pick one with scenario.primary = <model>");
    } else {
        cfg.primary = out.specs.front();
    }

    if (auto kv = take("scenario.secondary")) {
        if (cfg.mode == PowerMode::HighPower)
            fail_at(kv->line, Errc::parse, "a high-power scenario has no secondary clock");
        cfg.secondary = *resolve_model(out.specs, kv->value, kv->line);
    } else if (cfg.mode == PowerMode::PowerLimited) {
        if (out.specs.size() < 2)
            fail(Errc::parse,
                 "power-limited scenario needs a secondary oscillator entry (scenario.secondary)");
        cfg.secondary = out.specs[1];
    }

    if (auto kv = take("scenario.duty")) {
        if (cfg.mode == PowerMode::HighPower)
            fail_at(kv->line, Errc::parse, "duty schedules apply to power-limited scenarios only");
        cfg.duty = parse_duty(kv->value, kv->line);
    }

    if (auto kv = take("scenario.tl"))
        cfg.req.t_loose_s = at_line(kv->line, [&] { return units::parse_duration(kv->value); });
    if (auto kv = take("scenario.treset"))
        cfg.req.t_reset_s = at_line(kv->line, [&] { return units::parse_duration(kv->value); });

    if (auto kv = take("scenario.sample_step"))
        cfg.sample_step_s = at_line(kv->line, [&] { return units::parse_duration(kv->value); });
    else if (std::isfinite(cfg.req.t_loose_s))
        cfg.sample_step_s = cfg.req.t_loose_s / 10.0;
    else
        fail(Errc::parse, "scenario needs a sample_step (or a tl to derive one from)");

    if (auto kv = take("scenario.seed"))
        cfg.seed = static_cast<std::uint64_t>(parse_bare_number(kv->value, kv->line, "seed"));
    if (auto kv = take("scenario.aging_fit")) {
        if (kv->value == "linear") cfg.fit_kind = AgingFit::Kind::Linear;
        else if (kv->value == "log") cfg.fit_kind = AgingFit::Kind::Logarithmic;
        else fail_at(kv->line, Errc::parse, "scenario.aging_fit must be linear or log");
    }
    if (auto kv = take("scenario.accuracy")) {
        if (kv->value == "modeled") cfg.accuracy = AccuracyMode::Modeled;
        else if (kv->value == "at_bound") cfg.accuracy = AccuracyMode::AtBound;
        else fail_at(kv->line, Errc::parse, "scenario.accuracy must be modeled or at_bound");
    }
    if (auto kv = take("scenario.temp_block"))
        cfg.temp_block_s = at_line(kv->line, [&] { return units::parse_duration(kv->value); });
    if (auto kv = take("scenario.aging_restart_on_reset"))
        cfg.aging_restart_on_reset = parse_bool(kv->value, kv->line, "scenario.aging_restart_on_reset");

    if (!keys.empty())
        fail_at(keys.begin()->second.line, Errc::parse,
                "unknown scenario key '" + keys.begin()->first + "'");
    return out;
}

} // namespace holdover
