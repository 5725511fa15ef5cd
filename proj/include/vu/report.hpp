#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "vu/metrics.hpp"
#include "vu/model.hpp"
#include "vu/semantic.hpp"
#include "vu/serialize.hpp"
#include "vu/store.hpp"

namespace vu::report {

enum class ReportKind { Metrics, Semantic, Demographics, Histogram };

std::string_view to_string(ReportKind kind);
ReportKind parse_report_kind(std::string_view text);  // throws BadRequest

using Cell = std::variant<std::monostate, std::int64_t, std::string>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    bool operator==(const Table&) const = default;
};

struct ReportDocument {
    ReportKind kind = ReportKind::Metrics;
    GroupView group = GroupView::General;
    std::string status = "ok";  // "ok" | "insufficient_data"
    std::optional<std::int64_t> generated_at;
    std::map<std::string, std::string> parameters;
    std::vector<std::string> notes;
    std::vector<Table> tables;

    const Table* find_table(const std::string& name) const;

    // generated_at is not part of the body.
    bool operator==(const ReportDocument& o) const {
        return kind == o.kind && group == o.group && status == o.status &&
               parameters == o.parameters && notes == o.notes && tables == o.tables;
    }
};

struct ReportOptions {
    GroupView group = GroupView::General;
    int k = 3;
    metrics::BlankPolicy policy = metrics::BlankPolicy::ExcludeFromT;
    int threshold = metrics::kDefaultDivergenceThreshold;
    std::set<std::string> highlighted;
    const semantic::Lexicon* lexicon = nullptr;  // starter lexicon when null
};

/// Computes a report from a snapshot. Studies without the data a report
/// needs produce status "insufficient_data" rather than an exception.
ReportDocument build_report(const store::StudySnapshot& snapshot, ReportKind kind,
                            const ReportOptions& options = {});

json to_json(const ReportDocument& doc);
ReportDocument report_from_json(const json& j);

std::string render_json(const ReportDocument& doc);
/// "# key: value" metadata lines, then one block per table introduced by
/// "# table: <name>". Strings are always quoted, integers never, nulls are
/// empty and unquoted, so parse_csv restores the exact cell types.
std::string render_csv(const ReportDocument& doc);
ReportDocument parse_csv(const std::string& text);
std::string render_text(const ReportDocument& doc);

enum class RenderFormat { Json, Csv, Text };

RenderFormat parse_render_format(std::string_view text);  // json | csv | text
std::string render(const ReportDocument& doc, RenderFormat format);

}  // namespace vu::report
