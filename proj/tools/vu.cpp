// vu: batch front end over the study engine.
//
// Exit codes: 0 ok, 2 validation failure, 3 data error, 64 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "vu/design.hpp"
#include "vu/error.hpp"
#include "vu/fixture.hpp"
#include "vu/http.hpp"
#include "vu/report.hpp"
#include "vu/serialize.hpp"
#include "vu/service.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitData = 3;
constexpr int kExitUsage = 64;

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::filesystem::path data_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("VU_DATA_DIR"); env && *env) return env;
    return "vu-data";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw DataError("cannot write " + out_path);
    out << text;
}

void print_findings(const vu::design::ValidationReport& report, std::ostream& out) {
    for (const auto& f : report.findings) {
        out << vu::design::to_string(f.severity) << "  " << f.code << "  " << f.subject << ": " << f.message << "\n";
    }
    for (const auto& [k, v] : report.derived) out << "derived  " << k << " = " << v << "\n";
    out << (report.passed() ? "PASSED" : "FAILED") << " (" << report.count(vu::design::Severity::Error)
        << " errors, " << report.count(vu::design::Severity::Warning) << " warnings)\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Study definition validation, ingestion and reporting"};
    app.require_subcommand(1);
    std::string data_dir_flag;
    app.add_option("--data-dir", data_dir_flag, "Data directory (default $VU_DATA_DIR or ./vu-data)");

    // validate
    auto* validate = app.add_subcommand("validate", "Validate a study definition");
    std::string definition_path, captions_path, validate_format = "text";
    bool lenient = false;
    validate->add_option("definition", definition_path, "Study definition (JSON)")->required();
    validate->add_option("--captions", captions_path, "Caption file, one caption per line");
    validate->add_flag("--lenient", lenient, "Pipeline findings become warnings");
    validate->add_option("--format", validate_format, "text or json")->check(CLI::IsMember({"text", "json"}));

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Import participants and responses into a study");
    std::string study_id, ingest_definition, participants_path, responses_path, ingest_format = "csv";
    ingest->add_option("--study", study_id, "Study id")->required();
    ingest->add_option("--definition", ingest_definition, "Create the study from this definition if new");
    ingest->add_option("--participants", participants_path, "Participant file");
    ingest->add_option("--responses", responses_path, "Response file");
    ingest->add_option("--format", ingest_format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));

    // report
    auto* report = app.add_subcommand("report", "Compute a report");
    std::string kind, group = "general", policy = "exclude", format = "json", out_path, lexicon_path, highlight;
    int k = 3, threshold = vu::metrics::kDefaultDivergenceThreshold;
    bool timestamp = false;
    report->add_option("kind", kind, "metrics, semantic, demographics or histogram")
        ->required()
        ->check(CLI::IsMember({"metrics", "semantic", "demographics", "histogram"}));
    report->add_option("--study", study_id, "Study id")->required();
    report->add_option("--group", group, "general, local or foreign")
        ->check(CLI::IsMember({"general", "local", "foreign"}));
    report->add_option("--k", k, "Elements per area (semantic)")->check(CLI::PositiveNumber);
    report->add_option("--policy", policy, "Blank guesses: exclude or incorrect")
        ->check(CLI::IsMember({"exclude", "incorrect"}));
    report->add_option("--threshold", threshold, "Rank difference for divergence markers")->check(CLI::PositiveNumber);
    report->add_option("--highlight", highlight, "Comma-separated areas marked when aligned");
    report->add_option("--lexicon", lexicon_path, "Lexicon CSV (default: starter lexicon)");
    report->add_option("--format", format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    report->add_option("--out", out_path, "Output file (default stdout)");
    report->add_flag("--timestamp", timestamp, "Include generated_at");

    // export
    auto* exporter = app.add_subcommand("export", "Export participants or responses");
    std::string what = "responses", export_format = "csv";
    exporter->add_option("--study", study_id, "Study id")->required();
    exporter->add_option("what", what, "participants or responses")
        ->check(CLI::IsMember({"participants", "responses"}));
    exporter->add_option("--format", export_format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    exporter->add_option("--out", out_path, "Output file (default stdout)");

    // fixture
    auto* fixture = app.add_subcommand("fixture", "Write the reference dataset");
    std::string fixture_out;
    std::uint64_t seed = 1;
    fixture->add_option("--out", fixture_out, "Output directory")->required();
    fixture->add_option("--seed", seed, "Seed for labels and filler text");

    // serve
    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    std::string host = "127.0.0.1";
    int port = 8080;
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*validate) {
            vu::design::StudyDefinition def;
            try {
                def = vu::design::parse_study_definition(vu::json::parse(read_file(definition_path)));
            } catch (const vu::json::exception& e) {
                std::cerr << "validate: " << definition_path << ": " << e.what() << "\n";
                return kExitValidation;
            }
            auto result = vu::design::validate_study(
                def, lenient ? vu::design::Strictness::Lenient : vu::design::Strictness::Strict);
            vu::json captions_json;
            if (!captions_path.empty()) {
                std::vector<std::string> captions;
                std::istringstream in(read_file(captions_path));
                for (std::string line; std::getline(in, line);) captions.push_back(line);
                captions_json = vu::design::caption_token_stats(captions);
            }
            if (validate_format == "json") {
                vu::json j = result;
                if (!captions_json.is_null()) j["captions"] = captions_json;
                std::cout << j.dump(2) << "\n";
            } else {
                print_findings(result, std::cout);
                if (!captions_json.is_null()) std::cout << "captions: " << captions_json.dump() << "\n";
            }
            return result.passed() ? 0 : kExitValidation;
        }

        vu::service::Service svc(data_dir(data_dir_flag));

        if (*ingest) {
            auto ids = svc.study_ids();
            bool exists = std::find(ids.begin(), ids.end(), study_id) != ids.end();
            if (!ingest_definition.empty()) {
                auto def = vu::design::parse_study_definition(vu::json::parse(read_file(ingest_definition)));
                if (def.study_id != study_id) {
                    throw DataError("definition declares study '" + def.study_id + "', not '" + study_id + "'");
                }
                if (!exists) {
                    svc.create_study(def);
                } else if (!(svc.study(study_id) == def)) {
                    throw DataError("study '" + study_id + "' already exists with a different definition");
                }
            }
            auto fmt = vu::store::parse_import_format(ingest_format);
            vu::json summary = vu::json::object();
            bool rejected = false;
            auto run = [&](const std::string& path, const char* label, auto importer) {
                if (path.empty()) return;
                std::ifstream in(path, std::ios::binary);
                if (!in) throw DataError("cannot read " + path);
                vu::store::IngestReport r = (svc.*importer)(study_id, in, fmt);
                vu::json rows = vu::json::array();
                for (const auto& rej : r.rejected) rows.push_back({{"row", rej.row}, {"reason", rej.reason}});
                summary[label] = {{"accepted", r.accepted}, {"rejected", rows}};
                rejected = rejected || !r.rejected.empty();
            };
            run(participants_path, "participants", &vu::service::Service::import_participants);
            run(responses_path, "responses", &vu::service::Service::import_responses);
            std::cout << summary.dump(2) << "\n";
            return rejected ? kExitData : 0;
        }

        if (*report) {
            vu::report::ReportOptions options;
            options.group = vu::parse_group_view(group);
            options.k = k;
            options.policy = vu::metrics::parse_blank_policy(policy);
            options.threshold = threshold;
            std::stringstream hs(highlight);
            for (std::string id; std::getline(hs, id, ',');) {
                if (!id.empty()) options.highlighted.insert(id);
            }
            std::optional<vu::semantic::Lexicon> lexicon;
            if (!lexicon_path.empty()) {
                lexicon = vu::semantic::Lexicon::load(lexicon_path);
                options.lexicon = &*lexicon;
            }
            auto doc = svc.get_report(study_id, vu::report::parse_report_kind(kind), options);
            if (timestamp) doc.generated_at = vu::store::now_ms();
            emit(vu::report::render(doc, vu::report::parse_render_format(format)), out_path);
            return 0;
        }

        if (*exporter) {
            auto snap = svc.snapshot(study_id);
            std::ostringstream out;
            auto fmt = vu::store::parse_import_format(export_format);
            if (what == "participants") {
                vu::store::export_participants(snap, fmt, out);
            } else {
                vu::store::export_responses(snap, fmt, out);
            }
            emit(out.str(), out_path);
            return 0;
        }

        if (*fixture) {
            auto fx = vu::fixture::generate(seed);
            vu::fixture::write(fx, fixture_out);
            std::cout << "wrote " << fx.participants.size() << " participants and " << fx.responses.size()
                      << " responses to " << fixture_out << "\n";
            for (const auto& n : fx.notes) std::cout << "note: " << n << "\n";
            return 0;
        }

        if (*serve) {
            std::cerr << "serving on " << host << ":" << port << "\n";
            return vu::http::serve(svc, host, port) ? 0 : kExitData;
        }
    } catch (const vu::Error& e) {
        std::cerr << "vu: " << vu::to_string(e.code()) << ": " << e.what() << "\n";
        switch (e.code()) {
        case vu::ErrorCode::InvalidDefinition:
        case vu::ErrorCode::SchemaViolation:
        case vu::ErrorCode::InvalidGrid:
        case vu::ErrorCode::InvalidZoneLimits: return kExitValidation;
        case vu::ErrorCode::BadRequest: return kExitUsage;
        default: return kExitData;
        }
    } catch (const DataError& e) {
        std::cerr << "vu: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "vu: " << e.what() << "\n";
        return kExitData;
    }
    return 0;
}
