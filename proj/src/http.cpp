#include "vu/http.hpp"

#include <sstream>

#include "httplib.h"
#include "vu/serialize.hpp"

namespace vu::http {

int status_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::BadRequest:
    case ErrorCode::SchemaViolation: return 400;
    case ErrorCode::UnknownStudy:
    case ErrorCode::UnknownParticipant: return 404;
    case ErrorCode::DuplicateParticipant:
    case ErrorCode::DuplicateResponse:
    case ErrorCode::DuplicateStudy:
    case ErrorCode::WrongPhase:
    case ErrorCode::GateUnmet: return 409;
    case ErrorCode::InvalidDefinition:
    case ErrorCode::UnknownSequence:
    case ErrorCode::UnknownArea:
    case ErrorCode::DuplicateArea:
    case ErrorCode::IncompleteFamiliarity:
    case ErrorCode::InvalidGrid:
    case ErrorCode::InvalidZoneLimits:
    case ErrorCode::InsufficientData:
    case ErrorCode::Unsatisfiable: return 422;
    case ErrorCode::CorruptLog:
    case ErrorCode::IoError: return 500;
    }
    return 500;
}

namespace {

using httplib::Request;
using httplib::Response;

constexpr const char* kJson = "application/json";

void reply(Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), kJson);
}

void reply_error(Response& res, ErrorCode code, const std::string& message) {
    reply(res, json{{"code", std::string(to_string(code))}, {"message", message}}, status_for(code));
}

json body_of(const Request& req) {
    try {
        return json::parse(req.body);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::BadRequest, std::string("request body is not valid JSON: ") + e.what());
    }
}

// Wraps a handler so domain errors become {code, message} bodies.
template <class Fn>
httplib::Server::Handler guarded(Fn fn) {
    return [fn](const Request& req, Response& res) {
        try {
            fn(req, res);
        } catch (const Error& e) {
            reply_error(res, e.code(), e.what());
        } catch (const json::exception& e) {
            reply_error(res, ErrorCode::SchemaViolation, e.what());
        } catch (const std::exception& e) {
            reply_error(res, ErrorCode::IoError, e.what());
        }
    };
}

int int_param(const Request& req, const char* name, int fallback) {
    if (!req.has_param(name)) return fallback;
    const auto text = req.get_param_value(name);
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw Error(ErrorCode::BadRequest, std::string("query parameter '") + name + "' must be an integer");
    }
    return v;
}

report::ReportOptions report_options(const Request& req) {
    report::ReportOptions o;
    if (req.has_param("group")) o.group = parse_group_view(req.get_param_value("group"));
    o.k = int_param(req, "k", o.k);
    if (req.has_param("policy")) o.policy = metrics::parse_blank_policy(req.get_param_value("policy"));
    o.threshold = int_param(req, "threshold", o.threshold);
    if (req.has_param("highlight")) {
        std::stringstream ss(req.get_param_value("highlight"));
        for (std::string id; std::getline(ss, id, ',');) {
            if (!id.empty()) o.highlighted.insert(id);
        }
    }
    return o;
}

json validate(const std::string& kind, const Request& req) {
    json body = body_of(req);
    return with_schema_errors(kind, [&]() -> json {
        if (kind == "study") {
            bool strict = !req.has_param("strict") || req.get_param_value("strict") != "false";
            auto def = design::parse_study_definition(body);
            return design::validate_study(def, strict ? design::Strictness::Strict : design::Strictness::Lenient);
        }
        if (kind == "sequence") {
            double tol = body.value("fps_tolerance", design::kDefaultFpsTolerance);
            return design::validate_sequence_manifest(body.get<design::StimulusManifest>(), tol);
        }
        if (kind == "dataset") {
            double tol = body.value("tolerance_pp", design::kDefaultCompositionTolerancePp);
            return design::validate_dataset_composition(body.get<design::DatasetManifest>(), tol);
        }
        if (kind == "lora") return design::validate_lora_config(body.get<design::LoRATrainConfig>());
        if (kind == "schedule") return design::validate_schedule(body.get<design::PhaseSchedule>());
        if (kind == "instrument") return design::validate_instrument(body.get<design::QuestionnaireInstrument>());
        if (kind == "captions") {
            auto captions = body.at("captions").get<std::vector<std::string>>();
            return design::caption_token_stats(captions);
        }
        if (kind == "grid") {
            auto map = body.get<design::ReplicaMap>();
            auto grid = design::build_sector_grid(map.extent_m, map.sector_size_m, map.assignments);
            json out{{"grid", grid}};
            if (!map.zone_limits.empty()) {
                out["heights"] = design::assign_heights(grid, map.zone_limits, map.height_seed);
            }
            return out;
        }
        throw Error(ErrorCode::BadRequest, "unknown validator '" + kind + "'");
    });
}

}  // namespace

void bind_routes(httplib::Server& server, service::Service& svc) {
    server.Get("/studies", guarded([&](const Request&, Response& res) { reply(res, svc.study_ids()); }));

    server.Post("/studies", guarded([&](const Request& req, Response& res) {
        auto def = design::parse_study_definition(body_of(req));
        bool strict = req.has_param("strict") && req.get_param_value("strict") == "true";
        auto id = svc.create_study(def, strict ? design::Strictness::Strict : design::Strictness::Lenient);
        json sequences = json::array();
        for (const auto& s : def.sequences) sequences.push_back(s.sequence_id);
        reply(res, json{{"study_id", id}, {"sequences", sequences}}, 201);
    }));

    server.Get(R"(/studies/([^/]+))", guarded([&](const Request& req, Response& res) {
        reply(res, json(svc.study(req.matches[1])));
    }));

    server.Post(R"(/studies/([^/]+)/participants)", guarded([&](const Request& req, Response& res) {
        json body = req.body.empty() ? json::object() : body_of(req);
        bool generated = !body.contains("participant_id") || body["participant_id"] == "";
        if (generated) body["participant_id"] = "unassigned";
        auto attrs = with_schema_errors("participant", [&] { return body.get<ParticipantRecord>(); });
        if (generated) attrs.participant_id.clear();
        auto reg = svc.register_participant(req.matches[1], std::move(attrs));
        reply(res, json{{"study_id", reg.study_id}, {"participant_id", reg.participant_id}, {"token", reg.token}},
              201);
    }));

    server.Get(R"(/studies/([^/]+)/reports/([^/]+))", guarded([&](const Request& req, Response& res) {
        auto kind = report::parse_report_kind(req.matches[2].str());
        auto doc = svc.get_report(req.matches[1], kind, report_options(req));
        std::string format = req.has_param("format") ? req.get_param_value("format") : "json";
        auto render = report::parse_render_format(format);
        res.status = 200;
        res.set_content(report::render(doc, render),
                        render == report::RenderFormat::Json  ? kJson
                        : render == report::RenderFormat::Csv ? "text/csv; charset=utf-8"
                                                              : "text/plain; charset=utf-8");
    }));

    server.Get(R"(/studies/([^/]+)/stimuli/([^/]+))", guarded([&](const Request& req, Response& res) {
        reply(res, json(svc.stimulus(req.matches[1], req.matches[2])));
    }));

    server.Post(R"(/sessions/([^/]+)/start)", guarded([&](const Request& req, Response& res) {
        reply(res, to_json(svc.start_session(req.matches[1])));
    }));

    server.Get(R"(/sessions/([^/]+))", guarded([&](const Request& req, Response& res) {
        reply(res, to_json(svc.get_session(req.matches[1])));
    }));

    server.Post(R"(/sessions/([^/]+)/familiarity)", guarded([&](const Request& req, Response& res) {
        json body = body_of(req);
        const json& map = body.contains("familiarity") ? body.at("familiarity") : body;
        auto profile = with_schema_errors("familiarity", [&] { return familiarity_from_json(map); });
        reply(res, to_json(svc.submit_familiarity(req.matches[1], profile)));
    }));

    server.Post(R"(/sessions/([^/]+)/loops)", guarded([&](const Request& req, Response& res) {
        json body = body_of(req);
        auto seq = with_schema_errors("loop", [&] { return body.at("sequence_id").get<std::string>(); });
        reply(res, to_json(svc.record_loop(req.matches[1], seq)));
    }));

    server.Post(R"(/sessions/([^/]+)/advance)", guarded([&](const Request& req, Response& res) {
        reply(res, to_json(svc.advance_phase(req.matches[1])));
    }));

    server.Post(R"(/sessions/([^/]+)/responses)", guarded([&](const Request& req, Response& res) {
        json body = body_of(req);
        if (!body.contains("participant_id")) body["participant_id"] = "";
        auto r = with_schema_errors("response", [&] { return body.get<SequenceResponse>(); });
        reply(res, to_json(svc.submit_response(req.matches[1], std::move(r))));
    }));

    server.Post(R"(/validate/([^/]+))", guarded([&](const Request& req, Response& res) {
        reply(res, validate(req.matches[1], req));
    }));
}

bool serve(service::Service& svc, const std::string& host, int port) {
    httplib::Server server;
    server.set_payload_max_length(16 * 1024 * 1024);
    bind_routes(server, svc);
    return server.listen(host, port);
}

}  // namespace vu::http
