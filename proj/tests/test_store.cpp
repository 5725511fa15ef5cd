#include "doctest.h"

#include <fstream>
#include <random>
#include <sstream>

#include "support.hpp"
#include "vu/error.hpp"
#include "vu/serialize.hpp"
#include "vu/store.hpp"

using namespace vu;
using namespace vu::store;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected vu::Error");
    return ErrorCode::BadRequest;
}

json participant_payload(const std::string& id, ParticipantGroup g = ParticipantGroup::Local) {
    ParticipantRecord p;
    p.participant_id = id;
    p.group = g;
    return json{{"participant", p}};
}

json response_payload(const std::string& pid, const std::string& seq, const std::string& guess,
                      const std::string& q2 = "") {
    SequenceResponse r;
    r.participant_id = pid;
    r.sequence_id = seq;
    r.guessed_area_id = guess;
    r.q2_text = q2;
    return json(r);
}

EventLog seeded_log(int areas = 3) {
    auto log = EventLog::in_memory();
    log.append(EventKind::StudyCreated, json(testing::small_study(areas)));
    log.append(EventKind::ParticipantRegistered, participant_payload("P1"));
    return log;
}

std::string read(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("store") {

TEST_CASE("event ids start at 1 and increase") {
    auto log = EventLog::in_memory();
    CHECK(log.append(EventKind::StudyCreated, json(testing::small_study(2))) == 1);
    CHECK(log.append(EventKind::ParticipantRegistered, participant_payload("P1")) == 2);
    CHECK(log.state().last_event_id == 2);
    CHECK(log.events().size() == 2);
}

TEST_CASE("event record line round trip") {
    EventRecord e{7, EventKind::LoopRecorded, json{{"k", "v"}}, 1234};
    auto back = EventRecord::from_line(e.to_line());
    CHECK(back.event_id == 7);
    CHECK(back.kind == EventKind::LoopRecorded);
    CHECK(back.payload == e.payload);
    CHECK(back.recorded_at == 1234);
    CHECK(e.to_line().find('\n') == std::string::npos);
}

TEST_CASE("rejections leave the state untouched") {
    auto log = seeded_log();
    auto before = log.state();
    CHECK(code_of([&] { log.append(EventKind::ParticipantRegistered, participant_payload("P1")); }) ==
          ErrorCode::DuplicateParticipant);
    CHECK(code_of([&] { log.append(EventKind::ResponseSubmitted, response_payload("P9", "s1", "a1")); }) ==
          ErrorCode::UnknownParticipant);
    CHECK(code_of([&] { log.append(EventKind::ResponseSubmitted, response_payload("P1", "s9", "a1")); }) ==
          ErrorCode::UnknownSequence);
    CHECK(code_of([&] { log.append(EventKind::ResponseSubmitted, response_payload("P1", "s1", "shibya")); }) ==
          ErrorCode::UnknownArea);
    CHECK(code_of([&] { log.append(EventKind::StudyCreated, json(testing::small_study(1))); }) ==
          ErrorCode::SchemaViolation);
    CHECK(code_of([&] { log.append(EventKind::ResponseSubmitted, json{{"nonsense", 1}}); }) ==
          ErrorCode::SchemaViolation);
    CHECK(log.state() == before);
    CHECK(log.events().size() == 2);
}

TEST_CASE("invalid study definition is rejected") {
    auto log = EventLog::in_memory();
    auto def = testing::small_study(2);
    def.areas[1].area_id = "a1";
    CHECK(code_of([&] { log.append(EventKind::StudyCreated, json(def)); }) == ErrorCode::InvalidDefinition);
}

TEST_CASE("duplicate response is rejected, amendment replaces it") {
    auto log = seeded_log();
    log.append(EventKind::ResponseSubmitted, response_payload("P1", "s1", "a2", "first"));
    CHECK(code_of([&] { log.append(EventKind::ResponseSubmitted, response_payload("P1", "s1", "a1")); }) ==
          ErrorCode::DuplicateResponse);
    log.append(EventKind::ResponseAmended, response_payload("P1", "s1", "a1", "second"));
    REQUIRE(log.state().responses.size() == 1);
    const auto& r = log.state().responses.at({"P1", "s1"});
    CHECK(*r.guessed_area_id == "a1");
    CHECK(r.q2_text == "second");
    CHECK(code_of([&] { log.append(EventKind::ResponseAmended, response_payload("P1", "s2", "a1")); }) ==
          ErrorCode::BadRequest);
}

TEST_CASE("familiarity must cover every area") {
    auto log = seeded_log(3);
    auto study = testing::small_study(3);
    auto profile = testing::full_profile(study);
    profile.erase("a2");
    try {
        log.append(EventKind::FamiliaritySubmitted,
                   json{{"participant_id", "P1"}, {"familiarity", familiarity_to_json(profile)}});
        FAIL("expected IncompleteFamiliarity");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IncompleteFamiliarity);
        CHECK(std::string(e.what()).find("a2") != std::string::npos);
    }
    profile = testing::full_profile(study);
    profile["zz"] = FamiliarityLevel::NotFamiliar;
    CHECK(code_of([&] {
              log.append(EventKind::FamiliaritySubmitted,
                         json{{"participant_id", "P1"}, {"familiarity", familiarity_to_json(profile)}});
          }) == ErrorCode::UnknownArea);
}

TEST_CASE("phase events move one step forward only") {
    auto log = seeded_log(1);
    auto phase = [&](const char* p) { log.append(EventKind::PhaseAdvanced, json{{"participant_id", "P1"}, {"phase", p}}); };
    CHECK(code_of([&] { phase("familiarization"); }) == ErrorCode::WrongPhase);
    phase("pre_viewing");
    CHECK(code_of([&] { phase("pre_viewing"); }) == ErrorCode::WrongPhase);
    CHECK(code_of([&] { phase("in_depth"); }) == ErrorCode::WrongPhase);
    phase("familiarization");
    log.append(EventKind::LoopRecorded, json{{"participant_id", "P1"}, {"sequence_id", "s1"}, {"phase", "familiarization"}});
    CHECK(code_of([&] {
              log.append(EventKind::LoopRecorded,
                         json{{"participant_id", "P1"}, {"sequence_id", "s1"}, {"phase", "in_depth"}});
          }) == ErrorCode::WrongPhase);
    CHECK(log.state().sessions.at("P1").familiarization_loops.at("s1") == 1);
    phase("in_depth");
    CHECK(code_of([&] { phase("complete"); }) == ErrorCode::GateUnmet);
    log.append(EventKind::ResponseSubmitted, response_payload("P1", "s1", "a1"));
    phase("complete");
    CHECK(*log.state().sessions.at("P1").phase == Phase::Complete);
    CHECK(code_of([&] { phase("pre_viewing"); }) == ErrorCode::WrongPhase);
}

TEST_CASE("replay: empty log is an empty snapshot") {
    std::istringstream in("");
    auto snap = replay(in);
    CHECK_FALSE(snap.study.has_value());
    CHECK(snap.participants.empty());
    CHECK(snap.last_event_id == 0);
}

TEST_CASE("replay reproduces the live state") {
    auto log = seeded_log();
    log.append(EventKind::ResponseSubmitted, response_payload("P1", "s1", "a2"));
    log.append(EventKind::ResponseAmended, response_payload("P1", "s1", "a1"));
    std::string text;
    for (const auto& e : log.events()) text += e.to_line() + "\n";
    std::istringstream in(text);
    auto snap = replay(in);
    CHECK(snap == log.state());
    CHECK(*snap.responses.at({"P1", "s1"}).guessed_area_id == "a1");
}

TEST_CASE("replay names the corrupt line") {
    auto log = seeded_log();
    std::string text = log.events()[0].to_line() + "\n{broken\n" + log.events()[1].to_line() + "\n";
    std::istringstream in(text);
    try {
        replay(in);
        FAIL("expected CorruptLog");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CorruptLog);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    // out-of-sequence ids are corrupt too
    std::istringstream gap(log.events()[1].to_line() + "\n");
    CHECK_THROWS_AS(replay(gap), Error);
}

TEST_CASE("replay ignores a torn final line with a warning") {
    auto log = seeded_log();
    std::string text = log.events()[0].to_line() + "\n" + log.events()[1].to_line().substr(0, 20);
    std::istringstream in(text);
    std::vector<std::string> warnings;
    auto snap = replay(in, &warnings);
    CHECK(snap.last_event_id == 1);
    CHECK(warnings.size() == 1);
}

TEST_CASE("property: every log prefix replays to a valid snapshot") {
    auto log = seeded_log(3);
    log.append(EventKind::ParticipantRegistered, participant_payload("P2", ParticipantGroup::Foreign));
    log.append(EventKind::ResponseSubmitted, response_payload("P1", "s1", "a1"));
    log.append(EventKind::ResponseSubmitted, response_payload("P2", "s2", "a3"));
    std::string text;
    for (const auto& e : log.events()) text += e.to_line() + "\n";
    for (std::size_t cut = 0; cut <= text.size(); ++cut) {
        std::istringstream in(text.substr(0, cut));
        std::vector<std::string> warnings;
        StudySnapshot snap;
        CHECK_NOTHROW(snap = replay(in, &warnings));
        CHECK(snap.last_event_id <= log.events().size());
    }
}

TEST_CASE("file log persists, truncates a torn tail and keeps appending") {
    testing::TempDir dir;
    auto path = dir.path / "events.log";
    {
        auto log = EventLog::open(path);
        log.append(EventKind::StudyCreated, json(testing::small_study(2)));
        log.append(EventKind::ParticipantRegistered, participant_payload("P1"));
    }
    auto intact = read(path);
    {
        std::ofstream out(path, std::ios::app | std::ios::binary);
        out << "{\"id\":3,\"kind\":\"Respo";
    }
    {
        auto log = EventLog::open(path);
        CHECK(log.warnings().size() == 1);
        CHECK(log.state().participants.size() == 1);
        CHECK(read(path) == intact);
        CHECK(log.append(EventKind::ResponseSubmitted, response_payload("P1", "s1", "a1")) == 3);
    }
    auto log = EventLog::open(path);
    CHECK(log.warnings().empty());
    CHECK(log.state().responses.size() == 1);
}

TEST_CASE("file log with corrupt middle line refuses to open") {
    testing::TempDir dir;
    auto path = dir.path / "events.log";
    {
        std::ofstream out(path);
        out << "garbage\n{\"also\":\"bad\"}\n";
    }
    CHECK_THROWS_AS(EventLog::open(path), Error);
}

TEST_CASE("import responses: accepted, rejected and empty input") {
    auto log = seeded_log(3);
    std::istringstream csv_in(
        "participant_id,group,sequence_id,guessed_area_id,q2,q3,q4,q5\n"
        "P1,local,s1,a1,red,,,\n"
        "P2,foreign,s1,shibya,,,,\n"
        "P2,foreign,s2,,\"blank, but text\",,,\n"
        "P1,foreign,s2,a2,,,,\n");
    auto r = import_responses(csv_in, ImportFormat::DelimitedTable, log);
    CHECK(r.accepted == 2);
    REQUIRE(r.rejected.size() == 2);
    CHECK(r.rejected[0].row == 2);
    CHECK(r.rejected[0].reason.find("unknown area") != std::string::npos);
    CHECK(r.rejected[1].row == 4);
    CHECK(log.state().find_participant("P2")->group == ParticipantGroup::Foreign);
    CHECK(log.state().responses.at({"P2", "s2"}).is_blank());

    std::istringstream empty("");
    auto e = import_responses(empty, ImportFormat::DelimitedTable, log);
    CHECK(e.accepted == 0);
    CHECK(e.rejected.empty());

    std::istringstream bad_header("who,what\nx,y\n");
    CHECK_THROWS_AS(import_responses(bad_header, ImportFormat::DelimitedTable, log), Error);
}

TEST_CASE("import -> export -> import rejects every row as duplicate") {
    for (auto fmt : {ImportFormat::DelimitedTable, ImportFormat::RecordPerLine}) {
        auto log = seeded_log(3);
        std::istringstream in(
            "participant_id,group,sequence_id,guessed_area_id,q2,q3,q4,q5\n"
            "P1,local,s1,a1,red,,,\n"
            "P1,local,s2,a3,\"tall, \"\"glass\"\"\",,,\n"
            "P3,foreign,s3,a3,,,,park\n");
        REQUIRE(import_responses(in, ImportFormat::DelimitedTable, log).accepted == 3);
        std::stringstream exported;
        export_responses(log.state(), fmt, exported);

        auto fresh = seeded_log(3);
        std::istringstream again(exported.str());
        auto first = import_responses(again, fmt, fresh);
        CHECK(first.accepted == 3);
        CHECK(fresh.state().responses == log.state().responses);

        std::istringstream twice(exported.str());
        auto second = import_responses(twice, fmt, fresh);
        CHECK(second.accepted == 0);
        CHECK(second.rejected.size() == 3);
    }
}

TEST_CASE("participants import and export round trip") {
    auto log = EventLog::in_memory();
    log.append(EventKind::StudyCreated, json(testing::small_study(2)));
    std::istringstream in(
        "participant_id,group,age,residence,profession,ai_familiarity,fam:a1,fam:a2\n"
        "L1,local,34,>=5y,architect,some,continuous_residence,quick_visits\n"
        "F1,foreign,,,,,,\n"
        "F2,foreign,29,<=1y,student,,not_familiar,\n");
    auto r = import_participants(in, ImportFormat::DelimitedTable, log);
    CHECK(r.accepted == 2);
    REQUIRE(r.rejected.size() == 1);
    CHECK(r.rejected[0].row == 3);
    const auto* l1 = log.state().find_participant("L1");
    REQUIRE(l1);
    CHECK(*l1->age == 34);
    CHECK(l1->familiarity_profile.at("a1") == FamiliarityLevel::ContinuousResidence);

    for (auto fmt : {ImportFormat::DelimitedTable, ImportFormat::RecordPerLine}) {
        std::stringstream out;
        export_participants(log.state(), fmt, out);
        auto fresh = EventLog::in_memory();
        fresh.append(EventKind::StudyCreated, json(testing::small_study(2)));
        std::istringstream back(out.str());
        CHECK(import_participants(back, fmt, fresh).accepted == 2);
        CHECK(fresh.state().participants == log.state().participants);
    }
}

}
