#include "doctest.h"

#include "vu/error.hpp"
#include "vu/model.hpp"
#include "vu/serialize.hpp"

using namespace vu;

TEST_SUITE("model") {

TEST_CASE("familiarity weights are exact tenths and strictly increasing") {
    CHECK(familiarity_weight(FamiliarityLevel::NotFamiliar) == Rational(0));
    CHECK(familiarity_weight(FamiliarityLevel::QuickVisits) == Rational(2, 5));
    CHECK(familiarity_weight(FamiliarityLevel::RegularAttendance) == Rational(7, 10));
    CHECK(familiarity_weight(FamiliarityLevel::ContinuousResidence) == Rational(1));
    for (std::size_t i = 1; i < kFamiliarityLevels.size(); ++i) {
        CHECK(familiarity_weight(kFamiliarityLevels[i - 1]) < familiarity_weight(kFamiliarityLevels[i]));
    }
}

TEST_CASE("labels round trip") {
    for (auto l : kFamiliarityLevels) CHECK(parse_familiarity_level(to_string(l)) == l);
    for (auto b : kResidenceBuckets) CHECK(parse_residence_bucket(to_string(b)) == b);
    CHECK(parse_participant_group("foreign") == ParticipantGroup::Foreign);
    CHECK(parse_group_view("general") == GroupView::General);
    CHECK_THROWS_AS(parse_familiarity_level("often"), Error);
    CHECK_THROWS_AS(parse_participant_group("general"), Error);
}

TEST_CASE("group views") {
    CHECK(group_in_view(ParticipantGroup::Local, GroupView::General));
    CHECK(group_in_view(ParticipantGroup::Foreign, GroupView::Foreign));
    CHECK_FALSE(group_in_view(ParticipantGroup::Local, GroupView::Foreign));
}

TEST_CASE("partition keeps order and rejects duplicates") {
    std::vector<ParticipantRecord> ps(4);
    ps[0].participant_id = "P1";
    ps[1].participant_id = "P2";
    ps[1].group = ParticipantGroup::Foreign;
    ps[2].participant_id = "P3";
    ps[3].participant_id = "P4";
    ps[3].group = ParticipantGroup::Foreign;
    auto part = partition_cohort(ps);
    CHECK(part.general == std::vector<std::string>{"P1", "P2", "P3", "P4"});
    CHECK(part.local == std::vector<std::string>{"P1", "P3"});
    CHECK(part.view(GroupView::Foreign) == std::vector<std::string>{"P2", "P4"});
    CHECK(part.local.size() + part.foreign.size() == part.general.size());

    ps[2].participant_id = "P2";
    try {
        partition_cohort(ps);
        FAIL("expected DuplicateParticipant");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DuplicateParticipant);
        CHECK(std::string(e.what()).find("P2") != std::string::npos);
    }
}

TEST_CASE("cohort summary") {
    std::vector<ParticipantRecord> ps(3);
    ps[0].participant_id = "a";
    ps[0].age = 30;
    ps[0].residence = ResidenceBucket::FiveYearsOrMore;
    ps[0].profession = "architect";
    ps[1].participant_id = "b";
    ps[1].group = ParticipantGroup::Foreign;
    ps[1].age = 22;
    ps[2].participant_id = "c";
    auto s = summarize_cohort(ps);
    CHECK(s.size == 3);
    CHECK(s.local == 2);
    CHECK(s.foreign == 1);
    CHECK(s.residence.size() == 4);
    CHECK(s.residence.at(ResidenceBucket::FiveYearsOrMore) == 1);
    CHECK(s.residence_unspecified == 2);
    CHECK(*s.age_min == 22);
    CHECK(*s.age_max == 30);
    CHECK(s.age_unspecified == 1);
    CHECK(s.professions.at("unspecified") == 2);
}

TEST_CASE("json round trip of participants and responses") {
    ParticipantRecord p;
    p.participant_id = "P7";
    p.group = ParticipantGroup::Foreign;
    p.age = 41;
    p.residence = ResidenceBucket::OneToThreeYears;
    p.familiarity_profile = {{"a1", FamiliarityLevel::RegularAttendance}};
    CHECK(json(p).get<ParticipantRecord>() == p);

    SequenceResponse r;
    r.participant_id = "P7";
    r.sequence_id = "s1";
    r.q3_text = "red, \"lanterns\"";
    r.loops_viewed = 4;
    auto back = json(r).get<SequenceResponse>();
    CHECK(back == r);
    CHECK(back.is_blank());

    CHECK_THROWS_AS(json::parse(R"({"participant_id":"x","group":"martian"})").get<ParticipantRecord>(), Error);
}

TEST_CASE("error code strings are stable") {
    CHECK(to_string(ErrorCode::GateUnmet) == "gate_unmet");
    CHECK(to_string(ErrorCode::DuplicateStudy) == "duplicate_study");
    CHECK(to_string(ErrorCode::InsufficientData) == "insufficient_data");
}

}
