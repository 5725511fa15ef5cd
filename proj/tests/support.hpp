#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "vu/design.hpp"
#include "vu/fixture.hpp"
#include "vu/model.hpp"
#include "vu/store.hpp"

namespace testing {

inline vu::design::StimulusManifest manifest(const std::string& seq, const std::string& area) {
    vu::design::StimulusManifest m;
    m.sequence_id = seq;
    m.area_id = area;
    m.media_uri = "media/" + seq + ".mp4";
    m.duration_s = 30;
    m.frame_count = 385;
    m.nominal_fps = 13;
    m.denoising_strength = 0.6;
    return m;
}

/// Areas a1..aN with sequences s1..sN.
inline vu::design::StudyDefinition small_study(int areas, const std::string& id = "demo") {
    vu::design::StudyDefinition def;
    def.study_id = id;
    def.title = "demo study";
    for (int i = 1; i <= areas; ++i) {
        def.areas.push_back({"a" + std::to_string(i), "Area " + std::to_string(i), i});
        def.sequences.push_back(manifest("s" + std::to_string(i), "a" + std::to_string(i)));
    }
    def.presentation_seed = 5;
    return def;
}

inline vu::FamiliarityProfile full_profile(const vu::design::StudyDefinition& def,
                                           vu::FamiliarityLevel level = vu::FamiliarityLevel::QuickVisits) {
    vu::FamiliarityProfile p;
    for (const auto& a : def.areas) p[a.area_id] = level;
    return p;
}

/// Removed at scope exit.
struct TempDir {
    std::filesystem::path path;

    TempDir() {
        std::random_device rd;
        path = std::filesystem::temp_directory_path() /
               ("vu-test-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

/// The reference fixture loaded into an in-memory log.
inline vu::store::EventLog fixture_log(const vu::fixture::Fixture& fx) {
    using vu::store::EventKind;
    auto log = vu::store::EventLog::in_memory();
    log.append(EventKind::StudyCreated, vu::json(fx.study), 0);
    for (const auto& p : fx.participants) {
        log.append(EventKind::ParticipantRegistered, vu::json{{"participant", p}}, 0);
    }
    for (const auto& r : fx.responses) log.append(EventKind::ResponseSubmitted, vu::json(r), 0);
    return log;
}

}  // namespace testing
