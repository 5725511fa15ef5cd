// Acceptance run: one PASS/FAIL line per primary criterion. Exit status is
// the number of failed criteria (capped at 100).

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <deque>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "support.hpp"
#include "vu/design.hpp"
#include "vu/error.hpp"
#include "vu/fixture.hpp"
#include "vu/metrics.hpp"
#include "vu/semantic.hpp"
#include "vu/serialize.hpp"
#include "vu/service.hpp"
#include "vu/store.hpp"

using namespace vu;

namespace {

// Collects failure details for one criterion.
struct Check {
    std::vector<std::string> problems;

    void expect(bool ok, const std::string& what) {
        if (!ok && problems.size() < 20) problems.push_back(what);
    }
    bool ok() const { return problems.empty(); }
};

int failures = 0;

void report(int number, const std::string& name, const Check& c, const std::string& detail,
            std::chrono::steady_clock::time_point started) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started).count();
    std::cout << (c.ok() ? "[PASS] " : "[FAIL] ") << number << " " << name << ": " << detail << " (" << ms << " ms)\n";
    for (const auto& p : c.problems) std::cout << "       - " << p << "\n";
    if (!c.ok()) ++failures;
    std::cout.flush();
}

template <class Fn>
void criterion(int number, const std::string& name, Fn fn) {
    auto started = std::chrono::steady_clock::now();
    Check c;
    std::string detail;
    try {
        detail = fn(c);
    } catch (const std::exception& e) {
        c.problems.push_back(std::string("exception: ") + e.what());
    }
    report(number, name, c, detail, started);
}

// The fixture as a downstream user would get it: written to disk, then
// ingested through the regular import path.
const store::StudySnapshot& ingested_fixture() {
    static const auto log = [] {
        testing::TempDir dir;
        fixture::write(fixture::generate(1), dir.path);
        auto log = store::EventLog::in_memory();
        log.append(store::EventKind::StudyCreated,
                   json(design::load_study_definition((dir.path / "study.json").string())));
        std::ifstream participants(dir.path / "participants.csv");
        auto p = store::import_participants(participants, store::ImportFormat::DelimitedTable, log);
        std::ifstream responses(dir.path / "responses.csv");
        auto r = store::import_responses(responses, store::ImportFormat::DelimitedTable, log);
        if (!p.rejected.empty() || !r.rejected.empty()) throw std::runtime_error("fixture rows were rejected");
        return log;
    }();
    return log.state();
}

std::string area_of(const std::string& seq, const design::StudyDefinition& study) {
    return study.find_sequence(seq)->area_id;
}

// --- 1 ------------------------------------------------------------------------

std::string expected_uil(Check& c) {
    const std::map<GroupView, std::map<std::string, int>> expected = {
        {GroupView::General,
         {{"asakusa", 100}, {"harajuku", 100}, {"shimokitazawa", 86}, {"shibuya", 83}, {"ikebukuro", 75},
          {"ueno", 75}, {"roppongi", 72}, {"yanesen", 69}, {"kagurazaka", 67}}},
        {GroupView::Local,
         {{"asakusa", 100}, {"harajuku", 100}, {"ueno", 90}, {"shimokitazawa", 90}, {"shibuya", 90},
          {"ikebukuro", 90}, {"kagurazaka", 85}, {"yanesen", 85}, {"roppongi", 80}}},
        {GroupView::Foreign,
         {{"asakusa", 100}, {"harajuku", 100}, {"shimokitazawa", 81}, {"shibuya", 75}, {"roppongi", 63},
          {"ueno", 56}, {"ikebukuro", 56}, {"yanesen", 50}, {"kagurazaka", 44}}},
    };
    const auto& snap = ingested_fixture();
    const auto key = design::answer_key(*snap.study);
    const auto groups = metrics::group_index(snap.participants);
    const auto responses = snap.response_list();
    int matched = 0;
    for (const auto& [view, values] : expected) {
        for (const auto& seq : snap.study->sequences) {
            auto got = metrics::uil_per_sequence(responses, key, groups, seq.sequence_id, view).rate.display();
            int want = values.at(seq.area_id);
            c.expect(got == want, std::string(to_string(view)) + " " + seq.area_id + ": got " +
                                      std::to_string(got) + ", want " + std::to_string(want));
            matched += got == want;
        }
    }
    return std::to_string(matched) + "/27 UIL display values equal";
}

// --- 2 ------------------------------------------------------------------------

std::string cohort_stats(Check& c) {
    const auto& snap = ingested_fixture();
    const auto key = design::answer_key(*snap.study);
    const auto responses = snap.response_list();
    auto hist = metrics::accuracy_histogram(responses, key);
    c.expect(!hist.empty(), "empty histogram");
    if (hist.empty()) return "";
    auto lo = *hist.begin();
    auto hi = *hist.rbegin();
    c.expect(lo.first == 44 && lo.second == 3, "lowest bin " + std::to_string(lo.first) + "% x" + std::to_string(lo.second));
    c.expect(hi.first == 100 && hi.second == 14, "highest bin " + std::to_string(hi.first) + "% x" + std::to_string(hi.second));
    auto mean = metrics::cohort_mean_accuracy(responses, key, metrics::group_index(snap.participants), GroupView::General);
    c.expect(mean.rate.exact() == Rational(262, 324), "mean exact " + std::to_string(mean.inputs.correct) + "/" +
                                                           std::to_string(mean.inputs.considered));
    c.expect(mean.rate.display() == 81, "mean display " + std::to_string(mean.rate.display()));
    return "min 44% x" + std::to_string(lo.second) + ", max 100% x" + std::to_string(hi.second) + ", mean " +
           std::to_string(mean.inputs.correct) + "/" + std::to_string(mean.inputs.considered) + " -> " +
           std::to_string(mean.rate.display()) + "%";
}

// --- 3 ------------------------------------------------------------------------

std::string group_identity(Check& c) {
    std::mt19937_64 rng(2024);
    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        int areas = 1 + static_cast<int>(rng() % 9);
        auto study = testing::small_study(areas);
        auto key = design::answer_key(study);
        std::vector<ParticipantRecord> ps(1 + rng() % 40);
        for (std::size_t i = 0; i < ps.size(); ++i) {
            ps[i].participant_id = "p" + std::to_string(i);
            ps[i].group = rng() % 2 ? ParticipantGroup::Local : ParticipantGroup::Foreign;
        }
        auto policy = rng() % 2 ? metrics::BlankPolicy::ExcludeFromT : metrics::BlankPolicy::BlanksCountIncorrect;
        std::vector<SequenceResponse> rs;
        for (const auto& p : ps) {
            for (const auto& s : study.sequences) {
                if (rng() % 5 == 0) continue;  // missing response
                SequenceResponse r;
                r.participant_id = p.participant_id;
                r.sequence_id = s.sequence_id;
                auto roll = rng() % 10;
                if (roll < 6) r.guessed_area_id = s.area_id;
                else if (roll < 9) r.guessed_area_id = "a" + std::to_string(1 + rng() % areas);
                rs.push_back(r);
            }
        }
        auto part = partition_cohort(ps);
        if (part.local.size() + part.foreign.size() != part.general.size()) ++violations;
        auto groups = metrics::group_index(ps);
        for (const auto& s : study.sequences) {
            auto ins = [&](GroupView v) -> metrics::AccuracyInputs {
                try {
                    return metrics::uil_per_sequence(rs, key, groups, s.sequence_id, v, policy).inputs;
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::InsufficientData) throw;
                    return {0, 0};
                }
            };
            auto g = ins(GroupView::General), l = ins(GroupView::Local), f = ins(GroupView::Foreign);
            if (g.considered != l.considered + f.considered || g.correct != l.correct + f.correct) {
                ++violations;
                continue;
            }
            if (g.considered == 0) continue;
            auto exact = metrics::uil_per_sequence(rs, key, groups, s.sequence_id, GroupView::General, policy).rate.exact();
            if (exact != Rational(l.correct + f.correct, l.considered + f.considered)) ++violations;
        }
    }
    c.expect(violations == 0, std::to_string(violations) + " violations");
    return "1000 cohorts, " + std::to_string(violations) + " violations";
}

// --- 4 ------------------------------------------------------------------------

std::string familiarity_properties(Check& c) {
    std::mt19937_64 rng(77);
    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<FamiliarityLevel> levels(1 + rng() % 36);
        for (auto& l : levels) l = kFamiliarityLevels[rng() % 4];
        auto fr = metrics::familiarity_rate(levels).exact();

        auto shuffled = levels;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        if (metrics::familiarity_rate(shuffled).exact() != fr) ++violations;

        // raise or lower one respondent
        auto i = rng() % levels.size();
        auto idx = static_cast<std::size_t>(std::find(kFamiliarityLevels.begin(), kFamiliarityLevels.end(), levels[i]) -
                                            kFamiliarityLevels.begin());
        auto target = rng() % 4;
        auto changed = levels;
        changed[i] = kFamiliarityLevels[target];
        auto fr2 = metrics::familiarity_rate(changed).exact();
        if (target > idx && !(fr2 > fr)) ++violations;
        if (target < idx && !(fr2 < fr)) ++violations;
        if (target == idx && fr2 != fr) ++violations;

        std::vector<FamiliarityLevel> none(levels.size(), FamiliarityLevel::NotFamiliar);
        std::vector<FamiliarityLevel> all(levels.size(), FamiliarityLevel::ContinuousResidence);
        if (metrics::familiarity_rate(none).display() != 0 || metrics::familiarity_rate(none).exact() != Rational(0)) ++violations;
        if (metrics::familiarity_rate(all).display() != 100 || metrics::familiarity_rate(all).exact() != Rational(1)) ++violations;
    }
    c.expect(violations == 0, std::to_string(violations) + " violations");
    return "1000 profiles, " + std::to_string(violations) + " violations";
}

// --- 5 ------------------------------------------------------------------------

using Triple = std::tuple<semantic::ThematicGroup, std::string, std::size_t>;

std::string element_table(Check& c) {
    using G = semantic::ThematicGroup;
    const std::map<std::string, std::set<Triple>> expected = {
        {"shimokitazawa", {{G::Typology, "shops", 31}, {G::Element, "clothing", 25}, {G::Quality, "small", 17}}},
        {"harajuku", {{G::Typology, "shops", 24}, {G::Quality, "colorful", 22}, {G::Element, "fashion", 12}}},
        {"yanesen", {{G::Quality, "old", 16}, {G::Typology, "private house", 12}, {G::Characteristic, "narrow", 10}}},
        {"kagurazaka", {{G::Quality, "traditional", 12}, {G::Element, "river", 10}, {G::Characteristic, "narrow", 10}}},
        {"asakusa", {{G::Color, "red", 38}, {G::Quality, "traditional", 23}, {G::Typology, "temples", 10}}},
        {"ueno", {{G::Environment, "park", 21}, {G::Typology, "izakaya", 13}, {G::Characteristic, "wide", 14}}},
        {"shibuya", {{G::Element, "signage", 32}, {G::Characteristic, "high", 25}, {G::Environment, "river", 20}}},
        {"ikebukuro", {{G::Element, "signage", 21}, {G::Quality, "cluttered", 10}, {G::Color, "red", 9}}},
        {"roppongi", {{G::Material, "glass", 10}, {G::Typology, "\"glass\" buildings", 10}, {G::Element, "bridge", 10}}},
    };
    const auto& snap = ingested_fixture();
    auto responses = snap.response_list();
    auto table = semantic::top_k_elements(
        semantic::element_frequencies(responses, snap.study->areas, design::answer_key(*snap.study),
                                      semantic::starter_lexicon()),
        3);
    int matched = 0;
    for (const auto& [area, want] : expected) {
        std::set<Triple> got;
        for (const auto& e : table.by_area.at(area)) got.insert({e.group, e.canonical_term, e.count});
        for (const auto& t : want) {
            bool hit = got.contains(t);
            matched += hit;
            c.expect(hit, area + ": missing " + std::string(semantic::to_string(std::get<0>(t))) + " " +
                              std::get<1>(t) + " " + std::to_string(std::get<2>(t)));
        }
        c.expect(got.size() == 3, area + ": " + std::to_string(got.size()) + " rows");
    }
    return std::to_string(matched) + "/27 triples equal";
}

// --- 6 ------------------------------------------------------------------------

std::string gating_property(Check& c) {
    const auto& snap = ingested_fixture();
    const auto& study = *snap.study;
    const auto key = design::answer_key(study);
    const auto& lex = semantic::starter_lexicon();
    auto base = snap.response_list();
    auto counts = [&](const std::vector<SequenceResponse>& rs) {
        return semantic::element_frequencies(rs, study.areas, key, lex).by_area;
    };
    const auto before = counts(base);

    std::vector<std::size_t> correct;
    for (std::size_t i = 0; i < base.size(); ++i) {
        if (base[i].guessed_area_id == area_of(base[i].sequence_id, study)) correct.push_back(i);
    }
    std::mt19937_64 rng(606);
    int violations = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto i = correct[rng() % correct.size()];
        auto flipped = base;
        auto truth = area_of(base[i].sequence_id, study);
        std::string wrong;
        do {
            wrong = study.areas[rng() % study.areas.size()].area_id;
        } while (wrong == truth);
        flipped[i].guessed_area_id = wrong;
        auto after = counts(flipped);

        // this response's own hits, counted independently
        std::map<std::pair<semantic::ThematicGroup, std::string>, std::size_t> hits;
        for (auto text : base[i].free_text()) {
            auto tokens = semantic::normalize_tokens(text, &lex);
            for (const auto& h : semantic::map_terms(tokens, lex).hits) ++hits[{h.group, h.canonical_term}];
        }
        for (const auto& a : study.areas) {
            std::map<std::pair<semantic::ThematicGroup, std::string>, std::size_t> b, f;
            for (const auto& e : before.at(a.area_id)) b[{e.group, e.canonical_term}] = e.count;
            for (const auto& e : after.at(a.area_id)) f[{e.group, e.canonical_term}] = e.count;
            if (a.area_id != truth) {
                if (b != f) ++violations;
                continue;
            }
            for (const auto& [term, n] : b) {
                auto h = hits.contains(term) ? hits.at(term) : 0;
                auto now = f.contains(term) ? f.at(term) : 0;
                if (n - h != now) ++violations;
            }
            for (const auto& [term, n] : f) {
                if (!b.contains(term)) ++violations;
            }
        }
    }
    c.expect(violations == 0, std::to_string(violations) + " violations");
    return "200 flips, " + std::to_string(violations) + " violations";
}

// --- 7 ------------------------------------------------------------------------

std::string manifest_validators(Check& c) {
    auto m = testing::manifest("s1", "a1");
    m.denoising_strength = 0.68;
    auto r = design::validate_sequence_manifest(m);
    double fps = r.derived.count("fps") ? r.derived.at("fps") : 0;
    c.expect(r.passed(), "reference manifest fails");
    c.expect(std::lround(fps * 100) == 1283, "derived fps " + std::to_string(fps));

    m.denoising_strength = 0.681;
    c.expect(!design::validate_sequence_manifest(m).passed(), "denoise 0.681 accepted");

    auto dataset = [](int n) {
        design::DatasetManifest d;
        d.area_id = "a1";
        auto street = static_cast<int>(std::lround(n * 0.63));
        auto detail = 1;
        for (int i = 0; i < n; ++i) {
            auto t = i < street ? design::Typology::StreetView
                     : i < n - detail ? design::Typology::Facade
                                      : design::Typology::Detail;
            d.image_records.push_back({"img" + std::to_string(i), t, 768, 768});
        }
        return d;
    };
    c.expect(design::validate_dataset_composition(dataset(63)).passed(), "size 63 rejected");
    c.expect(!design::validate_dataset_composition(dataset(59)).passed(), "size 59 accepted");
    c.expect(!design::validate_dataset_composition(dataset(67)).passed(), "size 67 accepted");

    std::map<design::Cell, std::string> cells;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) cells[{i, j}] = "a1";
    auto grid = design::build_sector_grid(1600, 200, cells);
    c.expect(grid.sectors.size() == 64, "1600/200 gave " + std::to_string(grid.sectors.size()) + " sectors");

    std::string message;
    try {
        design::build_sector_grid(1500, 200, {});
        c.expect(false, "1500/200 accepted");
    } catch (const Error& e) {
        message = e.what();
        c.expect(e.code() == ErrorCode::InvalidGrid, "wrong error code");
        c.expect(message.find("7.5") != std::string::npos, "ratio 7.5 not reported: " + message);
        c.expect(message.find("remainder 100") != std::string::npos, "remainder not reported: " + message);
    }
    return "fps " + std::to_string(fps).substr(0, 5) + "; 0.681, 59, 67 rejected; 64 sectors; \"" + message + "\"";
}

// --- 8 ------------------------------------------------------------------------

using service::Phase;

int phase_index(const std::optional<Phase>& p) { return p ? static_cast<int>(*p) + 1 : 0; }

// Invariants that must hold after any call.
void check_invariants(const store::StudySnapshot& snap, const design::StudyDefinition& study,
                      const std::map<std::string, int>& last_phase, std::vector<std::string>& problems) {
    for (const auto& [pid, progress] : snap.sessions) {
        auto it = last_phase.find(pid);
        int before = it == last_phase.end() ? 0 : it->second;
        if (phase_index(progress.phase) < before) problems.push_back(pid + ": backward transition");
        if (!progress.phase) continue;
        if (*progress.phase == Phase::Complete) {
            for (const auto& s : study.sequences) {
                if (!snap.responses.contains({pid, s.sequence_id})) {
                    problems.push_back(pid + ": complete without response for " + s.sequence_id);
                }
            }
        }
        if (*progress.phase >= Phase::Familiarization && snap.find_participant(pid)->familiarity_profile.empty()) {
            problems.push_back(pid + ": viewing without familiarity");
        }
        if (*progress.phase >= Phase::InDepth) {
            for (const auto& s : study.sequences) {
                auto l = progress.familiarization_loops.find(s.sequence_id);
                if (l == progress.familiarization_loops.end() || l->second < study.schedule.familiarization_loops) {
                    problems.push_back(pid + ": in-depth before familiarization loops on " + s.sequence_id);
                }
            }
        }
        if (*progress.phase < Phase::InDepth) {
            for (const auto& [key, r] : snap.responses) {
                if (key.first == pid) problems.push_back(pid + ": response before in-depth");
            }
        }
    }
}

enum class Action { Start, FamiliarityFull, FamiliarityPartial, Loop1, Loop2, LoopUnknown, Advance, Respond1, Respond2, Get };
constexpr std::array<Action, 10> kActions = {Action::Start,   Action::FamiliarityFull, Action::FamiliarityPartial,
                                             Action::Loop1,   Action::Loop2,           Action::LoopUnknown,
                                             Action::Advance, Action::Respond1,        Action::Respond2,
                                             Action::Get};

// Runs one action; domain rejections are expected outcomes.
void perform(service::Service& svc, const design::StudyDefinition& study, const std::string& token, Action a,
             std::mt19937_64* rng = nullptr) {
    auto response = [&](const std::string& seq) {
        SequenceResponse r;
        r.sequence_id = seq;
        r.guessed_area_id = rng && (*rng)() % 3 == 0 ? "a2" : "a1";
        r.loops_viewed = rng ? static_cast<int>((*rng)() % 7) : 5;
        return r;
    };
    try {
        switch (a) {
        case Action::Start: svc.start_session(token); break;
        case Action::FamiliarityFull: svc.submit_familiarity(token, testing::full_profile(study)); break;
        case Action::FamiliarityPartial: {
            auto p = testing::full_profile(study);
            p.erase(p.begin());
            svc.submit_familiarity(token, p);
            break;
        }
        case Action::Loop1: svc.record_loop(token, study.sequences[0].sequence_id); break;
        case Action::Loop2: svc.record_loop(token, study.sequences.back().sequence_id); break;
        case Action::LoopUnknown: svc.record_loop(token, "missing"); break;
        case Action::Advance: svc.advance_phase(token); break;
        case Action::Respond1: svc.submit_response(token, response(study.sequences[0].sequence_id)); break;
        case Action::Respond2: svc.submit_response(token, response(study.sequences.back().sequence_id)); break;
        case Action::Get: svc.get_session(token); break;
        }
    } catch (const Error&) {
    }
}

struct Explorer {
    design::StudyDefinition study = [] {
        auto s = testing::small_study(2);
        s.schedule.familiarization_loops = 2;
        return s;
    }();

    // Abstract state: phase, familiarity, loop counts capped at 3, responded set.
    using Key = std::tuple<int, bool, int, int, int, int, bool, bool>;

    Key key_of(const service::SessionView& v) const {
        auto loops = [](const std::map<std::string, int>& m, const std::string& s) {
            auto it = m.find(s);
            return std::min(3, it == m.end() ? 0 : it->second);
        };
        const auto& s1 = study.sequences[0].sequence_id;
        const auto& s2 = study.sequences[1].sequence_id;
        auto responded = [&](const std::string& s) {
            return std::find(v.responded.begin(), v.responded.end(), s) != v.responded.end();
        };
        return {phase_index(v.phase), v.familiarity_submitted, loops(v.familiarization_loops, s1),
                loops(v.familiarization_loops, s2), loops(v.in_depth_loops, s1), loops(v.in_depth_loops, s2),
                responded(s1), responded(s2)};
    }
};

std::string session_safety(Check& c) {
    // exhaustive breadth-first exploration of the small model
    Explorer ex;
    std::map<Explorer::Key, std::vector<Action>> seen;
    std::deque<std::vector<Action>> frontier{{}};
    std::set<int> phases_reached;
    std::vector<std::string> problems;
    std::size_t transitions = 0;
    {
        service::Service svc;
        svc.create_study(ex.study);
        auto token = svc.register_participant(ex.study.study_id, {}).token;
        seen[ex.key_of(svc.get_session(token))] = {};
    }
    while (!frontier.empty()) {
        auto path = frontier.front();
        frontier.pop_front();
        for (auto a : kActions) {
            service::Service svc;
            svc.create_study(ex.study);
            auto token = svc.register_participant(ex.study.study_id, {}).token;
            for (auto p : path) perform(svc, ex.study, token, p);
            auto before = svc.get_session(token);
            std::map<std::string, int> last{{before.participant_id, phase_index(before.phase)}};
            perform(svc, ex.study, token, a);
            ++transitions;
            check_invariants(svc.snapshot(ex.study.study_id), ex.study, last, problems);
            auto after = svc.get_session(token);
            int from = phase_index(before.phase), to = phase_index(after.phase);
            // familiarity and the final response each advance exactly one step
            if (to < from || to - from > 1) problems.push_back("jump from phase " + std::to_string(from));
            phases_reached.insert(to);
            auto k = ex.key_of(after);
            if (!seen.contains(k)) {
                auto next = path;
                next.push_back(a);
                seen[k] = next;
                frontier.push_back(std::move(next));
            }
        }
    }
    for (const auto& p : problems) c.expect(false, "model: " + p);
    c.expect(phases_reached.contains(phase_index(Phase::Complete)), "Complete never reached");
    std::size_t model_problems = problems.size();

    // random API fuzz: 10,000 call sequences over a few participants
    std::mt19937_64 rng(8080);
    problems.clear();
    std::size_t calls = 0;
    for (int run = 0; run < 10000; ++run) {
        service::Service svc;
        auto study = testing::small_study(1 + static_cast<int>(rng() % 3));
        study.schedule.familiarization_loops = 1 + static_cast<int>(rng() % 2);
        svc.create_study(study);
        std::vector<std::string> tokens;
        for (int p = 0; p < 1 + static_cast<int>(rng() % 2); ++p) {
            tokens.push_back(svc.register_participant(study.study_id, {}).token);
        }
        int steps = 5 + static_cast<int>(rng() % 30);
        for (int s = 0; s < steps; ++s) {
            auto snap = svc.snapshot(study.study_id);
            std::map<std::string, int> last;
            for (const auto& [pid, progress] : snap.sessions) last[pid] = phase_index(progress.phase);
            auto token = rng() % 20 == 0 ? std::string("forged") : tokens[rng() % tokens.size()];
            // bias toward progress so later phases get exercised
            auto a = kActions[rng() % kActions.size()];
            if (rng() % 3 == 0) {
                auto v = token == "forged" ? service::SessionView{} : svc.get_session(token);
                if (!v.phase) a = Action::Start;
                else if (*v.phase == Phase::PreViewing) a = Action::FamiliarityFull;
                else if (*v.phase == Phase::Familiarization) a = rng() % 4 ? (rng() % 2 ? Action::Loop1 : Action::Loop2) : Action::Advance;
                else a = rng() % 2 ? Action::Respond1 : Action::Respond2;
            }
            try {
                perform(svc, study, token, a, &rng);
            } catch (const std::exception& e) {
                problems.push_back(std::string("non-domain exception: ") + e.what());
            }
            ++calls;
            check_invariants(svc.snapshot(study.study_id), study, last, problems);
        }
    }
    for (const auto& p : problems) c.expect(false, "fuzz: " + p);
    return std::to_string(seen.size()) + " model states, " + std::to_string(transitions) + " transitions, " +
           std::to_string(model_problems) + " violations; fuzz 10000 sequences, " + std::to_string(calls) +
           " calls, " + std::to_string(problems.size()) + " violations";
}

// --- 9 ------------------------------------------------------------------------

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& cmd) {
    Run r;
    FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string shell_quote(const std::filesystem::path& p) { return "\"" + p.string() + "\""; }

std::string heights_dump() {
    const auto study = fixture::generate(1).study;
    const auto& map = *study.replica_map;
    auto grid = design::build_sector_grid(map.extent_m, map.sector_size_m, map.assignments, study.areas);
    std::ostringstream out;
    out.precision(17);
    for (const auto& [id, h] : design::assign_heights(grid, map.zone_limits, map.height_seed)) out << id << " " << h << "\n";
    return out.str();
}

std::string determinism(Check& c, const std::string& self) {
    testing::TempDir dir;
    const std::string vu = shell_quote(VU_CLI_PATH);
    const std::string data = " --data-dir " + shell_quote(dir.path / "data") + " ";
    auto fx = dir.path / "fx";
    c.expect(run(vu + " fixture --out " + shell_quote(fx)).code == 0, "fixture generation failed");
    c.expect(run(vu + data + "ingest --study tokyo-pilot --definition " + shell_quote(fx / "study.json") +
                 " --participants " + shell_quote(fx / "participants.csv") + " --responses " + shell_quote(fx / "responses.csv"))
                     .code == 0,
             "ingest failed");
    std::size_t bytes = 0;
    for (const char* kind : {"metrics", "semantic", "demographics", "histogram"}) {
        auto a = run(vu + data + "report " + kind + " --study tokyo-pilot --format json");
        auto b = run(vu + data + "report " + kind + " --study tokyo-pilot --format json");
        c.expect(a.code == 0 && b.code == 0, std::string(kind) + " report failed");
        c.expect(!a.out.empty() && a.out == b.out, std::string(kind) + " report differs between runs");
        bytes += a.out.size();
    }
    auto h1 = run(shell_quote(self) + " --heights");
    auto h2 = run(shell_quote(self) + " --heights");
    c.expect(h1.code == 0 && !h1.out.empty(), "height dump failed");
    c.expect(h1.out == h2.out, "heights differ between runs");
    c.expect(h1.out == heights_dump(), "heights differ from in-process draw");
    auto lines = std::count(h1.out.begin(), h1.out.end(), '\n');
    return "4 reports (" + std::to_string(bytes) + " bytes) identical across runs; " + std::to_string(lines) +
           " sector heights identical across processes";
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1 && std::string(argv[1]) == "--heights") {
        std::cout << heights_dump();
        return 0;
    }
    criterion(1, "uil-by-group", expected_uil);
    criterion(2, "cohort-accuracy", cohort_stats);
    criterion(3, "group-identity", group_identity);
    criterion(4, "familiarity-rate-properties", familiarity_properties);
    criterion(5, "element-table", element_table);
    criterion(6, "semantic-gating", gating_property);
    criterion(7, "manifest-validators", manifest_validators);
    criterion(8, "session-safety", session_safety);
    const auto self = std::filesystem::read_symlink("/proc/self/exe").string();
    criterion(9, "determinism", [&](Check& c) { return determinism(c, self); });
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
    return std::min(failures, 100);
}
