#include "vu/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "vu/error.hpp"
#include "vu/hash.hpp"
#include "vu/metrics.hpp"
#include "vu/store.hpp"

namespace vu::fixture {

namespace {

using semantic::ThematicGroup;

// Published aggregates the fixture is fitted to, in developmental-origin order.
struct AreaTarget {
    const char* id;
    const char* name;
    int uil_local;   // correct of 20
    int uil_foreign; // correct of 16
    int fr_local;    // display percent
    int fr_foreign;
    int fr_general;
};

constexpr int kLocal = 20;
constexpr int kForeign = 16;

constexpr AreaTarget kAreas[] = {
    {"shimokitazawa", "Shimokitazawa", 18, 13, 61, 44, 53},
    {"harajuku", "Harajuku", 20, 16, 57, 63, 60},
    {"yanesen", "Yanesen", 17, 8, 32, 5, 19},
    {"kagurazaka", "Kagurazaka", 17, 7, 44, 19, 32},
    {"asakusa", "Asakusa", 20, 16, 57, 44, 51},
    {"ueno", "Ueno", 18, 9, 63, 60, 62},
    {"shibuya", "Shibuya", 18, 12, 69, 68, 69},
    {"ikebukuro", "Ikebukuro", 18, 9, 54, 62, 58},
    {"roppongi", "Roppongi", 16, 10, 51, 46, 49},
};
constexpr std::size_t kAreaCount = std::size(kAreas);

// Familiarity orderings as printed, highest first.
const std::vector<std::string> kFrOrderLocal = {"shibuya", "ueno", "shimokitazawa", "harajuku", "asakusa",
                                                "ikebukuro", "roppongi", "kagurazaka", "yanesen"};
const std::vector<std::string> kFrOrderForeign = {"shibuya", "harajuku", "ikebukuro", "ueno", "roppongi",
                                                  "shimokitazawa", "asakusa", "kagurazaka", "yanesen"};
const std::vector<std::string> kFrOrderGeneral = {"shibuya", "ueno", "harajuku", "ikebukuro", "shimokitazawa",
                                                  "asakusa", "roppongi", "kagurazaka", "yanesen"};

// Per-participant incorrect counts. Together with the per-area counts these
// give 14 perfect scores, three at 4 of 9, and 262 of 324 overall.
const std::vector<int> kLocalMisses = {2, 2, 2, 2, 2, 2, 2, 2, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
const std::vector<int> kForeignMisses = {5, 5, 5, 4, 4, 3, 3, 3, 3, 3, 3, 3, 0, 0, 0, 0};

struct TermPlan {
    ThematicGroup group;
    const char* term;
    int count;
};

// Mention counts per area over correctly identified responses. The first
// three are the published top elements; the rest are lower-count cues.
const std::map<std::string, std::vector<TermPlan>>& corpus_plan() {
    using G = ThematicGroup;
    static const std::map<std::string, std::vector<TermPlan>> plan = {
        {"shimokitazawa",
         {{G::Typology, "shops", 31}, {G::Element, "clothing", 25}, {G::Quality, "small", 17},
          {G::Element, "vintage", 8}, {G::Characteristic, "narrow", 6}, {G::Element, "signage", 4}}},
        {"harajuku",
         {{G::Typology, "shops", 24}, {G::Quality, "colorful", 22}, {G::Element, "fashion", 12},
          {G::Quality, "crowded", 9}, {G::Element, "signage", 7}, {G::Characteristic, "narrow", 5}}},
        {"yanesen",
         {{G::Quality, "old", 16}, {G::Typology, "private house", 12}, {G::Characteristic, "narrow", 10},
          {G::Material, "wood", 7}, {G::Quality, "traditional", 6}, {G::Typology, "temples", 4}}},
        {"kagurazaka",
         {{G::Quality, "traditional", 12}, {G::Element, "river", 10}, {G::Characteristic, "narrow", 10},
          {G::Typology, "shops", 7}, {G::Material, "stone", 6}, {G::Quality, "old", 5}}},
        {"asakusa",
         {{G::Color, "red", 38}, {G::Quality, "traditional", 23}, {G::Typology, "temples", 10},
          {G::Element, "lanterns", 9}, {G::Typology, "shops", 8}, {G::Characteristic, "narrow", 3}}},
        {"ueno",
         {{G::Environment, "park", 21}, {G::Characteristic, "wide", 14}, {G::Typology, "izakaya", 13},
          {G::Environment, "greenery", 8}, {G::Element, "signage", 6}, {G::Quality, "old", 4}}},
        {"shibuya",
         {{G::Element, "signage", 32}, {G::Characteristic, "high", 25}, {G::Environment, "river", 20},
          {G::Characteristic, "wide", 9}, {G::Material, "glass", 5}}},
        {"ikebukuro",
         {{G::Element, "signage", 21}, {G::Quality, "cluttered", 10}, {G::Color, "red", 9},
          {G::Characteristic, "high", 6}, {G::Typology, "shops", 5}}},
        {"roppongi",
         {{G::Material, "glass", 10}, {G::Typology, "\"glass\" buildings", 10}, {G::Element, "bridge", 10},
          {G::Characteristic, "high", 8}, {G::Characteristic, "wide", 4}}},
    };
    return plan;
}

const std::vector<std::string> kTemplates = {"{} everywhere", "lots of {} around", "I noticed {} again",
                                             "mostly {} along the way", "{} caught my eye", "it had {} in view"};
const std::vector<std::string> kTemplatesJa = {"{} が 印象的", "{} が 多い"};
const std::vector<std::string> kPadding = {"hard to say", "overall a calm mood", "felt familiar somehow",
                                           "not sure about this one", "quiet at first glance"};

std::string fill(const std::string& pattern, const std::string& surface) {
    auto pos = pattern.find("{}");
    return pattern.substr(0, pos) + surface + pattern.substr(pos + 2);
}

bool is_ascii(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return c < 0x80; });
}

int display(std::int64_t tenths, int respondents) {
    return metrics::display_percent(Rational(tenths, 10 * respondents));
}

// (local tenths, foreign tenths) per area.
struct FamiliarityFit {
    std::vector<std::pair<int, int>> sums;
    std::vector<std::string> notes;
};

std::vector<std::string> order_by(const std::vector<std::int64_t>& values) {
    std::vector<std::size_t> idx(kAreaCount);
    std::iota(idx.begin(), idx.end(), 0);
    // ties fall back to origin order, which is the index order
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    std::vector<std::string> out;
    for (auto i : idx) out.push_back(kAreas[i].id);
    return out;
}

FamiliarityFit fit_familiarity() {
    std::vector<std::vector<std::pair<int, int>>> candidates(kAreaCount);
    for (std::size_t a = 0; a < kAreaCount; ++a) {
        for (int sl = 0; sl <= 10 * kLocal; ++sl) {
            if (display(sl, kLocal) != kAreas[a].fr_local || !familiarity_counts(kLocal, sl)) continue;
            for (int sf = 0; sf <= 10 * kForeign; ++sf) {
                if (display(sf, kForeign) != kAreas[a].fr_foreign || !familiarity_counts(kForeign, sf)) continue;
                candidates[a].push_back({sl, sf});
            }
        }
        if (candidates[a].empty()) {
            throw Error(ErrorCode::Unsatisfiable,
                        std::string("no familiarity sums reproduce the local/foreign rates for ") + kAreas[a].id);
        }
    }

    // Exhaustive over the (small) product: local and foreign orderings are
    // hard constraints, general displays are maximized, general ordering is
    // required.
    std::vector<std::size_t> pick(kAreaCount, 0), best;
    int best_hits = -1;
    std::int64_t best_err = 0;
    while (true) {
        std::vector<std::int64_t> local(kAreaCount), foreign(kAreaCount), general(kAreaCount);
        for (std::size_t a = 0; a < kAreaCount; ++a) {
            local[a] = candidates[a][pick[a]].first;
            foreign[a] = candidates[a][pick[a]].second;
            general[a] = local[a] + foreign[a];
        }
        if (order_by(local) == kFrOrderLocal && order_by(foreign) == kFrOrderForeign &&
            order_by(general) == kFrOrderGeneral) {
            int hits = 0;
            std::int64_t err = 0;  // distance from target in 1/360 units, times 100
            for (std::size_t a = 0; a < kAreaCount; ++a) {
                if (display(general[a], kLocal + kForeign) == kAreas[a].fr_general) ++hits;
                err += std::abs(general[a] * 100 - kAreas[a].fr_general * 10 * (kLocal + kForeign));
            }
            if (hits > best_hits || (hits == best_hits && err < best_err)) {
                best_hits = hits;
                best_err = err;
                best = pick;
            }
        }
        std::size_t i = 0;
        while (i < kAreaCount && ++pick[i] == candidates[i].size()) pick[i++] = 0;
        if (i == kAreaCount) break;
    }
    if (best.empty()) throw Error(ErrorCode::Unsatisfiable, "familiarity orderings cannot all be reproduced");

    FamiliarityFit fit;
    for (std::size_t a = 0; a < kAreaCount; ++a) {
        auto [sl, sf] = candidates[a][best[a]];
        fit.sums.push_back({sl, sf});
        int g = display(sl + sf, kLocal + kForeign);
        if (g != kAreas[a].fr_general) {
            fit.notes.push_back(std::string("general familiarity rate for ") + kAreas[a].id + " is " +
                                std::to_string(g) + "% (target " + std::to_string(kAreas[a].fr_general) +
                                "%): no local/foreign split matching both group rates reaches it");
        }
    }
    return fit;
}

std::vector<FamiliarityLevel> expand(const std::array<int, 4>& counts) {
    std::vector<FamiliarityLevel> out;
    for (int i = 3; i >= 0; --i) out.insert(out.end(), counts[i], kFamiliarityLevels[i]);
    return out;
}

}  // namespace

std::vector<std::vector<int>> zero_one_matrix(const std::vector<int>& row_sums, const std::vector<int>& col_sums) {
    const auto cols = col_sums.size();
    long total_r = std::accumulate(row_sums.begin(), row_sums.end(), 0L);
    long total_c = std::accumulate(col_sums.begin(), col_sums.end(), 0L);
    if (total_r != total_c) {
        throw Error(ErrorCode::Unsatisfiable, "row sums total " + std::to_string(total_r) + " but column sums total " +
                                                  std::to_string(total_c));
    }
    std::vector<std::size_t> rows(row_sums.size());
    std::iota(rows.begin(), rows.end(), 0);
    std::stable_sort(rows.begin(), rows.end(), [&](auto a, auto b) { return row_sums[a] > row_sums[b]; });

    std::vector<std::vector<int>> m(row_sums.size(), std::vector<int>(cols, 0));
    auto remaining = col_sums;
    for (auto r : rows) {
        if (row_sums[r] < 0 || static_cast<std::size_t>(row_sums[r]) > cols) {
            throw Error(ErrorCode::Unsatisfiable, "row " + std::to_string(r) + " sum out of range");
        }
        std::vector<std::size_t> order(cols);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return remaining[a] > remaining[b]; });
        for (int k = 0; k < row_sums[r]; ++k) {
            auto c = order[static_cast<std::size_t>(k)];
            if (remaining[c] <= 0) {
                throw Error(ErrorCode::Unsatisfiable,
                            "row sums cannot be placed under the column sums (Gale-Ryser condition fails)");
            }
            m[r][c] = 1;
            --remaining[c];
        }
    }
    return m;
}

std::optional<std::array<int, 4>> familiarity_counts(int respondents, int tenths) {
    std::optional<std::array<int, 4>> best;
    int best_max = 0;
    for (int n10 = 0; n10 <= respondents; ++n10) {
        for (int n7 = 0; n10 + n7 <= respondents; ++n7) {
            int rest = tenths - 10 * n10 - 7 * n7;
            if (rest < 0 || rest % 4) continue;
            int n4 = rest / 4;
            int n0 = respondents - n10 - n7 - n4;
            if (n0 < 0) continue;
            int mx = std::max({n0, n4, n7, n10});
            if (!best || mx < best_max) {
                best = std::array<int, 4>{n0, n4, n7, n10};
                best_max = mx;
            }
        }
    }
    return best;
}

std::map<int, std::array<int, 3>> dataset_splits(double tolerance_pp) {
    std::map<int, std::array<int, 3>> out;
    for (int n = 60; n <= 66; ++n) {
        double best = 1e9;
        for (int s = 0; s <= n; ++s) {
            for (int f = 0; s + f <= n; ++f) {
                int d = n - s - f;
                double dev = std::max({std::abs(100.0 * s / n - 63.0), std::abs(100.0 * f / n - 35.0),
                                       std::abs(100.0 * d / n - 2.0)});
                if (dev <= tolerance_pp && dev < best) {
                    best = dev;
                    out[n] = {s, f, d};
                }
            }
        }
    }
    return out;
}

Fixture generate(std::uint64_t seed) {
    Fixture fx;
    fx.lexicon = semantic::starter_lexicon();

    // --- study definition
    auto& study = fx.study;
    study.study_id = "tokyo-pilot";
    study.title = "Nine-area synthetic sequence identification pilot";
    study.presentation_seed = splitmix64(seed);
    std::vector<std::string> labels;
    for (char c = 'A'; c < 'A' + static_cast<char>(kAreaCount); ++c) labels.push_back(std::string("seq-") + c);
    seeded_shuffle(labels, splitmix64(seed ^ 0x5eedULL));
    std::map<std::string, std::string> seq_of;  // area -> sequence id
    const auto splits = dataset_splits();
    for (std::size_t a = 0; a < kAreaCount; ++a) {
        study.areas.push_back({kAreas[a].id, kAreas[a].name, static_cast<int>(a) + 1});
        seq_of[kAreas[a].id] = labels[a];
        study.sequences.push_back({labels[a], kAreas[a].id, "media/" + labels[a] + ".mp4", 30.0, 385, 13.0,
                                   0.60 + 0.01 * static_cast<double>(a % 9)});
        design::DatasetManifest d;
        d.area_id = kAreas[a].id;
        const int size = 60 + static_cast<int>(a % 7);
        const auto [s, f, det] = splits.at(size);
        for (int i = 0; i < size; ++i) {
            auto typ = i < s ? design::Typology::StreetView : i < s + f ? design::Typology::Facade : design::Typology::Detail;
            bool portrait = i % 3 == 0;
            char id[64];
            std::snprintf(id, sizeof id, "%s-%03d", kAreas[a].id, i + 1);
            d.image_records.push_back({id, typ, portrait ? 3024 : 4032, portrait ? 4032 : 3024});
        }
        study.datasets.push_back(std::move(d));
    }
    std::sort(study.sequences.begin(), study.sequences.end(),
              [](const auto& x, const auto& y) { return x.sequence_id < y.sequence_id; });
    study.lora = design::kReferenceLoRAConfig;
    design::ReplicaMap map;
    map.declared_extent_m = 1500;
    map.declared_sector_count = 64;
    map.extent_m = 1600;
    map.sector_size_m = 200;
    for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) map.assignments[{r, c}] = kAreas[(r * 8 + c) % kAreaCount].id;
    }
    const double limits[][2] = {{6, 15}, {8, 40}, {5, 12}, {6, 20}, {6, 30}, {8, 45}, {20, 180}, {15, 120}, {25, 240}};
    for (std::size_t a = 0; a < kAreaCount; ++a) map.zone_limits[kAreas[a].id] = {limits[a][0], limits[a][1]};
    map.height_seed = 42;
    study.replica_map = map;

    // --- participants
    const char* professions[] = {"architecture student", "architect", "engineer", "academic", "employee"};
    // residence buckets per group: local 6/2/12 over 1-3y/3-5y/5y+, foreign 3/8/3/2
    std::vector<ResidenceBucket> local_res, foreign_res;
    local_res.insert(local_res.end(), 6, ResidenceBucket::OneToThreeYears);
    local_res.insert(local_res.end(), 2, ResidenceBucket::ThreeToFiveYears);
    local_res.insert(local_res.end(), 12, ResidenceBucket::FiveYearsOrMore);
    foreign_res.insert(foreign_res.end(), 3, ResidenceBucket::UpTo1Year);
    foreign_res.insert(foreign_res.end(), 8, ResidenceBucket::OneToThreeYears);
    foreign_res.insert(foreign_res.end(), 3, ResidenceBucket::ThreeToFiveYears);
    foreign_res.insert(foreign_res.end(), 2, ResidenceBucket::FiveYearsOrMore);
    for (int i = 0; i < kLocal + kForeign; ++i) {
        ParticipantRecord p;
        p.participant_id = "P" + std::to_string(i + 1);
        bool local = i < kLocal;
        p.group = local ? ParticipantGroup::Local : ParticipantGroup::Foreign;
        p.age = 21 + (i * 7) % 22;
        p.residence = local ? local_res[static_cast<std::size_t>(i)] : foreign_res[static_cast<std::size_t>(i - kLocal)];
        p.profession = professions[(i * 3) % 5];
        p.ai_familiarity = i % 4 == 0 ? "regular" : "occasional";
        fx.participants.push_back(std::move(p));
    }

    // --- familiarity
    auto fit = fit_familiarity();
    for (auto& n : fit.notes) fx.notes.push_back(n);
    for (std::size_t a = 0; a < kAreaCount; ++a) {
        for (int g = 0; g < 2; ++g) {
            int n = g == 0 ? kLocal : kForeign;
            int offset = g == 0 ? 0 : kLocal;
            int tenths = g == 0 ? fit.sums[a].first : fit.sums[a].second;
            auto levels = expand(*familiarity_counts(n, tenths));
            for (int i = 0; i < n; ++i) {
                fx.participants[static_cast<std::size_t>(offset + i)].familiarity_profile[kAreas[a].id] =
                    levels[static_cast<std::size_t>((i + 3 * static_cast<int>(a)) % n)];
            }
        }
    }

    // --- identification outcomes: misses[participant][area]
    std::vector<std::vector<int>> misses;
    for (int g = 0; g < 2; ++g) {
        std::vector<int> cols;
        for (const auto& t : kAreas) cols.push_back(g == 0 ? kLocal - t.uil_local : kForeign - t.uil_foreign);
        auto rows = g == 0 ? kLocalMisses : kForeignMisses;
        seeded_shuffle(rows, g == 0 ? 11 : 17);  // spread scores over labels; fixed, not seeded
        auto m = zero_one_matrix(rows, cols);
        misses.insert(misses.end(), m.begin(), m.end());
    }

    // --- corpus
    SplitMix pad_rng(splitmix64(seed ^ 0xc0ffeeULL));
    std::vector<std::array<std::string, 4>> text(kAreaCount * fx.participants.size());
    auto slot = [&](std::size_t participant, std::size_t area) -> std::array<std::string, 4>& {
        return text[participant * kAreaCount + area];
    };
    auto surfaces_of = [&](ThematicGroup group, const std::string& term) {
        std::vector<std::string> out;
        for (const auto& [surface, entry] : fx.lexicon.entries()) {
            if (entry.group == group && entry.canonical_term == term) out.push_back(surface);
        }
        if (out.empty()) throw Error(ErrorCode::Unsatisfiable, "lexicon has no surface form for '" + term + "'");
        return out;
    };
    auto append = [](std::string& into, const std::string& snippet) {
        into += into.empty() ? snippet : ", " + snippet;
    };
    for (std::size_t a = 0; a < kAreaCount; ++a) {
        std::vector<std::size_t> correct, wrong;
        for (std::size_t p = 0; p < fx.participants.size(); ++p) (misses[p][a] ? wrong : correct).push_back(p);
        std::size_t mention = 0;
        for (const auto& plan : corpus_plan().at(kAreas[a].id)) {
            auto surfaces = surfaces_of(plan.group, plan.term);
            for (int j = 0; j < plan.count; ++j, ++mention) {
                const auto& surface = surfaces[(mention * 7 + a) % surfaces.size()];
                const auto& templates = is_ascii(surface) ? kTemplates : kTemplatesJa;
                auto& items = slot(correct[mention % correct.size()], a);
                append(items[(mention / correct.size() + mention) % 4],
                       fill(templates[(mention + a) % templates.size()], surface));
            }
        }
        // wrong guesses still describe what was seen, using cues of the area
        // they were mistaken for
        const auto& guessed_plan = corpus_plan().at(kAreas[(a + 1) % kAreaCount].id);
        for (std::size_t w = 0; w < wrong.size(); ++w) {
            const auto& plan = guessed_plan[w % guessed_plan.size()];
            const auto surface = surfaces_of(plan.group, plan.term).front();
            append(slot(wrong[w], a)[w % 4], fill(kTemplates[w % kTemplates.size()], surface));
        }
        for (std::size_t p = 0; p < fx.participants.size(); ++p) {
            auto& items = slot(p, a);
            auto k = pad_rng.below(5);
            if (k < 4) append(items[k], kPadding[pad_rng.below(kPadding.size())]);
        }
    }

    for (std::size_t p = 0; p < fx.participants.size(); ++p) {
        for (std::size_t a = 0; a < kAreaCount; ++a) {
            SequenceResponse r;
            r.participant_id = fx.participants[p].participant_id;
            r.sequence_id = seq_of.at(kAreas[a].id);
            r.guessed_area_id = misses[p][a] ? kAreas[(a + 1) % kAreaCount].id : kAreas[a].id;
            auto& items = slot(p, a);
            r.q2_text = items[0];
            r.q3_text = items[1];
            r.q4_text = items[2];
            r.q5_text = items[3];
            r.loops_viewed = 5;
            fx.responses.push_back(std::move(r));
        }
    }

    // --- self-check against the plan
    auto table = semantic::element_frequencies(fx.responses, study.areas, design::answer_key(study), fx.lexicon);
    for (std::size_t a = 0; a < kAreaCount; ++a) {
        std::map<std::pair<ThematicGroup, std::string>, std::size_t> want, got;
        for (const auto& plan : corpus_plan().at(kAreas[a].id)) want[{plan.group, plan.term}] += plan.count;
        for (const auto& row : table.by_area.at(kAreas[a].id)) got[{row.group, row.canonical_term}] += row.count;
        if (want != got) {
            throw Error(ErrorCode::Unsatisfiable, std::string("generated corpus for ") + kAreas[a].id +
                                                      " does not reproduce its planned term counts");
        }
    }

    // --- manifest
    json uil = json::object(), fam = json::object();
    for (std::size_t a = 0; a < kAreaCount; ++a) {
        uil[kAreas[a].id] = {{"local", kAreas[a].uil_local}, {"foreign", kAreas[a].uil_foreign}};
        fam[kAreas[a].id] = {{"local_tenths", fit.sums[a].first}, {"foreign_tenths", fit.sums[a].second}};
    }
    json sequences = json::object();
    for (const auto& s : study.sequences) sequences[s.sequence_id] = s.area_id;
    fx.manifest = {{"seed", seed},
                   {"study_id", study.study_id},
                   {"participants", fx.participants.size()},
                   {"responses", fx.responses.size()},
                   {"sequences", sequences},
                   {"correct_counts", uil},
                   {"familiarity_weight_sums", fam},
                   {"lexicon_version", fx.lexicon.version()},
                   {"notes", fx.notes}};
    return fx;
}

void write(const Fixture& fx, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw Error(ErrorCode::IoError, "cannot write " + (dir / name).string());
        return out;
    };
    open("study.json") << json(fx.study).dump(2) << "\n";
    open("fixture_manifest.json") << fx.manifest.dump(2) << "\n";
    {
        auto out = open("lexicon.csv");
        fx.lexicon.write(out);
    }

    // Round the rows through a store so exports use the canonical layout.
    auto log = store::EventLog::in_memory();
    log.append(store::EventKind::StudyCreated, json(fx.study), 0);
    for (const auto& p : fx.participants) log.append(store::EventKind::ParticipantRegistered, json{{"participant", p}}, 0);
    for (const auto& r : fx.responses) log.append(store::EventKind::ResponseSubmitted, json(r), 0);
    {
        auto out = open("participants.csv");
        store::export_participants(log.state(), store::ImportFormat::DelimitedTable, out);
    }
    {
        auto out = open("responses.csv");
        store::export_responses(log.state(), store::ImportFormat::DelimitedTable, out);
    }
    {
        auto out = open("responses.jsonl");
        store::export_responses(log.state(), store::ImportFormat::RecordPerLine, out);
    }
}

}  // namespace vu::fixture
