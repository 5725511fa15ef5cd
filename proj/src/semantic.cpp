#include "vu/semantic.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <tuple>

#include "vu/csv.hpp"
#include "vu/error.hpp"

namespace vu::semantic {

namespace {

enum class CharClass { Separator, Word, Unspaced, Dropped };

// Decodes one UTF-8 code point starting at text[i]; advances i. Invalid
// bytes decode as U+FFFD and consume one byte.
char32_t decode(std::string_view text, std::size_t& i) {
    auto b0 = static_cast<unsigned char>(text[i]);
    int len = b0 < 0x80 ? 1 : (b0 >> 5) == 0x6 ? 2 : (b0 >> 4) == 0xE ? 3 : (b0 >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || i + static_cast<std::size_t>(len) > text.size()) {
        ++i;
        return 0xFFFD;
    }
    char32_t cp = len == 1 ? b0 : len == 2 ? (b0 & 0x1F) : len == 3 ? (b0 & 0x0F) : (b0 & 0x07);
    for (int k = 1; k < len; ++k) {
        auto b = static_cast<unsigned char>(text[i + static_cast<std::size_t>(k)]);
        if ((b >> 6) != 0x2) {
            ++i;
            return 0xFFFD;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    i += static_cast<std::size_t>(len);
    return cp;
}

void encode(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Folds case for ASCII and full-width Latin; other code points unchanged.
char32_t fold(char32_t cp) {
    if (cp >= 0xFF01 && cp <= 0xFF5E) cp -= 0xFEE0;  // full-width ASCII block
    if (cp >= 'A' && cp <= 'Z') cp += 'a' - 'A';
    return cp;
}

CharClass classify(char32_t cp) {
    if (cp < 0x80) {
        if ((cp >= 'a' && cp <= 'z') || (cp >= '0' && cp <= '9')) return CharClass::Word;
        if (cp == '\'') return CharClass::Dropped;
        return CharClass::Separator;
    }
    if (cp == 0x2019 || cp == 0x2018) return CharClass::Dropped;  // curly apostrophes
    if (cp == 0x3005) return CharClass::Unspaced;                   // 々
    if (cp >= 0x3000 && cp <= 0x303F) return CharClass::Separator;  // CJK punctuation
    if ((cp >= 0x3040 && cp <= 0x30FF) || (cp >= 0x31F0 && cp <= 0x31FF) ||
        (cp >= 0x3400 && cp <= 0x4DBF) || (cp >= 0x4E00 && cp <= 0x9FFF) ||
        (cp >= 0xF900 && cp <= 0xFAFF) || (cp >= 0xFF66 && cp <= 0xFF9F)) {
        if (cp == 0x30FB) return CharClass::Separator;  // ・
        return CharClass::Unspaced;
    }
    if ((cp >= 0x2000 && cp <= 0x206F) || cp == 0x00A0 || (cp >= 0xFF01 && cp <= 0xFF65) ||
        cp == 0xFFFD || (cp >= 0x00A1 && cp <= 0x00BF) || cp == 0x00D7 || cp == 0x00F7 ||
        (cp >= 0x25A0 && cp <= 0x27BF)) {
        return CharClass::Separator;
    }
    return CharClass::Word;
}

// Segments a run of unspaced code points. Without a lexicon the run stays one
// token; with one, longest match wins and unmatched characters stand alone.
void segment(const std::vector<std::string>& chars, const Lexicon* lexicon,
             std::vector<std::string>& out) {
    if (chars.empty()) return;
    if (lexicon == nullptr) {
        std::string whole;
        for (const auto& c : chars) whole += c;
        out.push_back(std::move(whole));
        return;
    }
    const std::size_t max_len = std::max<std::size_t>(1, lexicon->max_unspaced_codepoints());
    std::size_t i = 0;
    while (i < chars.size()) {
        std::size_t taken = 1;
        for (std::size_t len = std::min(max_len, chars.size() - i); len >= 1; --len) {
            std::string candidate;
            for (std::size_t k = i; k < i + len; ++k) candidate += chars[k];
            if (lexicon->unspaced_forms().contains(candidate)) {
                taken = len;
                break;
            }
        }
        std::string tok;
        for (std::size_t k = i; k < i + taken; ++k) tok += chars[k];
        out.push_back(std::move(tok));
        i += taken;
    }
}

bool is_unspaced_token(std::string_view tok) {
    std::size_t i = 0;
    while (i < tok.size()) {
        if (classify(decode(tok, i)) != CharClass::Unspaced) return false;
    }
    return !tok.empty();
}

std::size_t codepoints(std::string_view s) {
    std::size_t n = 0, i = 0;
    while (i < s.size()) {
        decode(s, i);
        ++n;
    }
    return n;
}

std::string join_tokens(std::span<const std::string> tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

}  // namespace

Theme project_theme(ThematicGroup group) {
    switch (group) {
    case ThematicGroup::Element: return Theme::Elements;
    case ThematicGroup::Environment: return Theme::Environment;
    case ThematicGroup::Typology: return Theme::Typology;
    case ThematicGroup::Color: return Theme::Color;
    case ThematicGroup::Quality:
    case ThematicGroup::Characteristic:
    case ThematicGroup::Material: return Theme::QualitativeCharacteristics;
    }
    return Theme::Elements;
}

std::string_view to_string(ThematicGroup group) {
    switch (group) {
    case ThematicGroup::Element: return "Element";
    case ThematicGroup::Environment: return "Environment";
    case ThematicGroup::Typology: return "Typology";
    case ThematicGroup::Color: return "Color";
    case ThematicGroup::Quality: return "Quality";
    case ThematicGroup::Characteristic: return "Characteristic";
    case ThematicGroup::Material: return "Material";
    }
    return "Element";
}

std::string_view to_string(Theme theme) {
    switch (theme) {
    case Theme::Elements: return "Elements";
    case Theme::Environment: return "Environment";
    case Theme::Typology: return "Typology";
    case Theme::Color: return "Color";
    case Theme::QualitativeCharacteristics: return "Qualitative Characteristics";
    }
    return "Elements";
}

ThematicGroup parse_thematic_group(std::string_view text) {
    for (auto g : kThematicGroups) {
        if (to_string(g) == text) return g;
    }
    throw Error(ErrorCode::SchemaViolation, "unknown thematic group '" + std::string(text) + "'");
}

namespace {

std::vector<std::string> tokenize(std::string_view text, const Lexicon* lexicon) {
    std::vector<std::string> out;
    std::string word;
    std::vector<std::string> run;

    auto flush_word = [&] {
        if (!word.empty()) out.push_back(std::move(word));
        word.clear();
    };
    auto flush_run = [&] {
        segment(run, lexicon, out);
        run.clear();
    };

    std::size_t i = 0;
    while (i < text.size()) {
        char32_t cp = fold(decode(text, i));
        switch (classify(cp)) {
        case CharClass::Separator:
            flush_word();
            flush_run();
            break;
        case CharClass::Dropped:
            break;
        case CharClass::Word:
            flush_run();
            encode(cp, word);
            break;
        case CharClass::Unspaced: {
            flush_word();
            std::string ch;
            encode(cp, ch);
            run.push_back(std::move(ch));
            break;
        }
        }
    }
    flush_word();
    flush_run();
    return out;
}

}  // namespace

std::vector<std::string> normalize_tokens(std::string_view text, const Lexicon* lexicon) {
    return tokenize(text, lexicon);
}

void Lexicon::add(std::string_view surface, std::string canonical_term, ThematicGroup group) {
    if (canonical_term.empty()) {
        throw Error(ErrorCode::SchemaViolation, "empty canonical term for '" + std::string(surface) + "'");
    }
    auto tokens = tokenize(surface, nullptr);
    if (tokens.empty()) throw Error(ErrorCode::SchemaViolation, "empty surface form");
    std::string key = join_tokens(tokens);
    if (entries_.contains(key)) {
        throw Error(ErrorCode::SchemaViolation, "duplicate surface form '" + key + "'");
    }
    entries_.emplace(key, LexiconEntry{std::move(canonical_term), group});
    max_phrase_tokens_ = std::max(max_phrase_tokens_, tokens.size());
    for (const auto& tok : tokens) {
        if (is_unspaced_token(tok)) {
            unspaced_forms_.insert(tok);
            max_unspaced_codepoints_ = std::max(max_unspaced_codepoints_, codepoints(tok));
        }
    }
}

const LexiconEntry* Lexicon::find(std::string_view normalized_surface) const {
    auto it = entries_.find(std::string(normalized_surface));
    return it == entries_.end() ? nullptr : &it->second;
}

Lexicon Lexicon::parse(std::istream& in) {
    Lexicon lex;
    csv::Reader reader(in);
    bool header_seen = false;
    while (auto row = reader.next()) {
        if (row->size() == 1 && row->front().text.empty()) continue;
        const auto& first = row->front();
        if (!first.quoted && !first.text.empty() && first.text.front() == '#') {
            std::string line = first.text;
            for (std::size_t k = 1; k < row->size(); ++k) line += "," + (*row)[k].text;
            constexpr std::string_view tag = "# version:";
            if (line.rfind(tag, 0) == 0) {
                auto v = line.substr(tag.size());
                v.erase(0, v.find_first_not_of(' '));
                lex.version_ = v;
            }
            continue;
        }
        auto fields = csv::texts(*row);
        if (!header_seen) {
            if (fields.size() != 3 || fields[0] != "surface" || fields[1] != "canonical_term" ||
                fields[2] != "group") {
                throw Error(ErrorCode::SchemaViolation,
                            "lexicon line " + std::to_string(reader.line()) +
                                ": expected header surface,canonical_term,group");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 3) {
            throw Error(ErrorCode::SchemaViolation,
                        "lexicon line " + std::to_string(reader.line()) + ": expected 3 fields");
        }
        try {
            lex.add(fields[0], fields[1], parse_thematic_group(fields[2]));
        } catch (const Error& e) {
            throw Error(e.code(), "lexicon line " + std::to_string(reader.line()) + ": " + e.what());
        }
    }
    return lex;
}

Lexicon Lexicon::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open lexicon '" + path + "'");
    return parse(in);
}

void Lexicon::write(std::ostream& out) const {
    if (!version_.empty()) out << "# version: " << version_ << "\n";
    out << "surface,canonical_term,group\n";
    for (const auto& [surface, entry] : entries_) {
        out << csv::join({surface, entry.canonical_term, std::string(to_string(entry.group))}) << "\n";
    }
}

const Lexicon& starter_lexicon() {
    static const Lexicon lexicon = [] {
        using G = ThematicGroup;
        struct Row {
            const char* canonical;
            G group;
            std::initializer_list<const char*> surfaces;
        };
        const Row rows[] = {
            {"shops", G::Typology, {"shop", "shops", "shopfront", "shopfronts", "storefront", "storefronts", "店", "商店"}},
            {"clothing", G::Element, {"clothing", "clothes", "apparel", "古着", "服"}},
            {"small", G::Quality, {"small", "tiny", "小さい"}},
            {"colorful", G::Quality, {"colorful", "colourful", "vivid", "カラフル"}},
            {"fashion", G::Element, {"fashion", "fashionable", "ファッション"}},
            {"old", G::Quality, {"old", "aged", "古い"}},
            {"private house", G::Typology, {"private house", "private houses", "detached house", "detached houses", "民家"}},
            {"narrow", G::Characteristic, {"narrow", "狭い"}},
            {"traditional", G::Quality, {"traditional", "伝統的"}},
            // Waterside cues read as an element (canal, moat) are kept apart
            // from an open river corridor read as environment.
            {"river", G::Element, {"canal", "canals", "moat", "堀"}},
            {"river", G::Environment, {"river", "rivers", "stream", "川"}},
            {"red", G::Color, {"red", "crimson", "赤"}},
            {"temples", G::Typology, {"temple", "temples", "寺"}},
            {"park", G::Environment, {"park", "parks", "公園"}},
            {"izakaya", G::Typology, {"izakaya", "izakayas", "居酒屋"}},
            {"wide", G::Characteristic, {"wide", "broad", "広い"}},
            {"signage", G::Element, {"signage", "sign", "signs", "signboards", "billboards", "看板"}},
            {"high", G::Characteristic, {"high", "tall", "高い"}},
            {"cluttered", G::Quality, {"cluttered", "messy", "雑多"}},
            {"glass", G::Material, {"glass", "ガラス"}},
            {"\"glass\" buildings", G::Typology, {"glass buildings", "glass building", "glass towers", "glass tower"}},
            {"bridge", G::Element, {"bridge", "bridges", "pedestrian bridge", "橋"}},
            {"lanterns", G::Element, {"lantern", "lanterns", "提灯"}},
            {"vintage", G::Element, {"vintage"}},
            {"crowded", G::Quality, {"crowded", "混雑"}},
            {"wood", G::Material, {"wood", "wooden", "木造"}},
            {"greenery", G::Environment, {"greenery", "trees", "緑"}},
            {"stone", G::Material, {"stone", "cobblestone", "石畳"}},
        };
        Lexicon lex("starter-1");
        for (const auto& row : rows) {
            for (const char* s : row.surfaces) lex.add(s, row.canonical, row.group);
        }
        return lex;
    }();
    return lexicon;
}

TermMapping map_terms(std::span<const std::string> tokens, const Lexicon& lexicon) {
    TermMapping out;
    const std::size_t max_len = std::max<std::size_t>(1, lexicon.max_phrase_tokens());
    std::size_t i = 0;
    while (i < tokens.size()) {
        bool matched = false;
        for (std::size_t len = std::min(max_len, tokens.size() - i); len >= 1; --len) {
            if (const auto* entry = lexicon.find(join_tokens(tokens.subspan(i, len)))) {
                out.hits.push_back({entry->canonical_term, entry->group});
                out.matched_tokens += len;
                i += len;
                matched = true;
                break;
            }
        }
        if (!matched) {
            ++out.unmatched_tokens;
            ++i;
        }
    }
    return out;
}

bool element_order(const ElementCount& a, const ElementCount& b) {
    if (a.count != b.count) return a.count > b.count;
    if (a.group != b.group) return a.group < b.group;
    return a.canonical_term < b.canonical_term;
}

ElementFrequencyTable element_frequencies(std::span<const SequenceResponse> responses,
                                          std::span<const StudyArea> areas,
                                          const std::map<std::string, std::string>& answer_key,
                                          const Lexicon& lexicon, const FrequencyOptions& options,
                                          const std::map<std::string, ParticipantGroup>* groups) {
    using Key = std::pair<ThematicGroup, std::string>;
    std::map<std::string, std::map<Key, std::size_t>> counts;
    ElementFrequencyTable table;
    for (const auto& a : areas) {
        counts[a.area_id];
        table.stats[a.area_id];
    }

    for (const auto& r : responses) {
        auto key_it = answer_key.find(r.sequence_id);
        if (key_it == answer_key.end()) {
            throw Error(ErrorCode::UnknownSequence, "unknown sequence '" + r.sequence_id + "'");
        }
        const std::string& area = key_it->second;
        if (!r.guessed_area_id || *r.guessed_area_id != area) continue;
        if (options.group) {
            if (groups == nullptr) throw Error(ErrorCode::BadRequest, "group filter needs group index");
            auto g = groups->find(r.participant_id);
            if (g == groups->end() || !group_in_view(g->second, *options.group)) continue;
        }

        auto& stats = table.stats[area];
        auto& area_counts = counts[area];
        ++stats.correct_responses;
        auto texts = r.free_text();
        for (std::size_t item = 0; item < texts.size(); ++item) {
            if (!options.include_items[item]) continue;
            auto tokens = normalize_tokens(texts[item], &lexicon);
            auto mapping = map_terms(tokens, lexicon);
            stats.total_tokens += tokens.size();
            stats.matched_tokens += mapping.matched_tokens;
            stats.unmatched_tokens += mapping.unmatched_tokens;
            stats.hits += mapping.hits.size();
            for (auto& hit : mapping.hits) ++area_counts[{hit.group, hit.canonical_term}];
        }
    }

    for (auto& [area, terms] : counts) {
        auto& rows = table.by_area[area];
        for (const auto& [key, n] : terms) rows.push_back({key.first, key.second, n});
        std::sort(rows.begin(), rows.end(), element_order);
    }
    return table;
}

ElementFrequencyTable top_k_elements(const ElementFrequencyTable& table, int k) {
    if (k < 1) throw Error(ErrorCode::BadRequest, "k must be at least 1");
    ElementFrequencyTable out = table;
    for (auto& [area, rows] : out.by_area) {
        if (rows.size() > static_cast<std::size_t>(k)) rows.resize(static_cast<std::size_t>(k));
    }
    return out;
}

}  // namespace vu::semantic
