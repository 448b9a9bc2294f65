#include "gbv/anonymize.hpp"

#include <algorithm>
#include <map>

#include "gbv/errors.hpp"
#include "gbv/util.hpp"

namespace gbv::anon {

std::string_view to_string(PiiKind k) {
    switch (k) {
        case PiiKind::Date: return "Date";
        case PiiKind::Id: return "Id";
        case PiiKind::Phone: return "Phone";
        case PiiKind::Place: return "Place";
        case PiiKind::NameCandidate: return "NameCandidate";
    }
    return "Date";
}

std::string_view placeholder(PiiKind k) {
    switch (k) {
        case PiiKind::Date: return "[DATE]";
        case PiiKind::Id: return "[ID]";
        case PiiKind::Phone: return "[PHONE]";
        case PiiKind::Place: return "[PLACE]";
        case PiiKind::NameCandidate: return "[NAME]";
    }
    return "[PII]";
}

namespace {

PiiKind parse_kind(std::string_view s) {
    if (s == "Date") return PiiKind::Date;
    if (s == "Id") return PiiKind::Id;
    if (s == "Phone") return PiiKind::Phone;
    if (s == "Place") return PiiKind::Place;
    throw PatternError("unknown PII kind in pattern file: " + std::string(s));
}

constexpr const char* kDefaultPatterns =
    "# kind<TAB>regex, one per line\n"
    "Date\t\\b\\d{1,2}[/-]\\d{1,2}[/-]\\d{2,4}\\b\n"
    "Date\t\\b\\d{4}-\\d{2}-\\d{2}\\b\n"
    "Id\t\\b\\d{3}\\.\\d{3}\\.\\d{3}-\\d{2}\\b\n"
    "Id\t\\b\\d{11,15}\\b\n"
    "Phone\t\\(\\d{2}\\)\\s?\\d{4,5}-\\d{4}\\b\n"
    "Phone\t\\b\\d{4,5}-\\d{4}\\b\n";

struct Token {
    std::size_t begin = 0; // code points
    std::size_t end = 0;
    std::string text;
};

std::vector<Token> tokenize(std::span<const char32_t> cps) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto is_word = [](char32_t c) { return cp_is_letter(c) || (c >= U'0' && c <= U'9'); };
    while (i < cps.size()) {
        if (!is_word(cps[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < cps.size() && is_word(cps[j])) ++j;
        out.push_back({i, j, utf8_encode(cps.subspan(i, j - i))});
        i = j;
    }
    return out;
}

} // namespace

PatternSet PatternSet::parse(std::string_view text) {
    PatternSet set;
    std::size_t line_no = 0;
    for (const std::string& raw : split(text, '\n')) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string_view::npos)
            throw PatternError("pattern line " + std::to_string(line_no) + ": expected kind<TAB>regex");
        PiiKind kind = parse_kind(trim(line.substr(0, tab)));
        std::string pattern{trim(line.substr(tab + 1))};
        try {
            set.patterns_.emplace_back(kind, std::regex(pattern, std::regex::ECMAScript));
        } catch (const std::regex_error& e) {
            throw PatternError("pattern line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return set;
}

PatternSet PatternSet::load(const std::string& path) { return parse(read_file(path)); }

PatternSet PatternSet::defaults() { return parse(kDefaultPatterns); }

Gazetteer Gazetteer::from_entries(std::vector<std::string> entries) {
    Gazetteer g;
    std::map<std::string, bool> seen;
    for (std::string& e : entries) {
        std::string norm = utf8_fold(trim(e));
        if (norm.empty()) continue;
        if (seen.emplace(norm, true).second) g.entries_.push_back(norm);
    }
    for (const std::string& e : g.entries_) {
        std::size_t tokens = 1 + static_cast<std::size_t>(std::count(e.begin(), e.end(), ' '));
        g.max_tokens_ = std::max(g.max_tokens_, tokens);
    }
    return g;
}

Gazetteer Gazetteer::load(const std::string& path) {
    std::vector<std::string> entries;
    for (const std::string& raw : split(read_file(path), '\n')) {
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        entries.emplace_back(line);
    }
    return from_entries(std::move(entries));
}

namespace {

// Leftmost-longest selection over possibly overlapping candidates: scan in
// (begin asc, length desc, confidence desc) order and drop overlaps.
std::vector<PiiMatch> select_non_overlapping(std::vector<PiiMatch> candidates) {
    std::stable_sort(candidates.begin(), candidates.end(), [](const PiiMatch& a, const PiiMatch& b) {
        if (a.span.begin != b.span.begin) return a.span.begin < b.span.begin;
        if (a.span.end != b.span.end) return a.span.end > b.span.end;
        return a.confidence > b.confidence;
    });
    std::vector<PiiMatch> out;
    std::size_t cursor = 0;
    for (PiiMatch& m : candidates) {
        if (m.span.begin < cursor) continue;
        cursor = m.span.end;
        out.push_back(std::move(m));
    }
    return out;
}

} // namespace

std::vector<PiiMatch> regex_scrub(const std::string& text, const PatternSet& patterns) {
    auto offsets = utf8_offsets(text);
    auto byte_to_cp = [&](std::size_t byte) {
        return static_cast<std::size_t>(std::lower_bound(offsets.begin(), offsets.end(), byte) - offsets.begin());
    };
    std::vector<PiiMatch> candidates;
    for (const auto& [kind, re] : patterns.patterns()) {
        auto begin = std::sregex_iterator(text.begin(), text.end(), re);
        for (auto it = begin; it != std::sregex_iterator(); ++it) {
            std::size_t b = static_cast<std::size_t>(it->position());
            std::size_t e = b + static_cast<std::size_t>(it->length());
            if (e == b) continue;
            PiiMatch m;
            m.span = {byte_to_cp(b), byte_to_cp(e)};
            m.kind = kind;
            m.text = it->str();
            m.confidence = 1.0;
            m.action = Action::Redact;
            candidates.push_back(std::move(m));
        }
    }
    return select_non_overlapping(std::move(candidates));
}

std::size_t levenshtein(std::span<const char32_t> a, std::span<const char32_t> b) {
    const std::size_t m = a.size(), n = b.size();
    std::vector<std::size_t> prev(n + 1), cur(n + 1);
    for (std::size_t j = 0; j <= n; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= m; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= n; ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[n];
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
    auto ca = utf8_decode(a), cb = utf8_decode(b);
    return levenshtein(ca, cb);
}

std::vector<PiiMatch> fuzzy_place_match(const std::string& text, const Gazetteer& gaz, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) throw ConfigError("fuzzy threshold must be in (0, 1]");
    auto cps = utf8_decode(text);
    auto tokens = tokenize(cps);
    std::vector<PiiMatch> candidates;
    for (std::size_t n = 1; n <= gaz.max_entry_tokens(); ++n) {
        for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
            std::size_t b = tokens[i].begin, e = tokens[i + n - 1].end;
            std::string window = utf8_encode(std::span(cps).subspan(b, e - b));
            auto window_folded = utf8_decode(utf8_fold(window));
            for (const std::string& entry : gaz.entries()) {
                auto entry_cps = utf8_decode(entry);
                std::size_t maxlen = std::max(window_folded.size(), entry_cps.size());
                if (maxlen == 0) continue;
                double sim = 1.0 - static_cast<double>(levenshtein(window_folded, entry_cps)) /
                                       static_cast<double>(maxlen);
                if (sim >= threshold) {
                    PiiMatch m;
                    m.span = {b, e};
                    m.kind = PiiKind::Place;
                    m.text = window;
                    m.confidence = sim;
                    m.action = Action::Redact;
                    candidates.push_back(std::move(m));
                    break; // best-first is not needed; one match per window
                }
            }
        }
    }
    return select_non_overlapping(std::move(candidates));
}

std::vector<FlaggedCandidate> frequency_name_candidates(std::span<const ann::Sentence> corpus,
                                                        const lex::Lexicon& lexicon, int max_freq) {
    if (corpus.empty()) return {};
    // Phase 1: corpus-wide token frequencies (exact string).
    std::map<std::string, int> freq;
    std::vector<std::vector<Token>> tokens_per_sentence;
    tokens_per_sentence.reserve(corpus.size());
    for (const ann::Sentence& s : corpus) {
        auto cps = utf8_decode(s.text);
        auto tokens = tokenize(cps);
        for (const Token& t : tokens) ++freq[t.text];
        tokens_per_sentence.push_back(std::move(tokens));
    }

    const auto& lemmas = lexicon.lemma_set();
    auto is_lexicon_lemma = [&](const std::string& lowered) {
        return std::binary_search(lemmas.begin(), lemmas.end(), lowered);
    };

    // Phase 2: flag capitalized, non-sentence-initial, rare tokens.
    std::vector<FlaggedCandidate> out;
    for (std::size_t si = 0; si < corpus.size(); ++si) {
        const auto& tokens = tokens_per_sentence[si];
        for (std::size_t ti = 1; ti < tokens.size(); ++ti) { // skip sentence-initial token
            const Token& t = tokens[ti];
            auto first = utf8_decode(t.text);
            if (first.empty() || !cp_is_upper(first[0])) continue;
            int f = freq[t.text];
            if (f > max_freq) continue;
            if (is_lexicon_lemma(utf8_to_lower(t.text))) continue;
            FlaggedCandidate fc;
            fc.sentence = si;
            fc.match.span = {t.begin, t.end};
            fc.match.kind = PiiKind::NameCandidate;
            fc.match.text = t.text;
            fc.match.confidence = std::max(0.0, 1.0 - static_cast<double>(f) / static_cast<double>(max_freq));
            fc.match.action = Action::Flag;
            out.push_back(std::move(fc));
        }
    }
    return out;
}

std::string apply_redactions(const std::string& text, std::vector<PiiMatch> matches, AuditEntry* audit) {
    std::sort(matches.begin(), matches.end(),
              [](const PiiMatch& a, const PiiMatch& b) { return a.span.begin < b.span.begin; });
    for (std::size_t i = 1; i < matches.size(); ++i)
        if (matches[i].span.begin < matches[i - 1].span.end)
            throw OverlapError("overlapping matches at code points " + std::to_string(matches[i - 1].span.begin) +
                               " and " + std::to_string(matches[i].span.begin));
    auto cps = utf8_decode(text);
    for (const PiiMatch& m : matches)
        if (m.span.end > cps.size())
            throw SpanError("match span [" + std::to_string(m.span.begin) + ", " + std::to_string(m.span.end) +
                            ") exceeds text length " + std::to_string(cps.size()));

    std::string out;
    std::size_t cursor = 0;
    for (const PiiMatch& m : matches) {
        out += utf8_encode(std::span(cps).subspan(cursor, m.span.begin - cursor));
        if (m.action == Action::Redact) {
            out += placeholder(m.kind);
            if (audit) audit->kinds.push_back(m.kind);
        } else {
            out += utf8_encode(std::span(cps).subspan(m.span.begin, m.span.end - m.span.begin));
        }
        cursor = m.span.end;
    }
    out += utf8_encode(std::span(cps).subspan(cursor));
    return out;
}

} // namespace gbv::anon
