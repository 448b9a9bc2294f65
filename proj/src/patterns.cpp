#include "gbv/patterns.hpp"

#include <algorithm>

#include "gbv/errors.hpp"

namespace gbv::patterns {

namespace {

std::vector<RankedCount> rank(const std::map<std::string, std::size_t>& counts, std::size_t n) {
    std::vector<RankedCount> out;
    out.reserve(counts.size());
    for (const auto& [name, count] : counts) out.push_back({name, count});
    std::stable_sort(out.begin(), out.end(), [](const RankedCount& a, const RankedCount& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.name < b.name;
    });
    if (out.size() > n) out.resize(n);
    return out;
}

} // namespace

std::map<lex::Domain, std::vector<RankedCount>> top_frames_by_domain(
    std::span<const ann::AnnotatedRecord* const> records, const lex::Lexicon& lexicon, std::size_t n) {
    std::map<lex::Domain, std::map<std::string, std::size_t>> counts;
    for (const ann::AnnotatedRecord* rec : records)
        for (const ann::AnnotationSet& set : rec->sets) {
            const lex::Frame* f = lexicon.find_frame(set.frame);
            if (!f) continue;
            if (f->domain == lex::Domain::Healthcare || f->domain == lex::Domain::Violence)
                counts[f->domain][f->name] += 1;
        }
    std::map<lex::Domain, std::vector<RankedCount>> out;
    for (lex::Domain d : {lex::Domain::Healthcare, lex::Domain::Violence}) out[d] = rank(counts[d], n);
    return out;
}

std::map<lex::Domain, std::vector<RankedCount>> top_lus_by_domain(
    std::span<const ann::AnnotatedRecord* const> records, const lex::Lexicon& lexicon, std::size_t n) {
    std::map<lex::Domain, std::map<std::string, std::size_t>> counts;
    for (const ann::AnnotatedRecord* rec : records)
        for (const ann::AnnotationSet& set : rec->sets) {
            if (!set.lu) continue; // unresolved sets contribute nothing
            const lex::LexicalUnit* lu = lexicon.find_lu(*set.lu);
            if (!lu) continue;
            const lex::Frame* f = lexicon.find_frame(lu->frame);
            if (!f) continue;
            if (f->domain == lex::Domain::Healthcare || f->domain == lex::Domain::Violence)
                counts[f->domain][lu->lemma_pos] += 1;
        }
    std::map<lex::Domain, std::vector<RankedCount>> out;
    for (lex::Domain d : {lex::Domain::Healthcare, lex::Domain::Violence}) out[d] = rank(counts[d], n);
    return out;
}

std::vector<RankedCount> top_lus_for_frame(std::span<const ann::AnnotatedRecord* const> records,
                                           const lex::Lexicon& lexicon, const std::string& frame, std::size_t n) {
    if (!lexicon.find_frame(frame)) throw UnknownFrame("unknown frame: " + frame);
    std::map<std::string, std::size_t> counts;
    for (const ann::AnnotatedRecord* rec : records)
        for (const ann::AnnotationSet& set : rec->sets)
            if (set.lu && set.frame == frame) counts[*set.lu] += 1;
    return rank(counts, n);
}

PatternReport build_report(std::span<const ann::AnnotatedRecord* const> records, const lex::Lexicon& lexicon,
                           std::size_t frames_n, std::size_t lus_n, std::size_t drill_n,
                           std::span<const std::string> drill_frames) {
    PatternReport r;
    r.top_frames = top_frames_by_domain(records, lexicon, frames_n);
    r.top_lus = top_lus_by_domain(records, lexicon, lus_n);
    if (drill_frames.empty()) {
        r.lu_drilldown["Health_conditions"] =
            lexicon.find_frame("Health_conditions")
                ? top_lus_for_frame(records, lexicon, "Health_conditions", drill_n)
                : std::vector<RankedCount>{};
    } else {
        for (const std::string& f : drill_frames) r.lu_drilldown[f] = top_lus_for_frame(records, lexicon, f, drill_n);
    }
    return r;
}

} // namespace gbv::patterns
