#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "gbv/annotation.hpp"
#include "gbv/lexicon.hpp"

namespace gbv::patterns {

struct RankedCount {
    std::string name;
    std::size_t count = 0;

    bool operator==(const RankedCount&) const = default;
};

// Frame evocation counts over Violence-labeled records, per modeled domain
// (Healthcare and Violence), top n, ties broken alphabetically.
std::map<lex::Domain, std::vector<RankedCount>> top_frames_by_domain(
    std::span<const ann::AnnotatedRecord* const> records, const lex::Lexicon& lexicon, std::size_t n = 15);

// Resolved-LU counts per modeled domain (domain of the LU's frame).
std::map<lex::Domain, std::vector<RankedCount>> top_lus_by_domain(
    std::span<const ann::AnnotatedRecord* const> records, const lex::Lexicon& lexicon, std::size_t n = 20);

// Resolved-LU counts restricted to annotation sets evoking one frame.
std::vector<RankedCount> top_lus_for_frame(std::span<const ann::AnnotatedRecord* const> records,
                                           const lex::Lexicon& lexicon, const std::string& frame,
                                           std::size_t n = 30);

struct PatternReport {
    std::map<lex::Domain, std::vector<RankedCount>> top_frames;
    std::map<lex::Domain, std::vector<RankedCount>> top_lus;
    std::map<std::string, std::vector<RankedCount>> lu_drilldown; // frame -> ranked LUs
};

PatternReport build_report(std::span<const ann::AnnotatedRecord* const> records, const lex::Lexicon& lexicon,
                           std::size_t frames_n = 15, std::size_t lus_n = 20, std::size_t drill_n = 30,
                           std::span<const std::string> drill_frames = {});

} // namespace gbv::patterns
