#include <doctest.h>

#include <set>

#include "gbv/errors.hpp"
#include "gbv/lexicon.hpp"

using namespace gbv;
using lex::Domain;

namespace {

const char* kMinimal = R"({
  "format_version": "1",
  "frames": [{"name": "Diagnosing", "domain": "Healthcare"}],
  "frame_elements": [{"frame": "Diagnosing", "name": "Patient"}],
  "lexical_units": [{"lemma_pos": "diagnose.v", "frame": "Diagnosing"}],
  "qualia_relations": []
})";

lex::Lexicon fixture() { return lex::load_lexicon(std::string(GBV_DATA_DIR) + "/lexicon.json"); }

} // namespace

TEST_CASE("minimal lexicon loads with counts (1,1,1,0)") {
    lex::Lexicon l = lex::parse_lexicon(kMinimal);
    CHECK(l.frame_count() == 1);
    CHECK(l.frame_element_count() == 1);
    CHECK(l.lexical_unit_count() == 1);
    CHECK(l.qualia_count() == 0);
}

TEST_CASE("dangling LU frame reference raises IntegrityError naming the LU") {
    const char* text = R"({
      "frames": [{"name": "Diagnosing", "domain": "Healthcare"}],
      "frame_elements": [{"frame": "Diagnosing", "name": "Patient"}],
      "lexical_units": [{"lemma_pos": "ghost.v", "frame": "Missing_frame"}],
      "qualia_relations": []
    })";
    try {
        lex::parse_lexicon(text);
        FAIL("expected IntegrityError");
    } catch (const IntegrityError& e) {
        CHECK(std::string(e.what()).find("ghost.v") != std::string::npos);
    }
}

TEST_CASE("malformed file raises ParseError") {
    CHECK_THROWS_AS(lex::parse_lexicon("{ not json"), ParseError);
    CHECK_THROWS_AS(lex::parse_lexicon("[]"), ParseError);
    CHECK_THROWS_AS(lex::parse_lexicon("{\"frames\": []}"), ParseError);
}

TEST_CASE("fixture lexicon has the documented counts") {
    lex::Lexicon l = fixture();
    CHECK(l.frames_in_domain(Domain::Healthcare).size() == 10);
    CHECK(l.frames_in_domain(Domain::Violence).size() == 8);
    CHECK(l.lexical_unit_count() == 40);
    CHECK(l.qualia_count() == 6);
}

TEST_CASE("frames_in_domain is sorted, exhaustive and partitions the frame set") {
    lex::Lexicon l = fixture();
    std::set<std::string> all;
    std::size_t total = 0;
    for (Domain d : {Domain::Healthcare, Domain::Violence, Domain::General}) {
        auto frames = l.frames_in_domain(d);
        total += frames.size();
        for (std::size_t i = 0; i < frames.size(); ++i) {
            CHECK(frames[i]->domain == d);
            if (i) CHECK(frames[i - 1]->name < frames[i]->name);
            CHECK(all.insert(frames[i]->name).second); // disjoint
        }
    }
    CHECK(total == l.frame_count());
}

TEST_CASE("frames_in_domain on empty and single-General lexicons") {
    lex::Lexicon minimal = lex::parse_lexicon(kMinimal);
    CHECK(minimal.frames_in_domain(Domain::Violence).empty());
    const char* general = R"({
      "frames": [{"name": "Fear", "domain": "General"}],
      "frame_elements": [{"frame": "Fear", "name": "Experiencer"}],
      "lexical_units": [], "qualia_relations": []
    })";
    CHECK(lex::parse_lexicon(general).frames_in_domain(Domain::Healthcare).empty());
}

TEST_CASE("lu_for_lemma is exact and case sensitive") {
    lex::Lexicon l = fixture();
    const lex::LexicalUnit* lu = l.find_lu("gestante.n");
    REQUIRE(lu != nullptr);
    CHECK(lu->frame == "Health_conditions");
    CHECK(l.find_lu("unknown.v") == nullptr);
    CHECK(l.find_lu("Gestante.n") == nullptr);
}

TEST_CASE("qualia_neighbors returns both directions in deterministic order") {
    lex::Lexicon l = fixture();
    auto from_a = l.qualia_neighbors("examination.n");
    bool found = false;
    for (const auto& [rel, lu] : from_a)
        if (rel == "telic" && lu->lemma_pos == "diagnose.v") found = true;
    CHECK(found);

    auto from_b = l.qualia_neighbors("diagnose.v");
    found = false;
    for (const auto& [rel, lu] : from_b)
        if (rel == "telic" && lu->lemma_pos == "examination.n") found = true;
    CHECK(found);

    CHECK(l.qualia_neighbors("faca.n").empty());
    CHECK_THROWS_AS(l.qualia_neighbors("nope.v"), UnknownLexicalUnit);
    for (std::size_t i = 1; i < from_a.size(); ++i) {
        auto prev = std::make_pair(from_a[i - 1].first, from_a[i - 1].second->lemma_pos);
        auto cur = std::make_pair(from_a[i].first, from_a[i].second->lemma_pos);
        CHECK(prev < cur);
    }
}

TEST_CASE("save/load round trip preserves the lexicon") {
    lex::Lexicon l = fixture();
    lex::Lexicon back = lex::parse_lexicon(lex::serialize_lexicon(l));
    CHECK(back.frame_count() == l.frame_count());
    CHECK(back.frame_element_count() == l.frame_element_count());
    CHECK(back.lexical_unit_count() == l.lexical_unit_count());
    CHECK(back.qualia_count() == l.qualia_count());
    for (const lex::Frame& f : l.frames()) {
        const lex::Frame* bf = back.find_frame(f.name);
        REQUIRE(bf != nullptr);
        CHECK(bf->domain == f.domain);
        CHECK(bf->elements == f.elements);
    }
    for (const lex::LexicalUnit& lu : l.lexical_units()) {
        const lex::LexicalUnit* blu = back.find_lu(lu.lemma_pos);
        REQUIRE(blu != nullptr);
        CHECK(blu->frame == lu.frame);
    }
    // serialization is deterministic
    CHECK(lex::serialize_lexicon(l) == lex::serialize_lexicon(back));
}

TEST_CASE("one frame per LU is enforced") {
    const char* text = R"({
      "frames": [{"name": "A", "domain": "General"}, {"name": "B", "domain": "General"}],
      "frame_elements": [{"frame": "A", "name": "X"}, {"frame": "B", "name": "Y"}],
      "lexical_units": [{"lemma_pos": "dup.v", "frame": "A"}, {"lemma_pos": "dup.v", "frame": "B"}],
      "qualia_relations": []
    })";
    CHECK_THROWS_AS(lex::parse_lexicon(text), IntegrityError);
}

TEST_CASE("qualia referential integrity and self-links are rejected") {
    const char* dangling = R"({
      "frames": [{"name": "A", "domain": "General"}],
      "frame_elements": [{"frame": "A", "name": "X"}],
      "lexical_units": [{"lemma_pos": "a.v", "frame": "A"}],
      "qualia_relations": [{"lu_a": "a.v", "relation": "telic", "lu_b": "missing.v"}]
    })";
    CHECK_THROWS_AS(lex::parse_lexicon(dangling), IntegrityError);
    const char* self_link = R"({
      "frames": [{"name": "A", "domain": "General"}],
      "frame_elements": [{"frame": "A", "name": "X"}],
      "lexical_units": [{"lemma_pos": "a.v", "frame": "A"}],
      "qualia_relations": [{"lu_a": "a.v", "relation": "telic", "lu_b": "a.v"}]
    })";
    CHECK_THROWS_AS(lex::parse_lexicon(self_link), IntegrityError);
}

TEST_CASE("frames must carry at least one frame element") {
    const char* text = R"({
      "frames": [{"name": "Bare", "domain": "General"}],
      "frame_elements": [],
      "lexical_units": [], "qualia_relations": []
    })";
    CHECK_THROWS_AS(lex::parse_lexicon(text), IntegrityError);
}
