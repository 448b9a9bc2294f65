#include <doctest.h>

#include <cmath>
#include <set>

#include "gbv/annotation.hpp"
#include "gbv/errors.hpp"
#include "gbv/featurize.hpp"
#include "gbv/lexicon.hpp"

using namespace gbv;
using feat::CountMap;
using feat::FeatureKey;

namespace {

lex::Lexicon fixture_lexicon() { return lex::load_lexicon(std::string(GBV_DATA_DIR) + "/lexicon.json"); }

ann::AnnotatedRecord parse_one(const std::string& line, const lex::Lexicon& l) {
    auto records = ann::parse_annotations_text(line, l);
    return ann::resolve_lexical_units(records.at(0), l);
}

CountMap counts_of(std::initializer_list<std::pair<FeatureKey, double>> items) {
    CountMap m;
    for (const auto& [k, v] : items) m.emplace(k, v);
    return m;
}

} // namespace

TEST_CASE("feature key canonical strings and parsing") {
    CHECK(FeatureKey::frame("Fear").str() == "frame:Fear");
    CHECK(FeatureKey::fe("Diagnosing", "Patient").str() == "fe:Diagnosing.Patient");
    CHECK(FeatureKey::lu("gestante.n").str() == "lu:gestante.n");
    CHECK(FeatureKey::qualia("telic", "a.n", "b.v").str() == "qualia:telic(a.n,b.v)");
    CHECK(FeatureKey::cat("race", "parda").str() == "cat:race=parda");
    for (const char* s : {"frame:Fear", "fe:Diagnosing.Patient", "lu:gestante.n",
                          "co:A.X|B.Y", "qualia:telic(a.n,b.v)", "cat:race=parda"})
        CHECK(FeatureKey::parse(s).str() == s);
    CHECK_THROWS_AS(FeatureKey::parse("nokind"), ParseError);
    CHECK_THROWS_AS(FeatureKey::parse("bad:x"), ParseError);
}

TEST_CASE("count_features tallies frames, FEs, LUs and co-occurrences") {
    lex::Lexicon l = fixture_lexicon();
    // Two Health_conditions sets in one sentence; one resolves gestante.n and
    // carries FE Patient.
    const char* line =
        R"({"record_id":"r","sentences":[{"field":"subjective","index":0,"text":"gestante com algo"}],)"
        R"("annotation_sets":[)"
        R"({"sentence":["subjective",0],"target":[0,8],"frame":"Health_conditions","lemma":"gestante.n",)"
        R"("fe_spans":[["Patient",0,8]]},)"
        R"({"sentence":["subjective",0],"target":[13,17],"frame":"Health_conditions","lemma":"algo.n"}]})";
    feat::FeaturizerConfig cfg;
    CountMap counts = feat::count_features(parse_one(line, l), l, cfg);
    CHECK(counts.at(FeatureKey::frame("Health_conditions")) == 2.0);
    CHECK(counts.at(FeatureKey::fe("Health_conditions", "Patient")) == 1.0);
    CHECK(counts.at(FeatureKey::lu("gestante.n")) == 1.0);
    CHECK(counts.size() == 3); // same-frame sets produce no co keys
}

TEST_CASE("empty record produces an empty count map") {
    lex::Lexicon l = fixture_lexicon();
    ann::AnnotatedRecord rec;
    rec.record_id = "empty";
    feat::FeaturizerConfig cfg;
    CHECK(feat::count_features(rec, l, cfg).empty());
}

TEST_CASE("a qualifying co-occurrence pair appears with count 1") {
    lex::Lexicon l = fixture_lexicon();
    auto records = ann::parse_annotations(std::string(GBV_DATA_DIR) + "/annotations_fixture.jsonl", l);
    feat::FeaturizerConfig cfg;
    CountMap counts = feat::count_features(records[3], l, cfg); // F4
    FeatureKey co = FeatureKey::parse("co:Health_conditions.Condition|Medical_examination.Finding");
    CHECK(counts.at(co) == 1.0);
}

TEST_CASE("qualia features use weight * min(endpoint counts)") {
    lex::Lexicon l = fixture_lexicon();
    feat::FeaturizerConfig cfg; // weight 0.1
    // Fixture relation: (examination.n, telic, diagnose.v).
    CountMap counts = counts_of({{FeatureKey::lu("examination.n"), 2.0}, {FeatureKey::lu("diagnose.v"), 1.0}});
    feat::add_qualia_features(counts, l, cfg);
    FeatureKey qk = FeatureKey::qualia("telic", "examination.n", "diagnose.v");
    REQUIRE(counts.count(qk) == 1);
    CHECK(counts.at(qk) == doctest::Approx(0.1).epsilon(1e-12));
    // Existing keys untouched.
    CHECK(counts.at(FeatureKey::lu("examination.n")) == 2.0);
}

TEST_CASE("qualia requires both endpoints present") {
    lex::Lexicon l = fixture_lexicon();
    feat::FeaturizerConfig cfg;
    CountMap counts = counts_of({{FeatureKey::lu("examination.n"), 3.0}});
    feat::add_qualia_features(counts, l, cfg);
    CHECK(counts.size() == 1);
}

TEST_CASE("qualia weight outside (0,1] is a ConfigError") {
    feat::FeaturizerConfig cfg;
    cfg.qualia_weight = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.qualia_weight = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.qualia_weight = 1.0;
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("map_parameterized adds frame and LU pseudo-counts") {
    feat::FeaturizerConfig cfg;
    cfg.include_parameterized = true;
    cfg.mapping.add("pregnancy_status", "gestante", {"Health_conditions", "gestante.n"});
    cohort::HealthRecord rec;
    rec.parameterized = {{"pregnancy_status", "gestante"}, {"race", "parda"}};
    feat::CoverageReport coverage;
    CountMap counts = feat::map_parameterized(rec, cfg, &coverage);
    CHECK(counts.at(FeatureKey::frame("Health_conditions")) == 1.0);
    CHECK(counts.at(FeatureKey::lu("gestante.n")) == 1.0);
    CHECK(counts.size() == 2);
    CHECK(coverage.mapped == 1);
    CHECK(coverage.unmapped == 1);
    CHECK(coverage.unmapped_by_field.at("race") == 1);
}

TEST_CASE("mapped pseudo-counts merge additively with text-derived counts") {
    CountMap text = counts_of({{FeatureKey::frame("Health_conditions"), 2.0}});
    CountMap mapped = counts_of({{FeatureKey::frame("Health_conditions"), 1.0}, {FeatureKey::lu("gestante.n"), 1.0}});
    feat::merge_counts(text, mapped);
    CHECK(text.at(FeatureKey::frame("Health_conditions")) == 3.0);
    CHECK(text.at(FeatureKey::lu("gestante.n")) == 1.0);
}

TEST_CASE("map_parameterized requires include_parameterized") {
    feat::FeaturizerConfig cfg;
    cohort::HealthRecord rec;
    CHECK_THROWS_AS(feat::map_parameterized(rec, cfg), ConfigError);
}

namespace {

// A corpus hitting the pruning thresholds exactly: frame F49 totals 49,
// frame G50 totals 50, LU l24 totals 24, LU l25 totals 25.
std::vector<CountMap> threshold_corpus() {
    std::vector<CountMap> corpus;
    CountMap a;
    a[FeatureKey::frame("F49")] = 49.0;
    a[FeatureKey::fe("F49", "X")] = 10.0;
    a[FeatureKey::frame("G50")] = 50.0;
    a[FeatureKey::fe("G50", "Y")] = 5.0;
    a[FeatureKey::co(ann::CoOccurrence::make("F49", "X", "G50", "Y"))] = 3.0;
    a[FeatureKey::lu("l24.n")] = 24.0;
    a[FeatureKey::lu("l25.n")] = 25.0;
    a[FeatureKey::qualia("telic", "l24.n", "l25.n")] = 0.1;
    a[FeatureKey::qualia("telic", "l25.n", "l25b.n")] = 0.2;
    a[FeatureKey::lu("l25b.n")] = 30.0;
    corpus.push_back(std::move(a));
    return corpus;
}

} // namespace

TEST_CASE("pruning drops a 49-count frame and a 24-count LU with their dependents") {
    feat::FeaturizerConfig cfg; // thresholds 50 / 25
    auto corpus = threshold_corpus();
    feat::FeatureRegistry registry = feat::fit_registry(corpus, cfg);
    std::set<std::string> keys;
    for (std::size_t i = 0; i < registry.dimension(); ++i) keys.insert(registry.key(i).str());
    CHECK(keys == std::set<std::string>{"frame:G50", "fe:G50.Y", "lu:l25.n", "lu:l25b.n",
                                        "qualia:telic(l25.n,l25b.n)"});
}

TEST_CASE("zero thresholds keep every observed key") {
    feat::FeaturizerConfig cfg;
    cfg.frame_min_count = 0;
    cfg.lu_min_count = 0;
    auto corpus = threshold_corpus();
    feat::FeatureRegistry registry = feat::fit_registry(corpus, cfg);
    CHECK(registry.dimension() == corpus[0].size());
}

TEST_CASE("registry of a constructed 120-key corpus has dimension 120") {
    feat::FeaturizerConfig cfg;
    cfg.frame_min_count = 0;
    cfg.lu_min_count = 0;
    std::vector<CountMap> corpus(10);
    for (int f = 0; f < 20; ++f)
        corpus[f % 10][FeatureKey::frame("Frame" + std::to_string(f))] = 1.0 + f;
    for (int u = 0; u < 100; ++u)
        corpus[u % 10][FeatureKey::lu("lu" + std::to_string(u) + ".n")] = 1.0 + u;
    // Independent recount of the distinct-key universe.
    std::set<std::string> distinct;
    for (const auto& m : corpus)
        for (const auto& [k, v] : m) distinct.insert(k.str());
    REQUIRE(distinct.size() == 120);
    feat::FeatureRegistry registry = feat::fit_registry(corpus, cfg);
    CHECK(registry.dimension() == 120);
}

TEST_CASE("registry fitting is permutation invariant and monotone in thresholds") {
    feat::FeaturizerConfig cfg;
    cfg.frame_min_count = 3;
    cfg.lu_min_count = 2;
    std::vector<CountMap> corpus;
    for (int i = 0; i < 6; ++i) {
        CountMap m;
        m[FeatureKey::frame("A")] = 1.0;
        if (i < 2) m[FeatureKey::frame("B")] = 1.0;
        if (i < 4) m[FeatureKey::lu("x.n")] = 1.0;
        corpus.push_back(std::move(m));
    }
    feat::FeatureRegistry forward = feat::fit_registry(corpus, cfg);
    std::vector<CountMap> reversed(corpus.rbegin(), corpus.rend());
    feat::FeatureRegistry backward = feat::fit_registry(reversed, cfg);
    CHECK(forward.serialize() == backward.serialize());

    feat::FeaturizerConfig stricter = cfg;
    stricter.frame_min_count = 7;
    stricter.lu_min_count = 5;
    CHECK_THROWS_AS(feat::fit_registry(corpus, stricter), EmptyRegistryError);

    for (int raise = 3; raise <= 6; ++raise) {
        feat::FeaturizerConfig c2 = cfg;
        c2.frame_min_count = raise;
        feat::FeatureRegistry r2 = feat::fit_registry(corpus, c2);
        CHECK(r2.dimension() <= forward.dimension());
    }
}

TEST_CASE("empty corpus cannot fit a registry") {
    feat::FeaturizerConfig cfg;
    std::vector<CountMap> corpus;
    CHECK_THROWS_AS(feat::fit_registry(corpus, cfg), EmptyRegistryError);
}

TEST_CASE("tfidf matches the two-document worked example") {
    feat::FeaturizerConfig cfg;
    cfg.frame_min_count = 0;
    cfg.lu_min_count = 0;
    std::vector<CountMap> corpus;
    corpus.push_back(counts_of({{FeatureKey::lu("A.n"), 2.0}, {FeatureKey::lu("B.n"), 1.0}}));
    corpus.push_back(counts_of({{FeatureKey::lu("A.n"), 1.0}}));
    feat::FeatureRegistry registry = feat::fit_registry(corpus, cfg);
    std::vector<feat::SparseVector> vectors{registry.vectorize(corpus[0]), registry.vectorize(corpus[1])};
    feat::TfidfModel model = feat::tfidf_fit(vectors, registry);

    std::size_t ia = *registry.index(FeatureKey::lu("A.n"));
    std::size_t ib = *registry.index(FeatureKey::lu("B.n"));
    CHECK(model.idf[ia] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(model.idf[ib] == doctest::Approx(1.4054651081081644).epsilon(1e-12));

    feat::SparseVector doc1 = feat::tfidf_transform(model, vectors[0]);
    double a = 0, b = 0;
    for (const auto& [i, v] : doc1.items) {
        if (i == ia) a = v;
        if (i == ib) b = v;
    }
    // Values verified by an independent script against the stated formula.
    CHECK(a == doctest::Approx(0.587291291059816).epsilon(1e-9));
    CHECK(b == doctest::Approx(0.412708708940184).epsilon(1e-9));
    CHECK(doc1.l1_norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tfidf edge cases: single doc and zero vector") {
    feat::FeaturizerConfig cfg;
    cfg.frame_min_count = 0;
    cfg.lu_min_count = 0;
    std::vector<CountMap> corpus{counts_of({{FeatureKey::lu("only.n"), 7.0}})};
    feat::FeatureRegistry registry = feat::fit_registry(corpus, cfg);
    std::vector<feat::SparseVector> vectors{registry.vectorize(corpus[0])};
    feat::TfidfModel model = feat::tfidf_fit(vectors, registry);
    feat::SparseVector out = feat::tfidf_transform(model, vectors[0]);
    REQUIRE(out.items.size() == 1);
    CHECK(out.items[0].second == doctest::Approx(1.0));

    feat::SparseVector zero;
    zero.dim = registry.dimension();
    feat::SparseVector zout = feat::tfidf_transform(model, zero);
    CHECK(zout.items.empty());
}

TEST_CASE("every nonzero transformed vector has unit L1 norm") {
    feat::FeaturizerConfig cfg;
    cfg.frame_min_count = 0;
    cfg.lu_min_count = 0;
    std::vector<CountMap> corpus;
    for (int i = 0; i < 50; ++i) {
        CountMap m;
        for (int j = 0; j <= i % 5; ++j) m[FeatureKey::lu("w" + std::to_string((i + j) % 11) + ".n")] = 1.0 + j;
        corpus.push_back(std::move(m));
    }
    feat::FeatureRegistry registry = feat::fit_registry(corpus, cfg);
    std::vector<feat::SparseVector> vectors;
    for (const auto& m : corpus) vectors.push_back(registry.vectorize(m));
    feat::TfidfModel model = feat::tfidf_fit(vectors, registry);
    for (const auto& v : vectors) {
        feat::SparseVector t = feat::tfidf_transform(model, v);
        if (!t.items.empty()) CHECK(t.l1_norm() == doctest::Approx(1.0).epsilon(1e-9));
    }
}

namespace {

cohort::HealthRecord rec_with(std::map<std::string, std::string> params) {
    cohort::HealthRecord r;
    r.parameterized = std::move(params);
    return r;
}

} // namespace

TEST_CASE("one-hot columns equal the sum of observed cardinalities") {
    std::vector<cohort::HealthRecord> recs{
        rec_with({{"a", "x"}, {"b", "1"}}),
        rec_with({{"a", "y"}, {"b", "2"}}),
        rec_with({{"a", "z"}, {"b", "1"}}),
    };
    std::vector<const cohort::HealthRecord*> ptrs{&recs[0], &recs[1], &recs[2]};
    std::vector<std::string> fields{"a", "b"};
    feat::OneHotResult onehot = feat::one_hot_encode(ptrs, fields);
    CHECK(onehot.registry.dimension() == 5);
    // columns ordered by field then value
    CHECK(onehot.registry.key(0).str() == "cat:a=x");
    CHECK(onehot.registry.key(3).str() == "cat:b=1");
    // each record has exactly one 1 per present field
    for (const auto& row : onehot.matrix) {
        double sum = 0;
        for (double v : row) sum += v;
        CHECK(sum == 2.0);
    }
}

TEST_CASE("missing field leaves its one-hot columns all zero") {
    std::vector<cohort::HealthRecord> recs{rec_with({{"a", "x"}, {"b", "1"}}), rec_with({{"b", "2"}})};
    std::vector<const cohort::HealthRecord*> ptrs{&recs[0], &recs[1]};
    std::vector<std::string> fields{"a", "b"};
    feat::OneHotResult onehot = feat::one_hot_encode(ptrs, fields);
    double row1_sum = 0;
    for (double v : onehot.matrix[1]) row1_sum += v;
    CHECK(row1_sum == 1.0); // only field b set
    CHECK(onehot.matrix[1][*onehot.registry.index(FeatureKey::cat("b", "2"))] == 1.0);
}

TEST_CASE("one-hot with empty field list is rejected") {
    std::vector<const cohort::HealthRecord*> ptrs;
    CHECK_THROWS_AS(feat::one_hot_fit(ptrs, {}), ConfigError);
}

TEST_CASE("featurization is a pure function of its inputs") {
    lex::Lexicon l = fixture_lexicon();
    auto records = ann::parse_annotations(std::string(GBV_DATA_DIR) + "/annotations_fixture.jsonl", l);
    feat::FeaturizerConfig cfg;
    for (auto& r : records) r = ann::resolve_lexical_units(std::move(r), l);
    CountMap first = feat::count_features(records[0], l, cfg);
    CountMap second = feat::count_features(records[0], l, cfg);
    CHECK(first == second);
}
