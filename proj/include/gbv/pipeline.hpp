#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gbv/annotation.hpp"
#include "gbv/cohort.hpp"
#include "gbv/featurize.hpp"
#include "gbv/lexicon.hpp"
#include "gbv/model.hpp"
#include "gbv/numeric.hpp"

namespace gbv::pipeline {

enum class Setup { semantic, mixed, demographic };

Setup parse_setup(std::string_view s);
std::string_view to_string(Setup s);

struct PipelineConfig {
    feat::FeaturizerConfig featurizer;
    std::size_t pca_components = 2000; // clamped to the rank bound at fit time
    model::TrainConfig train;
    int folds = 5;
    std::uint64_t seed = 42;
    // Reproduces the single whole-corpus featurizer/PCA fit instead of the
    // default leakage-free per-fold fit.
    bool paper_faithful = false;
    std::size_t importance_top_n = 35;
    std::vector<std::string> demographic_fields; // empty: all observed fields
};

// One dataset case with its aligned views. Annotation or health-record views
// may be absent; absent annotations featurize to the empty count map.
struct CaseView {
    std::string record_id;
    int label = -1; // +1 Violence, -1 NonViolence
    const ann::AnnotatedRecord* annotated = nullptr;
    const cohort::HealthRecord* record = nullptr;
};

struct CorpusView {
    const lex::Lexicon* lexicon = nullptr;
    std::vector<CaseView> cases;
};

CorpusView make_corpus_view(const lex::Lexicon& lexicon, std::span<const cohort::LabeledCase> cases,
                            std::span<const ann::AnnotatedRecord> annotations,
                            std::span<const cohort::HealthRecord> records);

// Combined digest of the artifacts fitted on one fold's training split.
struct FoldArtifacts {
    std::uint64_t registry_hash = 0;
    std::uint64_t tfidf_hash = 0;
    std::uint64_t pca_hash = 0;

    std::uint64_t combined() const;
};

struct CvResult {
    model::CvReport report;
    std::vector<FoldArtifacts> fold_artifacts;
    std::vector<std::pair<std::string, double>> importance; // ranked (key, signed score)
    std::size_t best_fold = 0;
    std::vector<std::string> warnings; // e.g. PCA rank-bound clamping
};

CvResult cross_validate(const CorpusView& corpus, Setup setup, const PipelineConfig& cfg);

// Ranks original-space feature scores by |score| descending (ties by key).
// For PCA-reduced models the score vector is the back-projection of w.
std::vector<std::pair<std::string, double>> feature_importance(const model::SvmModel& svm,
                                                               const numeric::PcaModel* pca,
                                                               const feat::FeatureRegistry& registry,
                                                               std::size_t top_n = 35);

// Fits the semantic/mixed featurization on one training split; exposed so
// the fold-hygiene checks can hash artifacts directly.
struct FittedFold {
    feat::FeatureRegistry registry;
    feat::TfidfModel tfidf;
    numeric::PcaModel pca;
};

FittedFold fit_semantic_fold(const CorpusView& corpus, std::span<const std::size_t> train_indices, Setup setup,
                             const PipelineConfig& cfg);

} // namespace gbv::pipeline
