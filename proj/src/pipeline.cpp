#include "gbv/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gbv/errors.hpp"
#include "gbv/util.hpp"

namespace gbv::pipeline {

Setup parse_setup(std::string_view s) {
    if (s == "semantic") return Setup::semantic;
    if (s == "mixed") return Setup::mixed;
    if (s == "demographic") return Setup::demographic;
    throw ConfigError("unknown setup: " + std::string(s));
}

std::string_view to_string(Setup s) {
    switch (s) {
        case Setup::semantic: return "semantic";
        case Setup::mixed: return "mixed";
        case Setup::demographic: return "demographic";
    }
    return "semantic";
}

CorpusView make_corpus_view(const lex::Lexicon& lexicon, std::span<const cohort::LabeledCase> cases,
                            std::span<const ann::AnnotatedRecord> annotations,
                            std::span<const cohort::HealthRecord> records) {
    std::map<std::string_view, const ann::AnnotatedRecord*> ann_by_id;
    for (const ann::AnnotatedRecord& r : annotations) ann_by_id.emplace(r.record_id, &r);
    std::map<std::string_view, const cohort::HealthRecord*> rec_by_id;
    for (const cohort::HealthRecord& r : records) rec_by_id.emplace(r.record_id, &r);

    CorpusView view;
    view.lexicon = &lexicon;
    for (const cohort::LabeledCase& c : cases) {
        if (c.label != cohort::Label::Violence && c.label != cohort::Label::NonViolence)
            throw ConfigError("corpus view requires Violence/NonViolence cases only (record " + c.record_id + ")");
        CaseView cv;
        cv.record_id = c.record_id;
        cv.label = c.label == cohort::Label::Violence ? 1 : -1;
        if (auto it = ann_by_id.find(c.record_id); it != ann_by_id.end()) cv.annotated = it->second;
        if (auto it = rec_by_id.find(c.record_id); it != rec_by_id.end()) cv.record = it->second;
        view.cases.push_back(std::move(cv));
    }
    return view;
}

std::uint64_t FoldArtifacts::combined() const {
    Fnv64 h;
    h.add_u64(registry_hash);
    h.add_u64(tfidf_hash);
    h.add_u64(pca_hash);
    return h.value();
}

namespace {

feat::CountMap case_counts(const CaseView& cv, const lex::Lexicon& lexicon, Setup setup,
                           const feat::FeaturizerConfig& cfg) {
    feat::CountMap counts;
    if (cv.annotated) {
        counts = feat::count_features(*cv.annotated, lexicon, cfg);
        feat::add_qualia_features(counts, lexicon, cfg);
    }
    if (setup == Setup::mixed && cfg.include_parameterized && cv.record) {
        feat::CountMap mapped = feat::map_parameterized(*cv.record, cfg);
        feat::merge_counts(counts, mapped);
    }
    return counts;
}

numeric::DenseMatrix densify(std::span<const feat::SparseVector> vectors) {
    const std::size_t d = vectors.empty() ? 0 : vectors.front().dim;
    numeric::DenseMatrix X(vectors.size(), d);
    for (std::size_t r = 0; r < vectors.size(); ++r)
        for (const auto& [c, v] : vectors[r].items) X.at(r, c) = v;
    return X;
}

std::vector<std::string> demographic_field_list(const CorpusView& corpus,
                                                std::span<const std::size_t> indices,
                                                const PipelineConfig& cfg) {
    if (!cfg.demographic_fields.empty()) return cfg.demographic_fields;
    std::set<std::string> fields;
    for (std::size_t i : indices)
        if (const cohort::HealthRecord* rec = corpus.cases[i].record)
            for (const auto& [k, v] : rec->parameterized) fields.insert(k);
    return {fields.begin(), fields.end()};
}

} // namespace

FittedFold fit_semantic_fold(const CorpusView& corpus, std::span<const std::size_t> train_indices, Setup setup,
                             const PipelineConfig& cfg) {
    std::vector<feat::CountMap> counts;
    counts.reserve(train_indices.size());
    for (std::size_t i : train_indices)
        counts.push_back(case_counts(corpus.cases[i], *corpus.lexicon, setup, cfg.featurizer));

    FittedFold fold{feat::fit_registry(counts, cfg.featurizer), {}, {}};

    std::vector<feat::SparseVector> vectors;
    vectors.reserve(counts.size());
    for (const feat::CountMap& c : counts) vectors.push_back(fold.registry.vectorize(c));
    fold.tfidf = feat::tfidf_fit(vectors, fold.registry);
    if (cfg.featurizer.use_tfidf)
        for (feat::SparseVector& v : vectors) v = feat::tfidf_transform(fold.tfidf, v);

    fold.pca = numeric::pca_fit(densify(vectors), cfg.pca_components);
    return fold;
}

CvResult cross_validate(const CorpusView& corpus, Setup setup, const PipelineConfig& cfg_in) {
    PipelineConfig cfg = cfg_in;
    cfg.featurizer.include_parameterized = setup == Setup::mixed;
    const std::size_t n = corpus.cases.size();
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = corpus.cases[i].label;

    std::vector<model::Fold> folds = model::stratified_kfold(labels, cfg.folds, cfg.seed);

    CvResult result;
    result.report.setup = std::string(to_string(setup));

    // Whole-corpus fit, shared by every fold in --paper-faithful mode.
    std::optional<FittedFold> shared_fit;
    std::optional<feat::FeatureRegistry> shared_onehot;
    std::vector<std::size_t> all_indices(n);
    for (std::size_t i = 0; i < n; ++i) all_indices[i] = i;

    struct BestFold {
        double f1 = -1.0;
        model::SvmModel svm;
        std::optional<numeric::PcaModel> pca;
        std::optional<feat::FeatureRegistry> registry;
    } best;

    for (std::size_t f = 0; f < folds.size(); ++f) {
        const model::Fold& fold = folds[f];
        std::vector<int> y_train, y_test;
        for (std::size_t i : fold.train) y_train.push_back(labels[i]);
        for (std::size_t i : fold.test) y_test.push_back(labels[i]);

        numeric::DenseMatrix X_train, X_test;
        FoldArtifacts artifacts;
        std::optional<numeric::PcaModel> fold_pca;
        std::optional<feat::FeatureRegistry> fold_registry;

        if (setup == Setup::demographic) {
            feat::FeatureRegistry* registry = nullptr;
            std::vector<std::string> fields;
            if (cfg.paper_faithful) {
                if (!shared_onehot) {
                    fields = demographic_field_list(corpus, all_indices, cfg);
                    std::vector<const cohort::HealthRecord*> all_recs;
                    for (std::size_t i : all_indices)
                        if (corpus.cases[i].record) all_recs.push_back(corpus.cases[i].record);
                    shared_onehot.emplace(feat::one_hot_fit(all_recs, fields));
                }
                registry = &*shared_onehot;
            } else {
                fields = demographic_field_list(corpus, fold.train, cfg);
                std::vector<const cohort::HealthRecord*> train_only;
                for (std::size_t i : fold.train)
                    if (corpus.cases[i].record) train_only.push_back(corpus.cases[i].record);
                fold_registry.emplace(feat::one_hot_fit(train_only, fields));
                registry = &*fold_registry;
            }
            artifacts.registry_hash = registry->hash();
            if (!fold_registry) fold_registry.emplace(*registry);

            X_train = numeric::DenseMatrix(fold.train.size(), registry->dimension());
            for (std::size_t r = 0; r < fold.train.size(); ++r) {
                const CaseView& cv = corpus.cases[fold.train[r]];
                if (!cv.record) continue;
                auto row = feat::one_hot_row(*cv.record, *registry);
                std::copy(row.begin(), row.end(), X_train.values.begin() + static_cast<std::ptrdiff_t>(r * registry->dimension()));
            }
            X_test = numeric::DenseMatrix(fold.test.size(), registry->dimension());
            for (std::size_t r = 0; r < fold.test.size(); ++r) {
                const CaseView& cv = corpus.cases[fold.test[r]];
                if (!cv.record) continue;
                auto row = feat::one_hot_row(*cv.record, *registry);
                std::copy(row.begin(), row.end(), X_test.values.begin() + static_cast<std::ptrdiff_t>(r * registry->dimension()));
            }
        } else {
            const FittedFold* fit = nullptr;
            std::optional<FittedFold> local;
            if (cfg.paper_faithful) {
                if (!shared_fit) shared_fit.emplace(fit_semantic_fold(corpus, all_indices, setup, cfg));
                fit = &*shared_fit;
            } else {
                local.emplace(fit_semantic_fold(corpus, fold.train, setup, cfg));
                fit = &*local;
            }
            artifacts.registry_hash = fit->registry.hash();
            artifacts.tfidf_hash = fit->tfidf.hash();
            artifacts.pca_hash = fit->pca.hash();
            if (fit->pca.k_clamped && result.warnings.empty())
                result.warnings.push_back("pca: k_requested " + std::to_string(cfg.pca_components) +
                                          " exceeds the rank bound; clamped to " + std::to_string(fit->pca.k));

            auto transform = [&](std::span<const std::size_t> indices) {
                std::vector<feat::SparseVector> vectors;
                vectors.reserve(indices.size());
                for (std::size_t i : indices) {
                    feat::CountMap counts = case_counts(corpus.cases[i], *corpus.lexicon, setup, cfg.featurizer);
                    feat::SparseVector v = fit->registry.vectorize(counts);
                    if (cfg.featurizer.use_tfidf) v = feat::tfidf_transform(fit->tfidf, v);
                    vectors.push_back(std::move(v));
                }
                return numeric::pca_transform(fit->pca, densify(vectors));
            };
            X_train = transform(fold.train);
            X_test = transform(fold.test);
            fold_pca = fit->pca;
            fold_registry.emplace(fit->registry);
        }

        model::TrainConfig train_cfg = cfg.train;
        train_cfg.seed = cfg.train.seed + f;
        model::SvmModel svm = model::svm_train(X_train, y_train, train_cfg);

        std::vector<int> y_pred;
        y_pred.reserve(fold.test.size());
        for (std::size_t r = 0; r < fold.test.size(); ++r) y_pred.push_back(model::svm_predict(svm, X_test.row(r)));
        model::Prf prf = model::precision_recall_f1(y_test, y_pred, /*positive=*/1);
        result.report.folds.push_back(prf);
        result.fold_artifacts.push_back(artifacts);

        if (prf.f1 > best.f1) {
            best.f1 = prf.f1;
            best.svm = std::move(svm);
            best.pca = fold_pca;
            best.registry = fold_registry;
            result.best_fold = f;
        }
    }

    result.report.finalize();
    if (best.registry)
        result.importance = feature_importance(best.svm, best.pca ? &*best.pca : nullptr, *best.registry,
                                               cfg.importance_top_n);
    return result;
}

std::vector<std::pair<std::string, double>> feature_importance(const model::SvmModel& svm,
                                                               const numeric::PcaModel* pca,
                                                               const feat::FeatureRegistry& registry,
                                                               std::size_t top_n) {
    std::vector<double> scores;
    if (pca) {
        if (pca->d != registry.dimension())
            throw ShapeError("registry dimension " + std::to_string(registry.dimension()) +
                             " does not match PCA input dimension " + std::to_string(pca->d));
        scores = numeric::back_project(*pca, svm.w);
    } else {
        if (svm.w.size() != registry.dimension())
            throw ShapeError("registry dimension " + std::to_string(registry.dimension()) +
                             " does not match weight vector length " + std::to_string(svm.w.size()));
        scores = svm.w;
    }
    std::vector<std::size_t> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        double fa = std::fabs(scores[a]), fb = std::fabs(scores[b]);
        if (fa != fb) return fa > fb;
        return registry.key(a).str() < registry.key(b).str();
    });
    if (order.size() > top_n) order.resize(top_n);
    std::vector<std::pair<std::string, double>> out;
    out.reserve(order.size());
    for (std::size_t i : order) out.emplace_back(registry.key(i).str(), scores[i]);
    return out;
}

} // namespace gbv::pipeline
