#include "gbv/experiment.hpp"

#include <cstdio>
#include <filesystem>

#include <json.hpp>

#include "gbv/annotation.hpp"
#include "gbv/csv.hpp"
#include "gbv/errors.hpp"
#include "gbv/util.hpp"

namespace gbv::experiment {

using nlohmann::json;

namespace {

void maybe(const json& j, const char* key, auto& target) {
    if (j.contains(key)) target = j.at(key).get<std::remove_reference_t<decltype(target)>>();
}

} // namespace

ExperimentConfig ExperimentConfig::parse(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed experiment config: ") + e.what());
    }
    ExperimentConfig cfg;
    if (doc.contains("paths")) {
        const json& p = doc["paths"];
        maybe(p, "lexicon", cfg.paths.lexicon);
        maybe(p, "annotations", cfg.paths.annotations);
        maybe(p, "records", cfg.paths.records);
        maybe(p, "notifications", cfg.paths.notifications);
        maybe(p, "deaths", cfg.paths.deaths);
        maybe(p, "mapping", cfg.paths.mapping);
        maybe(p, "overrides", cfg.paths.overrides);
    }
    if (doc.contains("label")) {
        const json& l = doc["label"];
        maybe(l, "aggression_icd", cfg.aggression_icd);
        maybe(l, "non_violence_icd", cfg.non_violence_icd);
        maybe(l, "tight_window_days", cfg.tight_window_days);
        maybe(l, "likely_window_days", cfg.likely_window_days);
    }
    if (doc.contains("dataset")) {
        maybe(doc["dataset"], "max_majority_ratio", cfg.dataset.max_majority_ratio);
        maybe(doc["dataset"], "seed", cfg.dataset_seed);
    }
    if (doc.contains("featurizer")) {
        const json& f = doc["featurizer"];
        maybe(f, "frame_min_count", cfg.pipeline.featurizer.frame_min_count);
        maybe(f, "lu_min_count", cfg.pipeline.featurizer.lu_min_count);
        maybe(f, "qualia_weight", cfg.pipeline.featurizer.qualia_weight);
        maybe(f, "use_tfidf", cfg.pipeline.featurizer.use_tfidf);
    }
    if (doc.contains("train")) {
        const json& t = doc["train"];
        maybe(t, "C", cfg.pipeline.train.C);
        maybe(t, "balanced_class_weights", cfg.pipeline.train.balanced_class_weights);
        maybe(t, "tol", cfg.pipeline.train.tol);
        maybe(t, "max_epochs", cfg.pipeline.train.max_epochs);
        maybe(t, "seed", cfg.pipeline.train.seed);
    }
    maybe(doc, "pca_components", cfg.pipeline.pca_components);
    maybe(doc, "folds", cfg.pipeline.folds);
    maybe(doc, "seed", cfg.pipeline.seed);
    maybe(doc, "paper_faithful", cfg.pipeline.paper_faithful);
    maybe(doc, "importance_top_n", cfg.pipeline.importance_top_n);
    maybe(doc, "demographic_fields", cfg.pipeline.demographic_fields);
    cfg.label_config(); // validates the ICD specs and windows
    cfg.pipeline.featurizer.validate();
    cfg.pipeline.train.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) { return parse(read_file(path)); }

std::string ExperimentConfig::canonical_json() const {
    json doc;
    doc["paths"] = {{"lexicon", paths.lexicon},       {"annotations", paths.annotations},
                    {"records", paths.records},       {"notifications", paths.notifications},
                    {"deaths", paths.deaths},         {"mapping", paths.mapping},
                    {"overrides", paths.overrides}};
    doc["label"] = {{"aggression_icd", aggression_icd},
                    {"non_violence_icd", non_violence_icd},
                    {"tight_window_days", tight_window_days},
                    {"likely_window_days", likely_window_days}};
    doc["dataset"] = {{"max_majority_ratio", dataset.max_majority_ratio}, {"seed", dataset_seed}};
    doc["featurizer"] = {{"frame_min_count", pipeline.featurizer.frame_min_count},
                         {"lu_min_count", pipeline.featurizer.lu_min_count},
                         {"qualia_weight", pipeline.featurizer.qualia_weight},
                         {"use_tfidf", pipeline.featurizer.use_tfidf}};
    doc["train"] = {{"C", pipeline.train.C},
                    {"balanced_class_weights", pipeline.train.balanced_class_weights},
                    {"tol", pipeline.train.tol},
                    {"max_epochs", pipeline.train.max_epochs},
                    {"seed", pipeline.train.seed}};
    doc["pca_components"] = pipeline.pca_components;
    doc["folds"] = pipeline.folds;
    doc["seed"] = pipeline.seed;
    doc["paper_faithful"] = pipeline.paper_faithful;
    doc["importance_top_n"] = pipeline.importance_top_n;
    doc["demographic_fields"] = pipeline.demographic_fields;
    return doc.dump(2) + "\n";
}

std::uint64_t ExperimentConfig::config_hash() const { return fnv1a64(canonical_json()); }

cohort::LabelConfig ExperimentConfig::label_config() const {
    cohort::LabelConfig lc;
    lc.aggression = cohort::IcdSet::parse(aggression_icd);
    lc.non_violence = cohort::IcdSet::parse(non_violence_icd);
    lc.tight_window_days = tight_window_days;
    lc.likely_window_days = likely_window_days;
    lc.validate();
    return lc;
}

namespace {

std::string cv_report_tsv(const model::CvReport& r) {
    std::string out = "fold\tprecision\trecall\tf1\n";
    for (std::size_t i = 0; i < r.folds.size(); ++i)
        out += std::to_string(i + 1) + "\t" + format_double(r.folds[i].precision, 6) + "\t" +
               format_double(r.folds[i].recall, 6) + "\t" + format_double(r.folds[i].f1, 6) + "\n";
    out += "mean\t" + format_double(r.mean.precision, 6) + "\t" + format_double(r.mean.recall, 6) + "\t" +
           format_double(r.mean.f1, 6) + "\n";
    out += "std\t" + format_double(r.stdev.precision, 6) + "\t" + format_double(r.stdev.recall, 6) + "\t" +
           format_double(r.stdev.f1, 6) + "\n";
    return out;
}

json cv_report_json(const pipeline::CvResult& result) {
    json doc;
    doc["setup"] = result.report.setup;
    doc["folds"] = json::array();
    for (const model::Prf& p : result.report.folds)
        doc["folds"].push_back({{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}});
    doc["mean"] = {{"precision", result.report.mean.precision},
                   {"recall", result.report.mean.recall},
                   {"f1", result.report.mean.f1}};
    doc["std"] = {{"precision", result.report.stdev.precision},
                  {"recall", result.report.stdev.recall},
                  {"f1", result.report.stdev.f1}};
    doc["best_fold"] = result.best_fold + 1;
    doc["fold_artifact_digests"] = json::array();
    for (const pipeline::FoldArtifacts& a : result.fold_artifacts)
        doc["fold_artifact_digests"].push_back(hex64(a.combined()));
    doc["warnings"] = result.warnings;
    return doc;
}

std::string importance_tsv(const std::vector<std::pair<std::string, double>>& importance) {
    std::string out = "rank\tfeature\tscore\n";
    for (std::size_t i = 0; i < importance.size(); ++i)
        out += std::to_string(i + 1) + "\t" + importance[i].first + "\t" +
               format_double(importance[i].second, 8) + "\n";
    return out;
}

std::string table1_tsv(const std::map<pipeline::Setup, pipeline::CvResult>& results) {
    std::string out = "Model\tF1\tRecall\tPrecision\n";
    for (pipeline::Setup s : {pipeline::Setup::semantic, pipeline::Setup::mixed, pipeline::Setup::demographic}) {
        auto it = results.find(s);
        if (it == results.end()) continue;
        const model::CvReport& r = it->second.report;
        std::string name{pipeline::to_string(s)};
        name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
        out += name + "\t" + r.cell(r.mean.f1, r.stdev.f1) + "\t" + r.cell(r.mean.recall, r.stdev.recall) + "\t" +
               r.cell(r.mean.precision, r.stdev.precision) + "\n";
    }
    return out;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::span<const pipeline::Setup> setups,
                                const std::string& out_dir) {
    ExperimentResult result;
    result.config_hash = cfg.config_hash();
    result.run_dir = out_dir + "/" + hex64(result.config_hash);
    std::filesystem::create_directories(result.run_dir);

    // Inputs.
    lex::Lexicon lexicon = lex::load_lexicon(cfg.paths.lexicon);
    std::vector<ann::AnnotatedRecord> annotations = ann::parse_annotations(cfg.paths.annotations, lexicon);
    ann::ResolutionReport resolution;
    for (ann::AnnotatedRecord& rec : annotations) rec = ann::resolve_lexical_units(std::move(rec), lexicon, &resolution);
    std::vector<cohort::HealthRecord> records = cohort::read_records_csv(cfg.paths.records);
    std::vector<cohort::ViolenceNotification> notes = cohort::read_notifications_csv(cfg.paths.notifications);
    std::vector<cohort::DeathRecord> deaths = cohort::read_deaths_csv(cfg.paths.deaths);

    std::map<std::string, std::uint64_t> input_digests;
    for (const std::string& p : {cfg.paths.lexicon, cfg.paths.annotations, cfg.paths.records,
                                 cfg.paths.notifications, cfg.paths.deaths, cfg.paths.mapping,
                                 cfg.paths.overrides})
        if (!p.empty()) input_digests[std::filesystem::path(p).filename().string()] = fnv1a64(read_file(p));

    // Labeling.
    cohort::LabelConfig label_cfg = cfg.label_config();
    cohort::NotificationIndex note_index(notes);
    cohort::DeathIndex death_index(deaths);
    std::vector<cohort::LabeledCase> cases;
    cases.reserve(records.size());
    for (const cohort::HealthRecord& rec : records)
        cases.push_back(cohort::assign_label(rec, note_index, death_index, label_cfg));
    if (!cfg.paths.overrides.empty()) {
        auto overrides = cohort::read_overrides_csv(cfg.paths.overrides);
        cases = cohort::apply_expert_review(std::move(cases), overrides);
    }
    for (const cohort::LabeledCase& c : cases)
        ++result.provenance_histogram[std::string(cohort::to_string(c.provenance))];

    cohort::Dataset dataset = cohort::build_dataset(cases, cfg.dataset, cfg.dataset_seed);
    result.violence_before = dataset.violence_before;
    result.nonviolence_before = dataset.nonviolence_before;
    result.violence_after = dataset.violence_after;
    result.nonviolence_after = dataset.nonviolence_after;

    // Mixed setup needs the mapping table.
    pipeline::PipelineConfig pipe_cfg = cfg.pipeline;
    if (!cfg.paths.mapping.empty()) pipe_cfg.featurizer.mapping = feat::MappingTable::load(cfg.paths.mapping);

    pipeline::CorpusView view = pipeline::make_corpus_view(lexicon, dataset.cases, annotations, records);

    std::map<std::string, std::uint64_t> output_digests;
    auto write_output = [&](const std::string& name, const std::string& content) {
        write_file(result.run_dir + "/" + name, content);
        output_digests[name] = fnv1a64(content);
    };

    for (pipeline::Setup setup : setups) {
        pipeline::CvResult cv = pipeline::cross_validate(view, setup, pipe_cfg);
        for (const std::string& w : cv.warnings)
            std::fprintf(stderr, "warning [%s]: %s\n", std::string(pipeline::to_string(setup)).c_str(), w.c_str());
        std::string name{pipeline::to_string(setup)};
        write_output("cv_" + name + ".tsv", cv_report_tsv(cv.report));
        write_output("cv_" + name + ".json", cv_report_json(cv).dump(2) + "\n");
        write_output("importance_" + name + ".tsv", importance_tsv(cv.importance));
        result.results.emplace(setup, std::move(cv));
    }
    if (result.results.size() > 1) write_output("comparison.tsv", table1_tsv(result.results));

    {
        CsvTable t;
        t.header = {"record_id", "label", "provenance"};
        for (const cohort::LabeledCase& c : dataset.cases)
            t.rows.push_back({c.record_id, std::string(cohort::to_string(c.label)),
                              std::string(cohort::to_string(c.provenance))});
        write_output("labeled_cases.csv", to_csv(t));
    }
    {
        std::string hist = "provenance\tcount\n";
        for (const auto& [prov, count] : result.provenance_histogram)
            hist += prov + "\t" + std::to_string(count) + "\n";
        hist += "violence_before_undersampling\t" + std::to_string(result.violence_before) + "\n";
        hist += "nonviolence_before_undersampling\t" + std::to_string(result.nonviolence_before) + "\n";
        hist += "violence_after_undersampling\t" + std::to_string(result.violence_after) + "\n";
        hist += "nonviolence_after_undersampling\t" + std::to_string(result.nonviolence_after) + "\n";
        write_output("provenance_histogram.tsv", hist);
    }
    {
        std::string res = "resolved\t" + std::to_string(resolution.resolved) + "\ntotal\t" +
                          std::to_string(resolution.total) + "\nrate\t" + format_double(resolution.rate(), 3) + "\n";
        write_output("lu_resolution.tsv", res);
    }

    json manifest;
    manifest["config"] = json::parse(cfg.canonical_json());
    manifest["config_hash"] = hex64(result.config_hash);
    manifest["seeds"] = {{"pipeline", cfg.pipeline.seed},
                         {"dataset", cfg.dataset_seed},
                         {"train", cfg.pipeline.train.seed}};
    manifest["inputs"] = json::object();
    for (const auto& [name, digest] : input_digests) manifest["inputs"][name] = hex64(digest);
    manifest["outputs"] = json::object();
    for (const auto& [name, digest] : output_digests) manifest["outputs"][name] = hex64(digest);
    manifest["versions"] = {{"artifact", "0.1.0"}, {"lexicon_format", "1"}};
    std::string manifest_text = manifest.dump(2) + "\n";
    write_file(result.run_dir + "/manifest.json", manifest_text);

    return result;
}

} // namespace gbv::experiment
