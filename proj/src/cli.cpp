#include "gbv/cli.hpp"

#include <filesystem>
#include <iostream>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "gbv/annotation.hpp"
#include "gbv/anonymize.hpp"
#include "gbv/cohort.hpp"
#include "gbv/csv.hpp"
#include "gbv/errors.hpp"
#include "gbv/experiment.hpp"
#include "gbv/featurize.hpp"
#include "gbv/lexicon.hpp"
#include "gbv/patterns.hpp"
#include "gbv/pipeline.hpp"
#include "gbv/synth.hpp"
#include "gbv/util.hpp"

namespace gbv::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

int cmd_lexicon_validate(const std::string& path) {
    lex::Lexicon lexicon = lex::load_lexicon(path);
    std::cout << "ok: " << lexicon.frame_count() << " frames, " << lexicon.frame_element_count()
              << " frame elements, " << lexicon.lexical_unit_count() << " lexical units, "
              << lexicon.qualia_count() << " qualia relations\n";
    return 0;
}

int cmd_annotate_validate(const std::string& path, const std::string& lexicon_path) {
    lex::Lexicon lexicon = lex::load_lexicon(lexicon_path);
    std::string content = read_file(path);
    std::size_t line_no = 0, records = 0, sets = 0, errors = 0;
    std::set<std::string> seen_ids;
    std::cout << "line\tstatus\tdetail\n";
    for (const std::string& line : split(content, '\n')) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            auto recs = ann::parse_annotations_text(line, lexicon);
            for (const auto& r : recs) {
                if (!seen_ids.insert(r.record_id).second)
                    throw ParseError("duplicate record_id: " + r.record_id);
                ++records;
                sets += r.sets.size();
            }
        } catch (const Error& e) {
            ++errors;
            std::cout << line_no << "\terror\t" << e.what() << "\n";
        }
    }
    std::cout << "total\t" << (errors == 0 ? "ok" : "failed") << "\t" << records << " records, " << sets
              << " annotation sets, " << errors << " errors\n";
    return errors == 0 ? 0 : 1;
}

struct AnonymizeArgs {
    std::string input, lexicon, out_dir;
    std::string patterns, gazetteer;
    double threshold = 0.85;
    int max_freq = 5;
};

int cmd_anonymize_run(const AnonymizeArgs& args) {
    lex::Lexicon lexicon = lex::load_lexicon(args.lexicon);
    auto records = ann::parse_annotations(args.input, lexicon);
    anon::PatternSet patterns =
        args.patterns.empty() ? anon::PatternSet::defaults() : anon::PatternSet::load(args.patterns);
    anon::Gazetteer gazetteer = args.gazetteer.empty() ? anon::Gazetteer::from_entries({})
                                                       : anon::Gazetteer::load(args.gazetteer);

    // Corpus-wide frequency pass for name candidates.
    std::vector<ann::Sentence> all_sentences;
    for (const auto& rec : records)
        for (const auto& s : rec.sentences) all_sentences.push_back(s);
    auto flagged = anon::frequency_name_candidates(all_sentences, lexicon, args.max_freq);
    std::map<std::size_t, std::vector<const anon::PiiMatch*>> flags_by_sentence;
    for (const auto& fc : flagged) flags_by_sentence[fc.sentence].push_back(&fc.match);

    fs::create_directories(args.out_dir);
    std::string review = "record_id\tfield\tindex\ttoken\tconfidence\n";
    std::string audit = "record_id\tfield\tindex\tredactions\n";
    std::size_t total_redactions = 0;

    std::size_t sentence_counter = 0;
    std::vector<ann::AnnotatedRecord> out_records;
    for (const auto& rec : records) {
        ann::AnnotatedRecord out;
        out.record_id = rec.record_id;
        for (const auto& s : rec.sentences) {
            std::vector<anon::PiiMatch> matches = anon::regex_scrub(s.text, patterns);
            if (!gazetteer.entries().empty()) {
                auto places = anon::fuzzy_place_match(s.text, gazetteer, args.threshold);
                // Regex matches take precedence over overlapping place matches.
                for (auto& pm : places) {
                    bool overlaps = false;
                    for (const auto& m : matches)
                        if (pm.span.begin < m.span.end && m.span.begin < pm.span.end) overlaps = true;
                    if (!overlaps) matches.push_back(std::move(pm));
                }
            }
            anon::AuditEntry entry;
            ann::Sentence redacted = s;
            redacted.text = anon::apply_redactions(s.text, matches, &entry);
            total_redactions += entry.kinds.size();
            if (!entry.kinds.empty()) {
                audit += rec.record_id + "\t" + std::string(ann::to_string(s.field)) + "\t" +
                         std::to_string(s.index) + "\t";
                for (std::size_t i = 0; i < entry.kinds.size(); ++i) {
                    if (i) audit += ",";
                    audit += to_string(entry.kinds[i]);
                }
                audit += "\n";
            }
            for (const anon::PiiMatch* fm : flags_by_sentence[sentence_counter])
                review += rec.record_id + "\t" + std::string(ann::to_string(s.field)) + "\t" +
                          std::to_string(s.index) + "\t" + fm->text + "\t" + format_double(fm->confidence, 3) +
                          "\n";
            ++sentence_counter;
            out.sentences.push_back(std::move(redacted));
        }
        // Annotation sets are not carried over: spans no longer apply to the
        // redacted text, and annotation runs on the anonymized corpus.
        out_records.push_back(std::move(out));
    }

    ann::save_annotations(out_records, args.out_dir + "/anonymized.jsonl");
    write_file(args.out_dir + "/review_candidates.tsv", review);
    write_file(args.out_dir + "/audit_log.tsv", audit);
    std::cout << "redacted " << total_redactions << " spans across " << records.size() << " records; "
              << flagged.size() << " name candidates flagged for review\n";
    return 0;
}

struct CohortArgs {
    std::string records, notifications, deaths, out;
    std::string config, overrides;
};

int cmd_cohort_label(const CohortArgs& args) {
    cohort::LabelConfig label_cfg = cohort::LabelConfig::defaults();
    if (!args.config.empty()) {
        experiment::ExperimentConfig cfg = experiment::ExperimentConfig::load(args.config);
        label_cfg = cfg.label_config();
    }
    auto records = cohort::read_records_csv(args.records);
    cohort::NotificationIndex notes(cohort::read_notifications_csv(args.notifications));
    cohort::DeathIndex deaths(cohort::read_deaths_csv(args.deaths));
    std::vector<cohort::LabeledCase> cases;
    for (const auto& rec : records) cases.push_back(cohort::assign_label(rec, notes, deaths, label_cfg));
    if (!args.overrides.empty())
        cases = cohort::apply_expert_review(std::move(cases), cohort::read_overrides_csv(args.overrides));

    cohort::write_labeled_cases_csv(cases, args.out);
    std::map<std::string, std::size_t> histogram;
    for (const auto& c : cases) ++histogram[std::string(cohort::to_string(c.provenance))];
    std::cout << "provenance\tcount\n";
    for (const auto& [prov, count] : histogram) std::cout << prov << "\t" << count << "\n";
    return 0;
}

struct SynthArgs {
    std::string out_dir, lexicon, config;
    synth::SynthConfig cfg;
};

int cmd_synth_generate(const SynthArgs& args) {
    synth::SynthConfig cfg = args.cfg;
    if (!args.config.empty()) {
        json doc = json::parse(read_file(args.config));
        if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("n_records")) cfg.n_records = doc["n_records"].get<std::size_t>();
        if (doc.contains("violence_fraction")) cfg.violence_fraction = doc["violence_fraction"].get<double>();
        if (doc.contains("signal_strength")) cfg.signal_strength = doc["signal_strength"].get<double>();
        if (doc.contains("demographic_informativeness"))
            cfg.demographic_informativeness = doc["demographic_informativeness"].get<double>();
        if (doc.contains("sentences_per_record")) cfg.sentences_per_record = doc["sentences_per_record"].get<int>();
    }
    lex::Lexicon lexicon = lex::load_lexicon(args.lexicon);
    synth::SynthCorpus corpus = synth::generate_corpus(cfg, lexicon);
    synth::write_corpus(corpus, args.out_dir);
    std::size_t positives = 0;
    for (const auto& [id, label] : corpus.truth)
        if (label == cohort::Label::Violence) ++positives;
    std::cout << "generated " << corpus.records.size() << " records (" << positives << " violence) into "
              << args.out_dir << "\n";
    return 0;
}

struct FeaturizeArgs {
    std::string setup = "semantic";
    std::string lexicon, annotations, records, mapping, labels, out_dir;
    feat::FeaturizerConfig cfg;
};

int cmd_featurize(const FeaturizeArgs& args) {
    pipeline::Setup setup = pipeline::parse_setup(args.setup);
    lex::Lexicon lexicon = lex::load_lexicon(args.lexicon);
    auto annotations = ann::parse_annotations(args.annotations, lexicon);
    for (auto& rec : annotations) rec = ann::resolve_lexical_units(std::move(rec), lexicon);
    std::vector<cohort::HealthRecord> records;
    if (!args.records.empty()) records = cohort::read_records_csv(args.records);
    std::map<std::string, const cohort::HealthRecord*> rec_by_id;
    for (const auto& r : records) rec_by_id.emplace(r.record_id, &r);

    fs::create_directories(args.out_dir);

    if (setup == pipeline::Setup::demographic) {
        std::set<std::string> field_set;
        for (const auto& r : records)
            for (const auto& [k, v] : r.parameterized) field_set.insert(k);
        std::vector<std::string> fields(field_set.begin(), field_set.end());
        std::vector<const cohort::HealthRecord*> recs;
        for (const auto& r : records) recs.push_back(&r);
        feat::OneHotResult onehot = feat::one_hot_encode(recs, fields);
        std::string triplets;
        for (std::size_t r = 0; r < onehot.matrix.size(); ++r)
            for (std::size_t c = 0; c < onehot.matrix[r].size(); ++c)
                if (onehot.matrix[r][c] != 0.0)
                    triplets += std::to_string(r) + "\t" + std::to_string(c) + "\t1\n";
        write_file(args.out_dir + "/matrix.triplets", triplets);
        write_file(args.out_dir + "/registry.tsv", onehot.registry.serialize());
        std::cout << "one-hot matrix: " << onehot.matrix.size() << " x " << onehot.registry.dimension() << "\n";
        return 0;
    }

    feat::FeaturizerConfig cfg = args.cfg;
    cfg.include_parameterized = setup == pipeline::Setup::mixed;
    if (!args.mapping.empty()) cfg.mapping = feat::MappingTable::load(args.mapping);

    feat::CoverageReport coverage;
    std::vector<feat::CountMap> counts;
    for (const auto& rec : annotations) {
        feat::CountMap c = feat::count_features(rec, lexicon, cfg);
        feat::add_qualia_features(c, lexicon, cfg);
        if (setup == pipeline::Setup::mixed) {
            auto it = rec_by_id.find(rec.record_id);
            if (it != rec_by_id.end())
                feat::merge_counts(c, feat::map_parameterized(*it->second, cfg, &coverage));
        }
        counts.push_back(std::move(c));
    }
    feat::FeatureRegistry registry = feat::fit_registry(counts, cfg);
    std::vector<feat::SparseVector> vectors;
    for (const auto& c : counts) vectors.push_back(registry.vectorize(c));
    feat::TfidfModel tfidf = feat::tfidf_fit(vectors, registry);
    if (cfg.use_tfidf)
        for (auto& v : vectors) v = feat::tfidf_transform(tfidf, v);

    write_file(args.out_dir + "/matrix.triplets", feat::to_triplets(vectors));
    write_file(args.out_dir + "/registry.tsv", registry.serialize());
    write_file(args.out_dir + "/idf.tsv", tfidf.serialize());
    if (setup == pipeline::Setup::mixed) {
        std::string cov = "mapped\t" + std::to_string(coverage.mapped) + "\nunmapped\t" +
                          std::to_string(coverage.unmapped) + "\n";
        for (const auto& [field, n] : coverage.unmapped_by_field) cov += "unmapped." + field + "\t" + std::to_string(n) + "\n";
        write_file(args.out_dir + "/mapping_coverage.tsv", cov);
    }
    std::cout << "feature matrix: " << vectors.size() << " x " << registry.dimension() << "\n";
    return 0;
}

struct PatternArgs {
    std::string lexicon, annotations, labels, out_dir;
    std::size_t frames_n = 15, lus_n = 20, drill_n = 30;
    std::vector<std::string> drill_frames;
};

int cmd_patterns_report(const PatternArgs& args) {
    lex::Lexicon lexicon = lex::load_lexicon(args.lexicon);
    auto annotations = ann::parse_annotations(args.annotations, lexicon);
    for (auto& rec : annotations) rec = ann::resolve_lexical_units(std::move(rec), lexicon);
    auto cases = cohort::read_labeled_cases_csv(args.labels);
    std::set<std::string> violence_ids;
    for (const auto& c : cases)
        if (c.label == cohort::Label::Violence) violence_ids.insert(c.record_id);
    std::vector<const ann::AnnotatedRecord*> violence_records;
    for (const auto& rec : annotations)
        if (violence_ids.count(rec.record_id)) violence_records.push_back(&rec);

    patterns::PatternReport report = patterns::build_report(violence_records, lexicon, args.frames_n, args.lus_n,
                                                            args.drill_n, args.drill_frames);
    fs::create_directories(args.out_dir);
    auto write_ranked = [&](const std::string& name, const std::vector<patterns::RankedCount>& ranked) {
        std::string out = "rank\tname\tcount\n";
        for (std::size_t i = 0; i < ranked.size(); ++i)
            out += std::to_string(i + 1) + "\t" + ranked[i].name + "\t" + std::to_string(ranked[i].count) + "\n";
        write_file(args.out_dir + "/" + name, out);
    };
    for (const auto& [domain, ranked] : report.top_frames)
        write_ranked("top_frames_" + utf8_to_lower(lex::to_string(domain)) + ".tsv", ranked);
    for (const auto& [domain, ranked] : report.top_lus)
        write_ranked("top_lus_" + utf8_to_lower(lex::to_string(domain)) + ".tsv", ranked);
    for (const auto& [frame, ranked] : report.lu_drilldown)
        write_ranked("lus_" + utf8_to_lower(frame) + ".tsv", ranked);
    std::cout << "pattern reports written for " << violence_records.size() << " violence-labeled records\n";
    return 0;
}

struct RunArgs {
    std::string config;
    std::string out_dir = "runs";
    std::string setup;
    bool all = false;
    bool paper_faithful = false;
    bool has_seed = false;
    std::uint64_t seed = 0;
};

int cmd_run(const RunArgs& args) {
    experiment::ExperimentConfig cfg = experiment::ExperimentConfig::load(args.config);
    if (args.paper_faithful) cfg.pipeline.paper_faithful = true;
    if (args.has_seed) cfg.pipeline.seed = args.seed;
    std::vector<pipeline::Setup> setups;
    if (args.all)
        setups = {pipeline::Setup::semantic, pipeline::Setup::mixed, pipeline::Setup::demographic};
    else
        setups = {pipeline::parse_setup(args.setup)};
    experiment::ExperimentResult result = experiment::run_experiment(cfg, setups, args.out_dir);
    std::cout << "run " << hex64(result.config_hash) << " -> " << result.run_dir << "\n";
    for (const auto& [setup, cv] : result.results)
        std::cout << pipeline::to_string(setup) << "\tF1 " << cv.report.cell(cv.report.mean.f1, cv.report.stdev.f1)
                  << "\trecall " << cv.report.cell(cv.report.mean.recall, cv.report.stdev.recall) << "\tprecision "
                  << cv.report.cell(cv.report.mean.precision, cv.report.stdev.precision) << "\n";
    return 0;
}

struct TrainArgs {
    std::string config, setup = "semantic", out_dir = "model_out";
};

int cmd_train(const TrainArgs& args) {
    experiment::ExperimentConfig cfg = experiment::ExperimentConfig::load(args.config);
    pipeline::Setup setup = pipeline::parse_setup(args.setup);

    lex::Lexicon lexicon = lex::load_lexicon(cfg.paths.lexicon);
    auto annotations = ann::parse_annotations(cfg.paths.annotations, lexicon);
    for (auto& rec : annotations) rec = ann::resolve_lexical_units(std::move(rec), lexicon);
    auto records = cohort::read_records_csv(cfg.paths.records);
    cohort::NotificationIndex notes(cohort::read_notifications_csv(cfg.paths.notifications));
    cohort::DeathIndex deaths(cohort::read_deaths_csv(cfg.paths.deaths));
    cohort::LabelConfig label_cfg = cfg.label_config();
    std::vector<cohort::LabeledCase> cases;
    for (const auto& rec : records) cases.push_back(cohort::assign_label(rec, notes, deaths, label_cfg));
    cohort::Dataset dataset = cohort::build_dataset(cases, cfg.dataset, cfg.dataset_seed);

    pipeline::PipelineConfig pipe_cfg = cfg.pipeline;
    if (!cfg.paths.mapping.empty()) pipe_cfg.featurizer.mapping = feat::MappingTable::load(cfg.paths.mapping);
    pipe_cfg.featurizer.include_parameterized = setup == pipeline::Setup::mixed;
    pipeline::CorpusView view = pipeline::make_corpus_view(lexicon, dataset.cases, annotations, records);

    std::vector<std::size_t> all(view.cases.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    std::vector<int> labels;
    for (const auto& cv : view.cases) labels.push_back(cv.label);

    fs::create_directories(args.out_dir);
    model::SvmModel svm;
    if (setup == pipeline::Setup::demographic) {
        std::set<std::string> field_set;
        for (const auto& cv : view.cases)
            if (cv.record)
                for (const auto& [k, v] : cv.record->parameterized) field_set.insert(k);
        std::vector<std::string> fields(field_set.begin(), field_set.end());
        std::vector<const cohort::HealthRecord*> recs;
        for (const auto& cv : view.cases) recs.push_back(cv.record);
        feat::FeatureRegistry registry = feat::one_hot_fit(recs, fields);
        numeric::DenseMatrix X(view.cases.size(), registry.dimension());
        for (std::size_t r = 0; r < view.cases.size(); ++r)
            if (view.cases[r].record) {
                auto row = feat::one_hot_row(*view.cases[r].record, registry);
                std::copy(row.begin(), row.end(),
                          X.values.begin() + static_cast<std::ptrdiff_t>(r * registry.dimension()));
            }
        svm = model::svm_train(X, labels, pipe_cfg.train);
        write_file(args.out_dir + "/registry.tsv", registry.serialize());
        auto importance = pipeline::feature_importance(svm, nullptr, registry, pipe_cfg.importance_top_n);
        std::string imp = "rank\tfeature\tscore\n";
        for (std::size_t i = 0; i < importance.size(); ++i)
            imp += std::to_string(i + 1) + "\t" + importance[i].first + "\t" +
                   format_double(importance[i].second, 8) + "\n";
        write_file(args.out_dir + "/importance.tsv", imp);
    } else {
        pipeline::FittedFold fit = pipeline::fit_semantic_fold(view, all, setup, pipe_cfg);
        std::vector<feat::SparseVector> vectors;
        for (std::size_t i : all) {
            feat::CountMap counts;
            if (view.cases[i].annotated) {
                counts = feat::count_features(*view.cases[i].annotated, lexicon, pipe_cfg.featurizer);
                feat::add_qualia_features(counts, lexicon, pipe_cfg.featurizer);
            }
            if (setup == pipeline::Setup::mixed && view.cases[i].record)
                feat::merge_counts(counts, feat::map_parameterized(*view.cases[i].record, pipe_cfg.featurizer));
            feat::SparseVector v = fit.registry.vectorize(counts);
            if (pipe_cfg.featurizer.use_tfidf) v = feat::tfidf_transform(fit.tfidf, v);
            vectors.push_back(std::move(v));
        }
        numeric::DenseMatrix X(vectors.size(), fit.registry.dimension());
        for (std::size_t r = 0; r < vectors.size(); ++r)
            for (const auto& [c, v] : vectors[r].items) X.at(r, c) = v;
        numeric::DenseMatrix Z = numeric::pca_transform(fit.pca, X);
        svm = model::svm_train(Z, labels, pipe_cfg.train);
        write_file(args.out_dir + "/registry.tsv", fit.registry.serialize());
        write_file(args.out_dir + "/idf.tsv", fit.tfidf.serialize());
        numeric::save_pca(fit.pca, args.out_dir + "/pca.bin");
        auto importance = pipeline::feature_importance(svm, &fit.pca, fit.registry, pipe_cfg.importance_top_n);
        std::string imp = "rank\tfeature\tscore\n";
        for (std::size_t i = 0; i < importance.size(); ++i)
            imp += std::to_string(i + 1) + "\t" + importance[i].first + "\t" +
                   format_double(importance[i].second, 8) + "\n";
        write_file(args.out_dir + "/importance.tsv", imp);
    }

    json m;
    m["setup"] = args.setup;
    m["w"] = svm.w;
    m["b"] = svm.b;
    m["primal_objective"] = svm.primal_objective;
    m["epochs_run"] = svm.epochs_run;
    write_file(args.out_dir + "/svm.json", m.dump(2) + "\n");
    std::cout << "trained " << args.setup << " model on " << labels.size() << " cases; artifacts in "
              << args.out_dir << "\n";
    return 0;
}

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Frame-semantic GBV classification pipeline"};
    app.require_subcommand(1);

    // lexicon validate
    auto* lexicon_cmd = app.add_subcommand("lexicon", "Lexicon utilities");
    lexicon_cmd->require_subcommand(1);
    std::string lex_path;
    auto* lex_validate = lexicon_cmd->add_subcommand("validate", "Validate a lexicon file");
    lex_validate->add_option("path", lex_path, "Lexicon file")->required();

    // annotate validate
    auto* annotate_cmd = app.add_subcommand("annotate", "Annotation utilities");
    annotate_cmd->require_subcommand(1);
    std::string ann_path, ann_lexicon;
    auto* ann_validate = annotate_cmd->add_subcommand("validate", "Validate an annotation file");
    ann_validate->add_option("path", ann_path, "Annotation JSONL file")->required();
    ann_validate->add_option("--lexicon", ann_lexicon, "Lexicon file")->required();

    // anonymize run
    auto* anon_cmd = app.add_subcommand("anonymize", "PII scrubbing");
    anon_cmd->require_subcommand(1);
    AnonymizeArgs anon_args;
    auto* anon_run = anon_cmd->add_subcommand("run", "Scrub a sentence corpus");
    anon_run->add_option("--input", anon_args.input, "Annotation JSONL input")->required();
    anon_run->add_option("--lexicon", anon_args.lexicon, "Lexicon file")->required();
    anon_run->add_option("--out-dir", anon_args.out_dir, "Output directory")->required();
    anon_run->add_option("--patterns", anon_args.patterns, "Pattern file (kind<TAB>regex)");
    anon_run->add_option("--gazetteer", anon_args.gazetteer, "Place-name gazetteer");
    anon_run->add_option("--threshold", anon_args.threshold, "Fuzzy place similarity threshold");
    anon_run->add_option("--max-freq", anon_args.max_freq, "Name-candidate frequency ceiling");

    // cohort label
    auto* cohort_cmd = app.add_subcommand("cohort", "Record linkage and labeling");
    cohort_cmd->require_subcommand(1);
    CohortArgs cohort_args;
    auto* cohort_label = cohort_cmd->add_subcommand("label", "Label encounter records");
    cohort_label->add_option("--records", cohort_args.records, "Records CSV")->required();
    cohort_label->add_option("--notifications", cohort_args.notifications, "Notifications CSV")->required();
    cohort_label->add_option("--deaths", cohort_args.deaths, "Deaths CSV")->required();
    cohort_label->add_option("--out", cohort_args.out, "Labeled cases output CSV")->required();
    cohort_label->add_option("--config", cohort_args.config, "Experiment config (label section)");
    cohort_label->add_option("--overrides", cohort_args.overrides, "Expert review overrides CSV");

    // synth generate
    auto* synth_cmd = app.add_subcommand("synth", "Synthetic corpus generation");
    synth_cmd->require_subcommand(1);
    SynthArgs synth_args;
    auto* synth_generate = synth_cmd->add_subcommand("generate", "Generate a seeded synthetic corpus");
    synth_generate->add_option("--out-dir", synth_args.out_dir, "Output directory")->required();
    synth_generate->add_option("--lexicon", synth_args.lexicon, "Lexicon file")->required();
    synth_generate->add_option("--config", synth_args.config, "Synth config JSON");
    synth_generate->add_option("--seed", synth_args.cfg.seed, "Generator seed");
    synth_generate->add_option("--n-records", synth_args.cfg.n_records, "Number of records");
    synth_generate->add_option("--violence-fraction", synth_args.cfg.violence_fraction, "Positive fraction");
    synth_generate->add_option("--signal-strength", synth_args.cfg.signal_strength, "Semantic signal strength");
    synth_generate->add_option("--demographic-informativeness", synth_args.cfg.demographic_informativeness,
                               "Label correlation of parameterized fields");
    synth_generate->add_option("--sentences", synth_args.cfg.sentences_per_record, "Sentences per record");

    // featurize
    FeaturizeArgs feat_args;
    auto* featurize_cmd = app.add_subcommand("featurize", "Export feature matrices");
    featurize_cmd->add_option("--setup", feat_args.setup, "semantic | mixed | demographic");
    featurize_cmd->add_option("--lexicon", feat_args.lexicon, "Lexicon file")->required();
    featurize_cmd->add_option("--annotations", feat_args.annotations, "Annotation JSONL")->required();
    featurize_cmd->add_option("--records", feat_args.records, "Records CSV (mixed/demographic)");
    featurize_cmd->add_option("--mapping", feat_args.mapping, "Parameterized mapping TSV");
    featurize_cmd->add_option("--out-dir", feat_args.out_dir, "Output directory")->required();
    featurize_cmd->add_option("--frame-min-count", feat_args.cfg.frame_min_count, "Frame pruning threshold");
    featurize_cmd->add_option("--lu-min-count", feat_args.cfg.lu_min_count, "LU pruning threshold");
    featurize_cmd->add_option("--qualia-weight", feat_args.cfg.qualia_weight, "Qualia feature weight");

    // patterns report
    auto* patterns_cmd = app.add_subcommand("patterns", "Frequency pattern reports");
    patterns_cmd->require_subcommand(1);
    PatternArgs pattern_args;
    auto* patterns_report = patterns_cmd->add_subcommand("report", "Frame/LU frequency reports");
    patterns_report->add_option("--lexicon", pattern_args.lexicon, "Lexicon file")->required();
    patterns_report->add_option("--annotations", pattern_args.annotations, "Annotation JSONL")->required();
    patterns_report->add_option("--labels", pattern_args.labels, "Labeled cases CSV")->required();
    patterns_report->add_option("--out-dir", pattern_args.out_dir, "Output directory")->required();
    patterns_report->add_option("--frames-n", pattern_args.frames_n, "Top frames per domain");
    patterns_report->add_option("--lus-n", pattern_args.lus_n, "Top LUs per domain");
    patterns_report->add_option("--drill-n", pattern_args.drill_n, "Top LUs per drill-down frame");
    patterns_report->add_option("--drill-frame", pattern_args.drill_frames, "Frame(s) to drill into");

    // train / evaluate / run
    TrainArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "Fit one setup on the full dataset");
    train_cmd->add_option("--config", train_args.config, "Experiment config JSON")->required();
    train_cmd->add_option("--setup", train_args.setup, "semantic | mixed | demographic");
    train_cmd->add_option("--out-dir", train_args.out_dir, "Artifact directory");

    RunArgs eval_args;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Cross-validate one setup");
    evaluate_cmd->add_option("--config", eval_args.config, "Experiment config JSON")->required();
    evaluate_cmd->add_option("--setup", eval_args.setup, "semantic | mixed | demographic")->required();
    evaluate_cmd->add_option("--out-dir", eval_args.out_dir, "Run directory root");
    evaluate_cmd->add_flag("--paper-faithful", eval_args.paper_faithful,
                           "Fit featurizer/PCA once on the whole corpus");

    RunArgs run_args;
    auto* run_cmd = app.add_subcommand("run", "Run experimental setups end to end");
    run_cmd->add_option("--config", run_args.config, "Experiment config JSON")->required();
    auto* setup_opt = run_cmd->add_option("--setup", run_args.setup, "semantic | mixed | demographic");
    run_cmd->add_flag("--all", run_args.all, "All three setups plus the comparison table");
    run_cmd->add_option("--out-dir", run_args.out_dir, "Run directory root");
    run_cmd->add_flag("--paper-faithful", run_args.paper_faithful, "Fit featurizer/PCA once on the whole corpus");
    auto* seed_opt = run_cmd->add_option("--seed", run_args.seed, "Pipeline seed override");
    setup_opt->excludes("--all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (lex_validate->parsed()) return cmd_lexicon_validate(lex_path);
        if (ann_validate->parsed()) return cmd_annotate_validate(ann_path, ann_lexicon);
        if (anon_run->parsed()) return cmd_anonymize_run(anon_args);
        if (cohort_label->parsed()) return cmd_cohort_label(cohort_args);
        if (synth_generate->parsed()) return cmd_synth_generate(synth_args);
        if (featurize_cmd->parsed()) return cmd_featurize(feat_args);
        if (patterns_report->parsed()) return cmd_patterns_report(pattern_args);
        if (train_cmd->parsed()) return cmd_train(train_args);
        if (evaluate_cmd->parsed()) return cmd_run(eval_args);
        if (run_cmd->parsed()) {
            if (!run_args.all && run_args.setup.empty())
                throw ConfigError("run requires --setup or --all");
            run_args.has_seed = seed_opt->count() > 0;
            return cmd_run(run_args);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace gbv::cli
