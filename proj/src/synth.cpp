#include "gbv/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>

#include "gbv/csv.hpp"
#include "gbv/errors.hpp"
#include "gbv/util.hpp"

namespace gbv::synth {

void SynthConfig::validate() const {
    if (n_records < 20) throw ConfigError("n_records must be >= 20");
    if (violence_fraction < 0.0 || violence_fraction > 1.0)
        throw ConfigError("violence_fraction must be in [0, 1]");
    if (signal_strength < 0.0 || signal_strength > 1.0) throw ConfigError("signal_strength must be in [0, 1]");
    if (demographic_informativeness < 0.0 || demographic_informativeness > 1.0)
        throw ConfigError("demographic_informativeness must be in [0, 1]");
    if (sentences_per_record < 1) throw ConfigError("sentences_per_record must be >= 1");
}

const std::vector<DemoField>& demographic_schema() {
    static const std::vector<DemoField> schema = [] {
        std::vector<DemoField> s;
        s.push_back({"race", {"branca", "parda", "preta", "amarela", "indigena", "ignorada"}});
        s.push_back({"age_group", {"0-14", "15-19", "20-29", "30-39", "40-49", "50-59", "60-69", "70+"}});
        s.push_back({"gender_identity",
                     {"mulher_cis", "homem_cis", "mulher_trans", "homem_trans", "nao_informado"}});
        s.push_back({"sexual_orientation", {"heterossexual", "homossexual", "bissexual", "outra", "nao_informado"}});
        s.push_back({"marital_status", {"solteira", "casada", "uniao_estavel", "separada", "viuva", "ignorado"}});
        s.push_back({"education_level",
                     {"nenhuma", "fund1_incompleto", "fund1_completo", "fund2_incompleto", "fund2_completo",
                      "medio_incompleto", "medio_completo", "superior_incompleto", "superior_completo"}});
        DemoField unit{"unit_location", {}};
        for (int i = 1; i <= 30; ++i) unit.values.push_back("bairro_" + std::string(i < 10 ? "0" : "") + std::to_string(i));
        s.push_back(std::move(unit));
        s.push_back({"referral_timing", {"imediato", "ate_24h", "ate_7d", "ate_30d", "eletivo"}});
        s.push_back({"prosthesis_need", {"sim", "nao", "ignorado"}});
        s.push_back({"icd_block_group", {"A", "C", "F", "H", "J", "K", "N", "O", "Q", "U", "X", "Z"}});
        s.push_back({"visit_shift", {"manha", "tarde", "noite", "madrugada"}});
        s.push_back({"insurance_type", {"sus", "privado", "misto", "ignorado"}});
        s.push_back({"employment_status",
                     {"empregada", "desempregada", "autonoma", "estudante", "aposentada", "ignorado"}});
        s.push_back({"household_size", {"1", "2", "3", "4", "5", "6+"}});
        s.push_back({"pregnancy_status", {"gestante", "puerpera", "nao_gestante", "ignorado"}});
        s.push_back({"disability_status", {"nenhuma", "fisica", "intelectual", "visual", "auditiva"}});
        s.push_back({"income_bracket", {"ate_1sm", "1_2sm", "2_4sm", "acima_4sm", "ignorado"}});
        s.push_back({"zone", {"urbana", "rural", "periurbana"}});
        s.push_back({"appointment_type", {"consulta", "retorno", "urgencia", "domiciliar", "teleatendimento"}});
        s.push_back({"referring_unit_type",
                     {"ubs", "upa", "hospital", "caps", "creas", "cras", "maternidade", "policlinica", "samu",
                      "conselho_tutelar", "outra"}});
        return s;
    }();
    return schema;
}

namespace {

const char* kAggressionBlocks[] = {"X85", "X86", "X87", "X88", "X89", "X90", "X91", "X92", "X93", "X94", "X95",
                                   "X96", "X97", "X98", "X99", "Y00", "Y01", "Y02", "Y03", "Y04", "Y05", "Y06",
                                   "Y07", "Y08", "Y09"};
// Inside the default non-violence ICD set (U07, Q00-Q99, Z00-Z39, H25-H28).
const char* kNonViolenceCodes[] = {"U07.1", "Q90", "Q21.0", "Z00", "Z34", "Z30.0", "H25", "H26.9"};
// Outside both default sets.
const char* kNeutralCodes[] = {"F32.1", "F41.0", "N76", "K35", "J18.9", "M54.5", "R51"};

const char* kPlaceNames[] = {"Boa Viagem", "Casa Amarela", "Varzea", "Ibura"};
const char* kRareNames[] = {"Mariazinha", "Josefina",  "Clarindo",  "Severina",  "Abelardo",  "Benedita",
                            "Aparecido",  "Raimunda",  "Waldemar",  "Francisca", "Gumercindo", "Teodora",
                            "Anisio",     "Zulmira",   "Ormindo",   "Benvinda",  "Leocadio",  "Filomena",
                            "Arquimedes", "Iracema",   "Baltazar",  "Dorotea",   "Evaristo",  "Generosa",
                            "Hermenegildo", "Idalina", "Juvenal",   "Leopoldina", "Marcolino", "Nazarena"};

struct FrameDist {
    std::vector<const lex::Frame*> frames;
    std::vector<double> base;
    std::vector<double> signal;
};

FrameDist build_frame_dist(const lex::Lexicon& lexicon) {
    FrameDist d;
    for (const lex::Frame& f : lexicon.frames()) {
        // Frames without lexical units cannot realize a target token.
        bool has_lu = false;
        for (const lex::LexicalUnit& lu : lexicon.lexical_units())
            if (lu.frame == f.name) has_lu = true;
        if (!has_lu) continue;
        d.frames.push_back(&f);
        double base;
        if (f.name == "Health_conditions") base = 10.0;
        else if (f.domain == lex::Domain::Healthcare) base = 3.0;
        else if (f.domain == lex::Domain::Violence) base = 0.4;
        else base = 1.5;
        d.base.push_back(base);
        double signal;
        if (f.name == "Experience_bodily_harm") signal = 5.0;
        else if (f.name == "Personal_relationships" || f.name == "Fear") signal = 4.0;
        else if (f.domain == lex::Domain::Violence) signal = 2.0;
        else if (f.name == "Health_conditions") signal = 2.0;
        else signal = 0.3;
        d.signal.push_back(signal);
    }
    auto normalize = [](std::vector<double>& w) {
        double t = 0.0;
        for (double v : w) t += v;
        for (double& v : w) v /= t;
    };
    normalize(d.base);
    normalize(d.signal);
    return d;
}

std::string lemma_surface(const std::string& lemma_pos) {
    auto dot = lemma_pos.rfind('.');
    return dot == std::string::npos ? lemma_pos : lemma_pos.substr(0, dot);
}

// Builds one sentence carrying the given annotation sets. Each set is
// rendered as "paciente relata <lemma> em <filler>".
struct SentenceBuild {
    std::string text;
    std::vector<ann::AnnotationSet> sets;
};

SentenceBuild render_sentence(std::span<const lex::Frame* const> frames, const lex::Lexicon& lexicon, Rng& rng,
                              std::size_t sentence_index) {
    static const char* kFillers[] = {"casa", "consulta", "queixa", "regiao", "familia", "unidade"};
    SentenceBuild out;
    std::vector<char32_t> cps;
    for (std::size_t s = 0; s < frames.size(); ++s) {
        const lex::Frame& frame = *frames[s];
        std::vector<const lex::LexicalUnit*> lus;
        for (const lex::LexicalUnit& lu : lexicon.lexical_units())
            if (lu.frame == frame.name) lus.push_back(&lu);
        const lex::LexicalUnit* lu = lus[rng.below(lus.size())];

        if (s > 0) {
            auto sep = utf8_decode("; ");
            cps.insert(cps.end(), sep.begin(), sep.end());
        }
        ann::AnnotationSet set;
        set.sentence = sentence_index;
        set.frame = frame.name;
        set.lemma = lu->lemma_pos;

        auto append_word = [&](const std::string& w) {
            auto wd = utf8_decode(w);
            std::size_t b = cps.size();
            cps.insert(cps.end(), wd.begin(), wd.end());
            return ann::Span{b, cps.size()};
        };
        auto append_space = [&] { cps.push_back(U' '); };

        ann::Span subject = append_word("paciente");
        append_space();
        append_word("relata");
        append_space();
        set.target = append_word(lemma_surface(lu->lemma_pos));

        std::size_t n_fes = 1 + (frame.elements.size() > 1 && rng.u01() < 0.5 ? 1 : 0);
        std::vector<std::string> fes = frame.elements;
        for (std::size_t f = 0; f < n_fes; ++f) {
            std::size_t pick = rng.below(fes.size());
            std::string fe = fes[pick];
            fes.erase(fes.begin() + static_cast<std::ptrdiff_t>(pick));
            ann::Span span;
            if (f == 0) {
                span = subject;
            } else {
                append_space();
                append_word("em");
                append_space();
                span = append_word(kFillers[rng.below(std::size(kFillers))]);
            }
            set.fe_spans.push_back({fe, span});
        }
        out.sets.push_back(std::move(set));
    }
    out.text = utf8_encode(cps);
    return out;
}

std::string random_date_text(Rng& rng) {
    auto two = [](std::size_t v) {
        std::string s = std::to_string(v);
        return s.size() < 2 ? "0" + s : s;
    };
    return two(1 + rng.below(28)) + "/" + two(1 + rng.below(12)) + "/" + std::to_string(2022 + rng.below(3));
}

} // namespace

SynthCorpus generate_corpus(const SynthConfig& cfg, const lex::Lexicon& lexicon) {
    cfg.validate();
    Rng rng(cfg.seed);
    SynthCorpus corpus;

    // Exact stratified label counts, shuffled deterministically.
    const std::size_t n_pos = static_cast<std::size_t>(
        std::llround(cfg.violence_fraction * static_cast<double>(cfg.n_records)));
    std::vector<int> positive(cfg.n_records, 0);
    for (std::size_t i = 0; i < n_pos; ++i) positive[i] = 1;
    rng.shuffle(positive);

    FrameDist dist = build_frame_dist(lexicon);
    std::vector<double> p_pos(dist.base.size()), p_neg = dist.base;
    for (std::size_t i = 0; i < dist.base.size(); ++i)
        p_pos[i] = (1.0 - cfg.signal_strength) * dist.base[i] + cfg.signal_strength * dist.signal[i];

    const auto& schema = demographic_schema();
    // Per-field label-conditioned value weights: negatives draw from a fixed
    // ramp, positives shift toward the field's designated signal value.
    auto field_weights = [&](const DemoField& field, bool pos) {
        std::vector<double> w(field.values.size());
        for (std::size_t v = 0; v < w.size(); ++v) w[v] = 1.0 / (1.0 + static_cast<double>(v % 7));
        if (pos) {
            double total = 0.0;
            for (double x : w) total += x;
            std::size_t sig = field.values.size() / 2;
            for (std::size_t v = 0; v < w.size(); ++v)
                w[v] = (1.0 - cfg.demographic_informativeness) * w[v] +
                       (v == sig ? cfg.demographic_informativeness * total : 0.0);
        }
        return w;
    };

    // Value coverage: the first card(f) records in a per-field seeded
    // permutation take each value once (when n_records allows), so every
    // schema value is observed and one-hot dimensionality is stable.
    std::vector<std::map<std::string, std::string>> params(cfg.n_records);
    for (const DemoField& field : schema) {
        std::vector<std::size_t> order(cfg.n_records);
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        rng.shuffle(order);
        for (std::size_t r = 0; r < cfg.n_records; ++r) {
            std::size_t rec = order[r];
            if (r < field.values.size() && cfg.n_records >= field.values.size()) {
                params[rec][field.name] = field.values[r];
            } else {
                auto w = field_weights(field, positive[rec] == 1);
                params[rec][field.name] = field.values[rng.pick_weighted(w)];
            }
        }
    }

    const long base_day = cohort::Date{2023, 1, 1}.to_days();
    std::size_t notification_counter = 0;

    for (std::size_t i = 0; i < cfg.n_records; ++i) {
        const bool pos = positive[i] == 1;
        char idbuf[32];
        std::snprintf(idbuf, sizeof idbuf, "%05zu", i);
        const std::string record_id = "R" + std::string(idbuf);
        const std::string person_id = "P" + std::string(idbuf);

        cohort::HealthRecord rec;
        rec.record_id = record_id;
        rec.person_id = person_id;
        rec.encounter_date = cohort::Date::from_days(base_day + static_cast<long>(rng.below(365)));
        rec.parameterized = params[i];

        if (pos) {
            bool with_icd = rng.u01() < 0.5;
            bool with_notification = rng.u01() < 0.5;
            if (!with_icd && !with_notification) with_notification = true; // keep ground truth reconstructible
            if (with_icd) rec.icd_codes.push_back(kAggressionBlocks[rng.below(std::size(kAggressionBlocks))]);
            else rec.icd_codes.push_back(kNeutralCodes[rng.below(std::size(kNeutralCodes))]);
            if (with_notification) {
                cohort::ViolenceNotification n;
                std::snprintf(idbuf, sizeof idbuf, "%05zu", notification_counter++);
                n.notification_id = "N" + std::string(idbuf);
                n.person_id = person_id;
                long offset = static_cast<long>(rng.below(5)) - 2; // within the tight window
                n.notification_date = cohort::Date::from_days(rec.encounter_date.to_days() + offset);
                n.is_violence_positive = true;
                n.observation_text = "notificacao de violencia";
                corpus.notifications.push_back(std::move(n));
            }
            if (rng.u01() < 0.1) {
                cohort::DeathRecord d;
                d.person_id = person_id;
                long offset = static_cast<long>(rng.below(5)) - 2;
                d.death_date = cohort::Date::from_days(rec.encounter_date.to_days() + offset);
                d.cause_icd = kAggressionBlocks[rng.below(std::size(kAggressionBlocks))];
                corpus.deaths.push_back(std::move(d));
            }
        } else {
            std::size_t n_codes = 1 + rng.below(2);
            for (std::size_t c = 0; c < n_codes; ++c)
                rec.icd_codes.push_back(kNonViolenceCodes[rng.below(std::size(kNonViolenceCodes))]);
        }

        ann::AnnotatedRecord arec;
        arec.record_id = record_id;
        static const ann::Field kFieldCycle[] = {ann::Field::subjective, ann::Field::objective,
                                                 ann::Field::assessment, ann::Field::plan};
        const std::vector<double>& p = pos ? p_pos : p_neg;
        for (int s = 0; s < cfg.sentences_per_record; ++s) {
            std::size_t n_sets = 1 + (rng.u01() < 0.4 ? 1 : 0);
            std::vector<const lex::Frame*> frames;
            for (std::size_t t = 0; t < n_sets; ++t) frames.push_back(dist.frames[rng.pick_weighted(p)]);
            SentenceBuild built = render_sentence(frames, lexicon, rng, arec.sentences.size());

            // PII material appended after span computation.
            double roll = rng.u01();
            if (roll < 0.12) built.text += " retorno em " + random_date_text(rng);
            else if (roll < 0.17) built.text += " contato (81) 9" + std::to_string(1000 + rng.below(9000)) + "-" +
                                                std::to_string(1000 + rng.below(9000));
            else if (roll < 0.25) built.text += " mora em " + std::string(kPlaceNames[rng.below(std::size(kPlaceNames))]);
            else if (roll < 0.29) built.text += " acompanhada por " + std::string(kRareNames[rng.below(std::size(kRareNames))]);

            ann::Sentence sent;
            sent.record_id = record_id;
            sent.field = kFieldCycle[s % 4];
            sent.index = s / 4;
            sent.text = built.text;
            arec.sentences.push_back(std::move(sent));
            for (ann::AnnotationSet& set : built.sets) arec.sets.push_back(std::move(set));
        }

        corpus.records.push_back(std::move(rec));
        corpus.annotations.push_back(std::move(arec));
        corpus.truth.emplace_back(record_id, pos ? cohort::Label::Violence : cohort::Label::NonViolence);
    }
    return corpus;
}

void write_corpus(const SynthCorpus& corpus, const std::string& dir) {
    std::filesystem::create_directories(dir);
    cohort::write_records_csv(corpus.records, dir + "/records.csv");
    cohort::write_notifications_csv(corpus.notifications, dir + "/notifications.csv");
    cohort::write_deaths_csv(corpus.deaths, dir + "/deaths.csv");
    ann::save_annotations(corpus.annotations, dir + "/annotations.jsonl");
    CsvTable truth;
    truth.header = {"record_id", "label"};
    for (const auto& [id, label] : corpus.truth)
        truth.rows.push_back({id, std::string(cohort::to_string(label))});
    write_csv(dir + "/labels_truth.csv", truth);
}

} // namespace gbv::synth
