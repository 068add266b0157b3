#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "alignability/aligner.hpp"
#include "alignability/analysis.hpp"
#include "alignability/corpus.hpp"
#include "alignability/embedalign.hpp"
#include "alignability/error.hpp"
#include "alignability/log.hpp"
#include "alignability/metrics.hpp"
#include "alignability/pipeline.hpp"
#include "alignability/symmetrise.hpp"
#include "alignability/tokenise.hpp"
#include "alignability/util.hpp"

using namespace alignability;

namespace {

struct GlobalOpts {
    uint64_t seed = 0;
    std::string out_dir;
    int threads = 1;
    std::string heuristic = "gdfa";
};

Tokeniser load_model(const std::string& type, const std::string& path) {
    if (type == "bpe") return load_bpe(path);
    if (type == "unigram") return load_unigram(path);
    fail("config.invalid", "unknown tokeniser type \"" + type + "\" (expected bpe|unigram)");
}

std::vector<std::string> raw_lines(const std::string& path) {
    std::vector<std::string> lines = read_lines(path);
    for (size_t i = 0; i < lines.size(); ++i)
        if (!valid_utf8(lines[i]))
            fail("io.invalid-utf8", path + " line " + std::to_string(i + 1) + ": invalid UTF-8");
    return lines;
}

void add_aligner_flags(CLI::App* cmd, AlignerConfig& cfg) {
    cmd->add_flag("--no-hmm{false}", cfg.use_hmm, "disable the HMM jump model");
    cmd->add_option("--lexical-concentration", cfg.lexical_concentration);
    cmd->add_option("--jump-concentration", cfg.jump_concentration);
    cmd->add_option("--null-prior", cfg.null_prior);
    cmd->add_option("--max-jump", cfg.max_jump);
    cmd->add_option("--train-iterations-lexical", cfg.train_iterations_lexical);
    cmd->add_option("--train-iterations-hmm", cfg.train_iterations_hmm);
    cmd->add_option("--test-iterations", cfg.test_iterations);
}

int run(int argc, char** argv) {
    CLI::App app{"subword token alignability toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts global;
    app.add_option("--seed", global.seed, "RNG seed recorded in output metadata");
    app.add_option("--out", global.out_dir, "output directory");
    app.add_option("--threads", global.threads, "pair-level worker threads");
    app.add_option("--heuristic", global.heuristic,
                   "symmetrisation heuristic: intersect|union|gdfa");

    // ---- tokenise ----------------------------------------------------
    auto* tok = app.add_subcommand("tokenise", "encode text, train BPE, or merge tokenisers");
    std::string tok_in, tok_out, tok_model, tok_type = "bpe", tok_model_out, tok_mix;
    size_t tok_vocab = 0, tok_target = 0;
    bool tok_train = false;
    tok->add_option("--in", tok_in, "input text, one sentence per line");
    tok->add_option("--out", tok_out, "tokenised output file");
    tok->add_option("--model", tok_model, "tokeniser model file");
    tok->add_option("--type", tok_type, "model type: bpe|unigram");
    tok->add_flag("--train-bpe", tok_train, "train a BPE model on --in");
    tok->add_option("--vocab-size", tok_vocab, "BPE vocabulary size");
    tok->add_option("--model-out", tok_model_out, "where to write a trained/merged model");
    tok->add_option("--tokmix", tok_mix, "comma-separated unigram model files to merge");
    tok->add_option("--target-size", tok_target, "tokmix target vocabulary size");

    // ---- train-priors -------------------------------------------------
    auto* train = app.add_subcommand("train-priors", "train aligner priors on a tokenised bitext");
    std::string train_src, train_tgt, train_out;
    train->add_option("--src", train_src)->required();
    train->add_option("--tgt", train_tgt)->required();
    train->add_option("--priors-out", train_out, "priors output file")->required();
    AlignerConfig train_cfg;
    add_aligner_flags(train, train_cfg);

    // ---- align ---------------------------------------------------------
    auto* align = app.add_subcommand("align", "align a tokenised bitext with trained priors");
    std::string align_src, align_tgt, align_priors, align_out, align_scores;
    align->add_option("--src", align_src)->required();
    align->add_option("--tgt", align_tgt)->required();
    align->add_option("--priors", align_priors)->required();
    align->add_option("--links-out", align_out, "Pharaoh output")->required();
    align->add_option("--scores-out", align_scores, "per-sentence score output");
    AlignerConfig align_cfg;
    add_aligner_flags(align, align_cfg);

    // ---- symmetrise ----------------------------------------------------
    auto* sym = app.add_subcommand("symmetrise", "combine forward and reverse alignments");
    std::string sym_fwd, sym_rev, sym_src, sym_tgt, sym_out;
    sym->add_option("--fwd", sym_fwd)->required();
    sym->add_option("--rev", sym_rev)->required();
    sym->add_option("--src", sym_src, "tokenised source side (for sentence lengths)");
    sym->add_option("--tgt", sym_tgt, "tokenised target side (for sentence lengths)");
    sym->add_option("--links-out", sym_out)->required();

    // ---- score ----------------------------------------------------------
    auto* score = app.add_subcommand(
        "score", "JSD, one-to-one proportions and alignability for one pair");
    std::string score_src, score_tgt, score_train_src, score_train_tgt;
    std::string score_priors_fwd, score_priors_rev, score_out;
    std::string score_src_lang = "src", score_tgt_lang = "tgt";
    score->add_option("--src", score_src, "tokenised test corpus, source side")->required();
    score->add_option("--tgt", score_tgt, "tokenised test corpus, target side")->required();
    score->add_option("--train-src", score_train_src, "tokenised training corpus, source side");
    score->add_option("--train-tgt", score_train_tgt, "tokenised training corpus, target side");
    score->add_option("--priors-fwd", score_priors_fwd, "pre-trained forward priors");
    score->add_option("--priors-rev", score_priors_rev, "pre-trained reverse priors");
    score->add_option("--metrics-out", score_out)->required();
    score->add_option("--src-lang", score_src_lang);
    score->add_option("--tgt-lang", score_tgt_lang);
    AlignerConfig score_cfg;
    add_aligner_flags(score, score_cfg);

    // ---- embed-metrics ---------------------------------------------------
    auto* embed = app.add_subcommand("embed-metrics",
                                     "retrieval accuracy/F1 and average margin from embeddings");
    std::string emb_src, emb_tgt, emb_out;
    std::string emb_src_lang = "src", emb_tgt_lang = "tgt";
    bool emb_mean = false;
    embed->add_option("--src", emb_src)->required();
    embed->add_option("--tgt", emb_tgt)->required();
    embed->add_option("--metrics-out", emb_out)->required();
    embed->add_option("--src-lang", emb_src_lang);
    embed->add_option("--tgt-lang", emb_tgt_lang);
    embed->add_flag("--mean-distractor", emb_mean, "margin against the mean distractor");

    // ---- correlate --------------------------------------------------------
    auto* corr = app.add_subcommand("correlate", "rank correlations grouped by script/family");
    std::string corr_metrics, corr_downstream, corr_metadata, corr_embed, corr_tasks;
    bool corr_family = false, corr_exact = false, corr_datasize = false;
    corr->add_option("--metrics", corr_metrics, "metrics CSV")->required();
    corr->add_option("--downstream", corr_downstream, "downstream scores CSV");
    corr->add_option("--metadata", corr_metadata, "language metadata TSV")->required();
    corr->add_option("--embed", corr_embed, "embedding metrics CSV");
    corr->add_option("--tasks", corr_tasks, "comma-separated task names (default: all)");
    corr->add_flag("--family", corr_family, "add family groups over different-script pairs");
    corr->add_flag("--exact-p", corr_exact, "exact permutation p-values for n <= 8");
    corr->add_flag("--data-size", corr_datasize, "add English-source data-size correlations");

    // ---- plot ---------------------------------------------------------------
    auto* plot = app.add_subcommand("plot", "scatter plot with linear fit for one task/metric");
    std::string plot_metrics, plot_downstream, plot_metadata, plot_embed;
    std::string plot_task, plot_metric, plot_out;
    plot->add_option("--metrics", plot_metrics)->required();
    plot->add_option("--downstream", plot_downstream);
    plot->add_option("--embed", plot_embed);
    plot->add_option("--metadata", plot_metadata)->required();
    plot->add_option("--task", plot_task)->required();
    plot->add_option("--metric", plot_metric)->required();
    plot->add_option("--svg-out", plot_out)->required();

    // ---- pipeline -------------------------------------------------------------
    auto* pipe = app.add_subcommand("pipeline", "run the full pipeline from a config file");
    std::string pipe_config;
    pipe->add_option("config", pipe_config, "pipeline config (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    if (*tok) {
        if (tok_train) {
            if (tok_in.empty() || tok_model_out.empty() || tok_vocab == 0)
                fail("config.invalid", "--train-bpe needs --in, --model-out and --vocab-size");
            BpeModel model = train_bpe(raw_lines(tok_in), tok_vocab);
            save_bpe(model, tok_model_out);
            log_info("trained BPE model with " + std::to_string(model.merges.size()) + " merges");
        } else if (!tok_mix.empty()) {
            if (tok_model_out.empty() || tok_target == 0)
                fail("config.invalid", "--tokmix needs --model-out and --target-size");
            std::vector<UnigramModel> models;
            for (const auto& p : split(tok_mix, ','))
                if (!p.empty()) models.push_back(load_unigram(p));
            save_unigram(tokmix_merge(models, tok_target), tok_model_out);
        } else {
            if (tok_in.empty() || tok_out.empty() || tok_model.empty())
                fail("config.invalid", "tokenise needs --in, --out and --model");
            Tokeniser model = load_model(tok_type, tok_model);
            save_tokenised_corpus(tokenise_corpus(raw_lines(tok_in), model), tok_out);
        }
        return 0;
    }

    if (*train) {
        train_cfg.seed = global.seed;
        PriorSet priors = train_priors(load_tokenised_corpus(train_src),
                                       load_tokenised_corpus(train_tgt), train_cfg);
        save_priors(priors, train_out);
        return 0;
    }

    if (*align) {
        align_cfg.seed = global.seed;
        DirectionalAlignment alignment =
            align_with_priors(load_tokenised_corpus(align_src), load_tokenised_corpus(align_tgt),
                              load_priors(align_priors), align_cfg);
        write_pharaoh(alignment, align_out);
        if (!align_scores.empty()) write_scores(alignment, align_scores);
        return 0;
    }

    if (*sym) {
        SymHeuristic heuristic = parse_heuristic(global.heuristic);
        auto to_directional = [](const std::vector<std::vector<std::pair<int, int>>>& links) {
            DirectionalAlignment a;
            a.sentences.resize(links.size());
            for (size_t s = 0; s < links.size(); ++s) a.sentences[s].links = links[s];
            return a;
        };
        DirectionalAlignment fwd = to_directional(read_pharaoh(sym_fwd));
        DirectionalAlignment rev = to_directional(read_pharaoh(sym_rev));
        std::vector<int> src_lens, tgt_lens;
        if (heuristic == SymHeuristic::gdfa) {
            if (sym_src.empty() || sym_tgt.empty())
                fail("config.invalid", "gdfa needs --src and --tgt for sentence lengths");
            for (const auto& s : load_tokenised_corpus(sym_src).sentences)
                src_lens.push_back(static_cast<int>(s.size()));
            for (const auto& s : load_tokenised_corpus(sym_tgt).sentences)
                tgt_lens.push_back(static_cast<int>(s.size()));
        }
        write_pharaoh(symmetrise(fwd, rev, src_lens, tgt_lens, heuristic), sym_out);
        return 0;
    }

    if (*score) {
        score_cfg.seed = global.seed;
        TokenisedCorpus src = load_tokenised_corpus(score_src, score_src_lang);
        TokenisedCorpus tgt = load_tokenised_corpus(score_tgt, score_tgt_lang);
        PriorSet priors_fwd, priors_rev;
        if (!score_priors_fwd.empty() && !score_priors_rev.empty()) {
            priors_fwd = load_priors(score_priors_fwd);
            priors_rev = load_priors(score_priors_rev);
        } else if (!score_train_src.empty() && !score_train_tgt.empty()) {
            TokenisedCorpus tsrc = load_tokenised_corpus(score_train_src, score_src_lang);
            TokenisedCorpus ttgt = load_tokenised_corpus(score_train_tgt, score_tgt_lang);
            priors_fwd = train_priors(tsrc, ttgt, score_cfg);
            priors_rev = train_priors(ttgt, tsrc, score_cfg);
        } else {
            fail("config.invalid",
                 "score needs either --priors-fwd/--priors-rev or --train-src/--train-tgt");
        }
        DirectionalAlignment fwd = align_with_priors(src, tgt, priors_fwd, score_cfg);
        DirectionalAlignment rev = align_with_priors(tgt, src, priors_rev, score_cfg);
        std::vector<int> src_lens, tgt_lens;
        for (const auto& s : src.sentences) src_lens.push_back(static_cast<int>(s.size()));
        for (const auto& s : tgt.sentences) tgt_lens.push_back(static_cast<int>(s.size()));
        SymmetrisedAlignment symmetrised =
            symmetrise(fwd, rev, src_lens, tgt_lens, parse_heuristic(global.heuristic));

        PairMetrics m;
        m.src = score_src_lang;
        m.tgt = score_tgt_lang;
        m.jsd = jsd(token_distribution(src), token_distribution(tgt));
        auto [one_fwd, one_rev] = one_to_one_proportion(symmetrised, src, tgt);
        m.one_to_one_fwd = one_fwd;
        m.one_to_one_rev = one_rev;
        m.alignability = alignability_score(fwd, rev);
        write_file_atomic(score_out, render_metrics_csv({m}, global.seed));
        return 0;
    }

    if (*embed) {
        EmbeddingMatrix src = load_embeddings(emb_src, emb_src_lang);
        EmbeddingMatrix tgt = load_embeddings(emb_tgt, emb_tgt_lang);
        RetrievalScores scores = retrieval_scores(src, tgt);
        EmbedPairMetrics fwd{emb_src_lang, emb_tgt_lang,           scores.acc_fwd, scores.acc_rev,
                             scores.f1,    average_margin(src, tgt, emb_mean), src.rows.size()};
        EmbedPairMetrics rev{emb_tgt_lang, emb_src_lang,           scores.acc_rev, scores.acc_fwd,
                             scores.f1,    average_margin(tgt, src, emb_mean), src.rows.size()};
        write_file_atomic(emb_out, render_embedding_csv({fwd, rev}, global.seed));
        return 0;
    }

    if (*corr || *plot) {
        const bool plotting = static_cast<bool>(*plot);
        std::string metrics_path = plotting ? plot_metrics : corr_metrics;
        std::string downstream_path = plotting ? plot_downstream : corr_downstream;
        std::string metadata_path = plotting ? plot_metadata : corr_metadata;
        std::string embed_path = plotting ? plot_embed : corr_embed;

        MetadataTable metadata = load_language_metadata(metadata_path);
        std::vector<PairMetrics> metric_rows = parse_metrics_csv(read_file(metrics_path));
        std::vector<DownstreamRecord> downstream;
        if (!downstream_path.empty()) downstream = load_downstream_csv(downstream_path);
        std::map<std::pair<std::string, std::string>, std::map<std::string, double>> embed_map;
        if (!embed_path.empty()) {
            for (const auto& e : parse_embedding_csv(read_file(embed_path))) {
                auto& m = embed_map[{e.src, e.tgt}];
                m["acc_fwd"] = e.acc_fwd;
                m["acc_rev"] = e.acc_rev;
                m["f1"] = e.f1;
                m["avg_margin"] = e.avg_margin;
            }
        }
        std::vector<PairRecord> records =
            build_pair_records(metric_rows, downstream, metadata, embed_map);

        if (plotting) {
            std::vector<ScatterPoint> points;
            std::vector<std::pair<double, double>> xy;
            for (const auto& r : records) {
                std::optional<double> x = value_of(r, plot_metric);
                std::optional<double> y = value_of(r, plot_task);
                if (!x || !y) continue;
                points.push_back({*x, *y, r.groups.same_script});
                xy.emplace_back(*x, *y);
            }
            if (points.empty())
                fail("data.empty", "no pairs carry both " + plot_task + " and " + plot_metric);
            std::optional<std::pair<double, double>> fit;
            try {
                fit = linear_fit(xy);
            } catch (const Error&) {
            }
            write_file_atomic(plot_out,
                              render_scatter_svg(points, fit, plot_metric, plot_task,
                                                 "seed=" + std::to_string(global.seed)));
            return 0;
        }

        std::vector<std::string> tasks;
        if (!corr_tasks.empty()) {
            for (const auto& t : split(corr_tasks, ','))
                if (!t.empty()) tasks.push_back(t);
        } else {
            std::set<std::string> names;
            for (const auto& d : downstream) names.insert(d.task);
            if (!embed_map.empty()) {
                names.insert("f1");
                names.insert("avg_margin");
            }
            tasks.assign(names.begin(), names.end());
        }
        const std::vector<std::string> metric_names = {"jsd", "one_to_one_fwd",
                                                       "one_to_one_rev", "alignability"};
        std::vector<CorrelationRow> rows;
        for (const auto& task : tasks) {
            auto r = correlate_by_group(records, task, metric_names, corr_family, corr_exact);
            rows.insert(rows.end(), r.begin(), r.end());
        }
        if (corr_datasize) {
            for (const auto& name : tasks) rows.push_back(data_size_correlation(records, name, metadata));
        }
        std::string out_dir = global.out_dir.empty() ? "." : global.out_dir;
        std::string meta_line = "#seed=" + std::to_string(global.seed) + "\n";
        write_file_atomic(out_dir + "/correlations.csv",
                          meta_line + render_correlation_table(rows));
        write_file_atomic(out_dir + "/correlations.txt",
                          meta_line + render_correlation_text(rows));
        std::cout << render_correlation_text(rows);
        return 0;
    }

    if (*pipe) {
        PipelineConfig config = load_pipeline_config(pipe_config);
        if (app.count("--seed")) config.seed = global.seed;
        if (app.count("--out")) config.out_dir = global.out_dir;
        if (app.count("--threads")) config.threads = global.threads;
        if (app.count("--heuristic")) config.heuristic = parse_heuristic(global.heuristic);
        size_t n = run_pipeline(config);
        std::cout << "pipeline complete: " << n << " pair(s), report in " << config.out_dir
                  << "\n";
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.category() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
}
