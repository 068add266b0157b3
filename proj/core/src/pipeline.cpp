#include "alignability/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "alignability/analysis.hpp"
#include "alignability/corpus.hpp"
#include "alignability/embedalign.hpp"
#include "alignability/error.hpp"
#include "alignability/log.hpp"
#include "alignability/metrics.hpp"
#include "alignability/util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace alignability {

namespace {

std::string resolve(const fs::path& base, const std::string& p) {
    if (p.empty()) return p;
    fs::path path(p);
    if (path.is_absolute()) return p;
    return (base / path).lexically_normal().string();
}

std::string sanitise_filename(const std::string& name) {
    std::string out;
    for (char c : name)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return out;
}

TokenisedCorpus tokenise_side(const std::vector<std::string>& lines, const TokeniserSpec& spec,
                              const Tokeniser* model, const std::string& lang) {
    if (spec.type == TokeniserSpec::Type::none) return whitespace_tokenise(lines, lang);
    return tokenise_corpus(lines, *model, lang);
}

std::vector<std::string> side_lines(const ParallelCorpus& corpus, bool src) {
    std::vector<std::string> out;
    out.reserve(corpus.pairs.size());
    for (const auto& p : corpus.pairs) out.push_back(src ? p.src : p.tgt);
    return out;
}

void cap_sentences(TokenisedCorpus& corpus, std::optional<size_t> max_tokens) {
    if (!max_tokens) return;
    for (auto& sent : corpus.sentences)
        if (sent.size() > *max_tokens) sent.resize(*max_tokens);
}

struct PairResult {
    PairMetrics metrics;
    std::optional<EmbedPairMetrics> embed_fwd;
    std::optional<EmbedPairMetrics> embed_rev;
};

// hash of everything that determines a pair's artifacts
uint64_t pair_input_hash(const PipelineConfig& cfg, const PairSpec& pair) {
    std::ostringstream meta;
    const AlignerConfig& a = cfg.aligner;
    meta << "v1|" << pair.src << '|' << pair.tgt << '|' << cfg.seed << '|'
         << heuristic_name(cfg.heuristic) << '|' << cfg.max_train_pairs << '|'
         << (cfg.max_test_pairs ? std::to_string(*cfg.max_test_pairs) : "-") << '|'
         << (cfg.max_sentence_tokens ? std::to_string(*cfg.max_sentence_tokens) : "-") << '|'
         << static_cast<int>(cfg.tokeniser.type) << '|' << a.use_hmm << '|'
         << format_double_exact(a.lexical_concentration) << '|'
         << format_double_exact(a.jump_concentration) << '|'
         << format_double_exact(a.null_prior) << '|' << a.max_jump << '|'
         << a.train_iterations_lexical << '|' << a.train_iterations_hmm << '|'
         << a.test_iterations;
    uint64_t h = fnv1a64(meta.str());
    for (const std::string& p :
         {pair.train_src, pair.train_tgt, pair.test_src, pair.test_tgt, pair.src_emb,
          pair.tgt_emb, cfg.tokeniser.model_path}) {
        if (p.empty()) {
            h = fnv1a64("|absent|", h);
            continue;
        }
        h = fnv1a64(read_file(p), h);
    }
    return h;
}

PairResult run_pair(const PipelineConfig& cfg, const PairSpec& pair, const Tokeniser* model,
                    const std::string& pair_dir) {
    std::string hash_hex;
    {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(pair_input_hash(cfg, pair)));
        hash_hex = buf;
    }
    const std::string hash_path = pair_dir + "/inputs.hash";
    const std::string metrics_path = pair_dir + "/pair_metrics.csv";
    const std::string embed_path = pair_dir + "/embed_metrics.csv";
    const bool wants_embed = !pair.src_emb.empty() && !pair.tgt_emb.empty();

    // resume: reuse artifacts when the recorded input hash matches
    std::error_code ec;
    if (fs::exists(hash_path, ec) && fs::exists(metrics_path, ec) &&
        (!wants_embed || fs::exists(embed_path, ec))) {
        std::string recorded = read_file(hash_path);
        if (!recorded.empty() && recorded.back() == '\n') recorded.pop_back();
        if (recorded == hash_hex) {
            log_info("pair " + pair.src + "-" + pair.tgt + ": artifacts up to date, skipped");
            PairResult result;
            std::vector<PairMetrics> rows = parse_metrics_csv(read_file(metrics_path));
            if (rows.size() != 1) fail("data.metrics-csv", metrics_path + ": expected one row");
            result.metrics = rows[0];
            if (wants_embed) {
                std::vector<EmbedPairMetrics> erows = parse_embedding_csv(read_file(embed_path));
                if (erows.size() != 2)
                    fail("data.embedding-csv", embed_path + ": expected two rows");
                result.embed_fwd = erows[0];
                result.embed_rev = erows[1];
            }
            return result;
        }
    }

    AlignerConfig acfg = cfg.aligner;
    acfg.seed = cfg.seed ^ fnv1a64(pair.src + "-" + pair.tgt);

    ParallelCorpus train = load_parallel_corpus(pair.train_src, pair.train_tgt,
                                                cfg.max_train_pairs ? std::optional<size_t>(
                                                                          cfg.max_train_pairs)
                                                                    : std::nullopt,
                                                pair.src, pair.tgt);
    ParallelCorpus test = load_parallel_corpus(pair.test_src, pair.test_tgt, cfg.max_test_pairs,
                                               pair.src, pair.tgt);

    TokenisedCorpus train_src = tokenise_side(side_lines(train, true), cfg.tokeniser, model, pair.src);
    TokenisedCorpus train_tgt = tokenise_side(side_lines(train, false), cfg.tokeniser, model, pair.tgt);
    TokenisedCorpus test_src = tokenise_side(side_lines(test, true), cfg.tokeniser, model, pair.src);
    TokenisedCorpus test_tgt = tokenise_side(side_lines(test, false), cfg.tokeniser, model, pair.tgt);
    cap_sentences(train_src, cfg.max_sentence_tokens);
    cap_sentences(train_tgt, cfg.max_sentence_tokens);

    PriorSet priors_fwd = train_priors(train_src, train_tgt, acfg);
    PriorSet priors_rev = train_priors(train_tgt, train_src, acfg);
    save_priors(priors_fwd, pair_dir + "/priors_fwd.txt");
    save_priors(priors_rev, pair_dir + "/priors_rev.txt");

    DirectionalAlignment fwd = align_with_priors(test_src, test_tgt, priors_fwd, acfg);
    DirectionalAlignment rev = align_with_priors(test_tgt, test_src, priors_rev, acfg);
    write_pharaoh(fwd, pair_dir + "/align_fwd.txt");
    write_scores(fwd, pair_dir + "/align_fwd_scores.txt");
    write_pharaoh(rev, pair_dir + "/align_rev.txt");
    write_scores(rev, pair_dir + "/align_rev_scores.txt");

    std::vector<int> src_lens, tgt_lens;
    for (const auto& s : test_src.sentences) src_lens.push_back(static_cast<int>(s.size()));
    for (const auto& s : test_tgt.sentences) tgt_lens.push_back(static_cast<int>(s.size()));
    SymmetrisedAlignment sym = symmetrise(fwd, rev, src_lens, tgt_lens, cfg.heuristic);
    write_pharaoh(sym, pair_dir + "/sym.txt");

    PairResult result;
    result.metrics.src = pair.src;
    result.metrics.tgt = pair.tgt;
    result.metrics.jsd = jsd(token_distribution(test_src), token_distribution(test_tgt));
    auto [one_fwd, one_rev] = one_to_one_proportion(sym, test_src, test_tgt);
    result.metrics.one_to_one_fwd = one_fwd;
    result.metrics.one_to_one_rev = one_rev;
    result.metrics.alignability = alignability_score(fwd, rev);
    write_file_atomic(metrics_path, render_metrics_csv({result.metrics}, cfg.seed));

    if (wants_embed) {
        EmbeddingMatrix src_emb = load_embeddings(pair.src_emb, pair.src);
        EmbeddingMatrix tgt_emb = load_embeddings(pair.tgt_emb, pair.tgt);
        RetrievalScores scores = retrieval_scores(src_emb, tgt_emb);
        EmbedPairMetrics efwd{pair.src,       pair.tgt, scores.acc_fwd,
                              scores.acc_rev, scores.f1, average_margin(src_emb, tgt_emb),
                              src_emb.rows.size()};
        EmbedPairMetrics erev{pair.tgt,       pair.src, scores.acc_rev,
                              scores.acc_fwd, scores.f1, average_margin(tgt_emb, src_emb),
                              src_emb.rows.size()};
        result.embed_fwd = efwd;
        result.embed_rev = erev;
        write_file_atomic(embed_path, render_embedding_csv({efwd, erev}, cfg.seed));
    }

    write_file_atomic(hash_path, hash_hex + "\n");
    return result;
}

}  // namespace

PipelineConfig load_pipeline_config(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        fail("config.parse", path + ": " + e.what());
    }
    const fs::path base = fs::path(path).parent_path();

    PipelineConfig cfg;
    try {
        cfg.seed = j.value("seed", 0ULL);
        cfg.out_dir = resolve(base, j.value("out_dir", ""));
        cfg.metadata_path = resolve(base, j.value("metadata", ""));
        cfg.downstream_path = resolve(base, j.value("downstream", ""));
        if (j.contains("heuristic")) cfg.heuristic = parse_heuristic(j["heuristic"]);
        cfg.threads = j.value("threads", 1);
        cfg.max_train_pairs = j.value("max_train_pairs", 300000ULL);
        if (j.contains("max_test_pairs") && !j["max_test_pairs"].is_null())
            cfg.max_test_pairs = j["max_test_pairs"].get<size_t>();
        if (j.contains("max_sentence_tokens") && !j["max_sentence_tokens"].is_null())
            cfg.max_sentence_tokens = j["max_sentence_tokens"].get<size_t>();
        cfg.include_family = j.value("include_family", true);
        cfg.exact_p = j.value("exact_p", false);
        if (j.contains("languages"))
            cfg.languages = j["languages"].get<std::vector<std::string>>();
        if (j.contains("tasks")) cfg.tasks = j["tasks"].get<std::vector<std::string>>();

        if (j.contains("tokeniser")) {
            const json& t = j["tokeniser"];
            std::string type = t.value("type", "none");
            if (type == "none")
                cfg.tokeniser.type = TokeniserSpec::Type::none;
            else if (type == "bpe")
                cfg.tokeniser.type = TokeniserSpec::Type::bpe;
            else if (type == "unigram")
                cfg.tokeniser.type = TokeniserSpec::Type::unigram;
            else
                fail("config.invalid", "unknown tokeniser type \"" + type + "\"");
            cfg.tokeniser.model_path = resolve(base, t.value("model", ""));
        }
        if (j.contains("aligner")) {
            const json& a = j["aligner"];
            AlignerConfig& ac = cfg.aligner;
            ac.use_hmm = a.value("use_hmm", ac.use_hmm);
            ac.lexical_concentration = a.value("lexical_concentration", ac.lexical_concentration);
            ac.jump_concentration = a.value("jump_concentration", ac.jump_concentration);
            ac.null_prior = a.value("null_prior", ac.null_prior);
            ac.max_jump = a.value("max_jump", ac.max_jump);
            ac.train_iterations_lexical =
                a.value("train_iterations_lexical", ac.train_iterations_lexical);
            ac.train_iterations_hmm = a.value("train_iterations_hmm", ac.train_iterations_hmm);
            ac.test_iterations = a.value("test_iterations", ac.test_iterations);
        }
        for (const json& p : j.value("pairs", json::array())) {
            PairSpec spec;
            spec.src = p.value("src", "");
            spec.tgt = p.value("tgt", "");
            spec.train_src = resolve(base, p.value("train_src", ""));
            spec.train_tgt = resolve(base, p.value("train_tgt", ""));
            spec.test_src = resolve(base, p.value("test_src", ""));
            spec.test_tgt = resolve(base, p.value("test_tgt", ""));
            spec.src_emb = resolve(base, p.value("src_emb", ""));
            spec.tgt_emb = resolve(base, p.value("tgt_emb", ""));
            cfg.pairs.push_back(std::move(spec));
        }
    } catch (const json::exception& e) {
        fail("config.parse", path + ": " + e.what());
    }
    return cfg;
}

std::vector<std::string> validate_pipeline_config(const PipelineConfig& cfg) {
    std::vector<std::string> problems;
    auto missing_path = [&](const std::string& p, const std::string& what) {
        if (p.empty())
            problems.push_back(what + " not set");
        else if (!fs::exists(p))
            problems.push_back(what + " does not exist: " + p + " [config.path-missing]");
    };

    if (cfg.out_dir.empty()) problems.push_back("out_dir not set");
    missing_path(cfg.metadata_path, "metadata");
    if (!cfg.downstream_path.empty() && !fs::exists(cfg.downstream_path))
        problems.push_back("downstream does not exist: " + cfg.downstream_path +
                           " [config.path-missing]");
    if (cfg.tokeniser.type != TokeniserSpec::Type::none)
        missing_path(cfg.tokeniser.model_path, "tokeniser model");
    if (cfg.pairs.empty()) problems.push_back("no pairs configured");
    if (cfg.threads < 1) problems.push_back("threads must be >= 1");

    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& pair : cfg.pairs) {
        std::string label = "pair " + pair.src + "-" + pair.tgt;
        if (pair.src.empty() || pair.tgt.empty()) problems.push_back(label + ": missing src/tgt code");
        if (!seen.insert({pair.src, pair.tgt}).second)
            problems.push_back(label + ": duplicate pair");
        missing_path(pair.train_src, label + " train_src");
        missing_path(pair.train_tgt, label + " train_tgt");
        missing_path(pair.test_src, label + " test_src");
        missing_path(pair.test_tgt, label + " test_tgt");
        if (pair.src_emb.empty() != pair.tgt_emb.empty())
            problems.push_back(label + ": embeddings must be given for both sides");
        if (!pair.src_emb.empty()) missing_path(pair.src_emb, label + " src_emb");
        if (!pair.tgt_emb.empty()) missing_path(pair.tgt_emb, label + " tgt_emb");
        if (!cfg.languages.empty()) {
            for (const std::string& code : {pair.src, pair.tgt})
                if (std::find(cfg.languages.begin(), cfg.languages.end(), code) ==
                    cfg.languages.end())
                    problems.push_back(label + ": language " + code + " not in languages list");
        }
    }
    try {
        validate(cfg.aligner);
    } catch (const Error& e) {
        problems.push_back(std::string("aligner config: ") + e.what());
    }
    return problems;
}

size_t run_pipeline(const PipelineConfig& config) {
    std::vector<std::string> problems = validate_pipeline_config(config);
    if (!problems.empty()) {
        std::string joined;
        for (size_t i = 0; i < problems.size(); ++i) {
            if (i) joined += "; ";
            joined += problems[i];
        }
        bool path_missing = joined.find("[config.path-missing]") != std::string::npos;
        fail(path_missing ? "config.path-missing" : "config.invalid", joined);
    }

    MetadataTable metadata = load_language_metadata(config.metadata_path);

    Tokeniser model;
    const Tokeniser* model_ptr = nullptr;
    if (config.tokeniser.type == TokeniserSpec::Type::bpe) {
        model = load_bpe(config.tokeniser.model_path);
        model_ptr = &model;
    } else if (config.tokeniser.type == TokeniserSpec::Type::unigram) {
        model = load_unigram(config.tokeniser.model_path);
        model_ptr = &model;
    }

    // deterministic work order and report order
    std::vector<const PairSpec*> pairs;
    for (const auto& p : config.pairs) pairs.push_back(&p);
    std::sort(pairs.begin(), pairs.end(), [](const PairSpec* a, const PairSpec* b) {
        return std::tie(a->src, a->tgt) < std::tie(b->src, b->tgt);
    });

    std::vector<PairResult> results(pairs.size());
    std::vector<std::string> failures;
    std::mutex failures_mutex;
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            size_t k = next.fetch_add(1);
            if (k >= pairs.size()) break;
            const PairSpec& pair = *pairs[k];
            std::string pair_dir =
                config.out_dir + "/pairs/" + sanitise_filename(pair.src + "-" + pair.tgt);
            fs::create_directories(pair_dir);
            try {
                results[k] = run_pair(config, pair, model_ptr, pair_dir);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failures_mutex);
                failures.push_back("pair " + pair.src + "-" + pair.tgt + ": " + e.what());
            }
        }
    };
    size_t thread_count = std::min<size_t>(std::max(config.threads, 1), pairs.size());
    if (thread_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (size_t t = 0; t < thread_count; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    if (!failures.empty()) {
        std::sort(failures.begin(), failures.end());
        std::string joined;
        for (size_t i = 0; i < failures.size(); ++i) {
            if (i) joined += "; ";
            joined += failures[i];
        }
        fail("pipeline.pair-failed", joined);
    }

    // report bundle; correlations are computed from the serialised (rounded)
    // values so fresh and resumed runs agree byte for byte
    std::vector<PairMetrics> metric_rows;
    std::vector<EmbedPairMetrics> embed_rows;
    for (const auto& r : results) {
        metric_rows.push_back(r.metrics);
        if (r.embed_fwd) embed_rows.push_back(*r.embed_fwd);
        if (r.embed_rev) embed_rows.push_back(*r.embed_rev);
    }
    std::string metrics_csv = render_metrics_csv(metric_rows, config.seed);
    write_file_atomic(config.out_dir + "/metrics.csv", metrics_csv);
    metric_rows = parse_metrics_csv(metrics_csv);

    std::map<std::pair<std::string, std::string>, std::map<std::string, double>> embed_map;
    if (!embed_rows.empty()) {
        std::string embed_csv = render_embedding_csv(embed_rows, config.seed);
        write_file_atomic(config.out_dir + "/embed_metrics.csv", embed_csv);
        for (const auto& e : parse_embedding_csv(embed_csv)) {
            auto& m = embed_map[{e.src, e.tgt}];
            m["acc_fwd"] = e.acc_fwd;
            m["acc_rev"] = e.acc_rev;
            m["f1"] = e.f1;
            m["avg_margin"] = e.avg_margin;
        }
    }

    std::vector<DownstreamRecord> downstream;
    if (!config.downstream_path.empty())
        downstream = load_downstream_csv(config.downstream_path);

    std::vector<PairRecord> records = build_pair_records(metric_rows, downstream, metadata,
                                                         embed_map);

    std::vector<std::string> tasks = config.tasks;
    if (tasks.empty()) {
        std::set<std::string> names;
        for (const auto& d : downstream) names.insert(d.task);
        if (!embed_map.empty()) {
            names.insert("f1");
            names.insert("avg_margin");
        }
        tasks.assign(names.begin(), names.end());
    }
    const std::vector<std::string> metric_names = {"jsd", "one_to_one_fwd", "one_to_one_rev",
                                                   "alignability"};

    std::vector<CorrelationRow> corr_rows;
    for (const auto& task : tasks) {
        std::vector<CorrelationRow> rows = correlate_by_group(records, task, metric_names,
                                                              config.include_family,
                                                              config.exact_p);
        corr_rows.insert(corr_rows.end(), rows.begin(), rows.end());
    }
    if (!corr_rows.empty() || !tasks.empty()) {
        std::string meta_line = "#seed=" + std::to_string(config.seed) + "\n";
        write_file_atomic(config.out_dir + "/correlations.csv",
                          meta_line + render_correlation_table(corr_rows));
        write_file_atomic(config.out_dir + "/correlations.txt",
                          meta_line + render_correlation_text(corr_rows));
    }

    // data-size confound rows (English-source pairs), when computable
    std::vector<CorrelationRow> size_rows;
    for (const auto& name : tasks) {
        try {
            size_rows.push_back(data_size_correlation(records, name, metadata));
        } catch (const Error& e) {
            log_warn("data-size correlation for " + name + ": " + e.what());
        }
    }
    for (const auto& name : metric_names) {
        try {
            size_rows.push_back(data_size_correlation(records, name, metadata));
        } catch (const Error& e) {
            log_warn("data-size correlation for " + name + ": " + e.what());
        }
    }
    if (!size_rows.empty())
        write_file_atomic(config.out_dir + "/data_size.csv",
                          "#seed=" + std::to_string(config.seed) + "\n" +
                              render_correlation_table(size_rows));

    // scatter plots, one per (task, metric)
    for (const auto& task : tasks) {
        for (const auto& metric : metric_names) {
            std::vector<ScatterPoint> points;
            std::vector<std::pair<double, double>> xy;
            for (const auto& r : records) {
                std::optional<double> x = value_of(r, metric);
                std::optional<double> y = value_of(r, task);
                if (!x || !y) continue;
                points.push_back({*x, *y, r.groups.same_script});
                xy.emplace_back(*x, *y);
            }
            if (points.empty()) continue;
            std::optional<std::pair<double, double>> fit;
            try {
                fit = linear_fit(xy);
            } catch (const Error&) {
            }
            std::string svg = render_scatter_svg(points, fit, metric, task,
                                                 "seed=" + std::to_string(config.seed));
            write_file_atomic(config.out_dir + "/plots/" + sanitise_filename(task) + "_" +
                                  sanitise_filename(metric) + ".svg",
                              svg);
        }
    }
    return pairs.size();
}

}  // namespace alignability
