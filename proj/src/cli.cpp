#include "lxtopic/cli.hpp"

#include "lxtopic/artifacts.hpp"
#include "lxtopic/calibrate.hpp"
#include "lxtopic/checkpoint.hpp"
#include "lxtopic/corpus.hpp"
#include "lxtopic/embed.hpp"
#include "lxtopic/error.hpp"
#include "lxtopic/llm_client.hpp"
#include "lxtopic/metrics.hpp"
#include "lxtopic/model.hpp"
#include "lxtopic/refine.hpp"
#include "lxtopic/select.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <memory>
#include <ostream>

namespace lxtopic {

namespace {

using ojson = nlohmann::ordered_json;

struct Settings {
    // input
    std::string input;
    std::string text_column;
    std::string label_column;
    std::size_t max_input_bytes = kDefaultMaxInputBytes;
    std::size_t min_df = 2;
    double max_df = 0.95;
    std::string stopwords_file;
    std::size_t max_vocab = 0; // 0: no cap
    std::string doc_embeddings;
    std::string word_embeddings;
    int embed_dim = kDefaultEmbedDim;
    std::size_t ppmi_window = kDefaultPpmiWindow;
    // model
    int k = 0;
    int epochs = ModelConfig{}.epochs;
    int warmup = ModelConfig{}.warmup_epochs;
    double lr = ModelConfig{}.lr;
    double eps_dt = ModelConfig{}.eps_dt;
    double eps_tw = ModelConfig{}.eps_tw;
    std::uint64_t seed = 0;
    std::size_t top_m = kDefaultTopM;
    // refinement
    std::string llm_endpoint;
    std::string llm_model = LlmClientConfig{}.model;
    bool no_refine = false;
    double lambda = RefineConfig{}.lambda;
    int refine_interval = RefineConfig{}.interval_epochs;
    std::size_t llm_concurrency = RefineConfig{}.concurrency_limit;
    // output
    bool no_calibrate = false;
    int precision = 3;
    std::string output_dir = ".";
    bool quiet = false;
    // sweep
    int k_min = 10;
    int k_max = 50;
    int k_step = 10;
    std::string k_grid;
    // eval
    std::string model_path;
    std::string train;
    std::string test;
    std::string train_doc_embeddings;
    std::string test_doc_embeddings;
    std::size_t knn = 5;
    std::string output;
};

void add_input_options(CLI::App& sub, Settings& s) {
    sub.add_option("--input", s.input, "CSV file with one document per row")->required();
    sub.add_option("--text-column", s.text_column, "column holding the document text")->required();
    sub.add_option("--label-column", s.label_column, "optional ground-truth label column");
    sub.add_option("--max-input-bytes", s.max_input_bytes, "refuse inputs larger than this")->capture_default_str();
    sub.add_option("--min-df", s.min_df, "minimum document frequency")->capture_default_str()->check(CLI::PositiveNumber);
    sub.add_option("--max-df", s.max_df, "maximum document frequency ratio")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    sub.add_option("--stopwords-file", s.stopwords_file, "one stopword per line, replaces the bundled list");
    sub.add_option("--max-vocab", s.max_vocab, "keep only the most frequent words (0: no cap)")->capture_default_str();
    sub.add_option("--doc-embeddings", s.doc_embeddings, "headerless CSV, one row per document");
    sub.add_option("--word-embeddings", s.word_embeddings, "headerless CSV, one row per vocabulary word");
    sub.add_option("--embed-dim", s.embed_dim, "embedding dimension for LSA and PPMI")->capture_default_str()->check(CLI::PositiveNumber);
    sub.add_option("--ppmi-window", s.ppmi_window, "co-occurrence window")->capture_default_str()->check(CLI::PositiveNumber);
}

void add_model_options(CLI::App& sub, Settings& s) {
    sub.add_option("--epochs", s.epochs)->capture_default_str()->check(CLI::PositiveNumber);
    sub.add_option("--warmup", s.warmup, "epochs before refinement starts")->capture_default_str()->check(CLI::NonNegativeNumber);
    sub.add_option("--lr", s.lr, "Adam step size")->capture_default_str()->check(CLI::PositiveNumber);
    sub.add_option("--eps-dt", s.eps_dt, "document-topic entropic regularization")->capture_default_str()->check(CLI::PositiveNumber);
    sub.add_option("--eps-tw", s.eps_tw, "topic-word entropic regularization")->capture_default_str()->check(CLI::PositiveNumber);
    sub.add_option("--seed", s.seed)->capture_default_str();
    sub.add_option("--top-m", s.top_m, "top words per topic in outputs and prompts")->capture_default_str()->check(CLI::PositiveNumber);
    sub.add_option("--llm-endpoint", s.llm_endpoint, "chat-completion URL; without it refinement uses the offline stub");
    sub.add_option("--llm-model", s.llm_model)->capture_default_str();
    sub.add_flag("--no-refine", s.no_refine, "disable refinement and label topics from their top words");
    sub.add_option("--lambda", s.lambda, "refinement loss weight")->capture_default_str()->check(CLI::NonNegativeNumber);
    sub.add_option("--refine-interval", s.refine_interval, "epochs between refinement refreshes")->capture_default_str()->check(CLI::PositiveNumber);
    sub.add_option("--llm-concurrency", s.llm_concurrency, "maximum requests in flight")->capture_default_str()->check(CLI::PositiveNumber);
}

void add_output_options(CLI::App& sub, Settings& s) {
    sub.add_flag("--no-calibrate", s.no_calibrate, "write raw proportions");
    sub.add_option("--precision", s.precision, "decimals in proportions.csv")->capture_default_str()->check(CLI::Range(0, 17));
    sub.add_option("--output-dir", s.output_dir)->capture_default_str();
    sub.add_flag("--quiet", s.quiet, "suppress progress lines");
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

std::string out_path(const Settings& s, const char* name) { return (std::filesystem::path(s.output_dir) / name).string(); }

PreprocessConfig preprocess_config(const Settings& s) {
    PreprocessConfig cfg;
    cfg.min_df = s.min_df;
    cfg.max_df_ratio = s.max_df;
    if (!s.stopwords_file.empty()) cfg.stopwords = load_stopwords_file(s.stopwords_file);
    if (s.max_vocab > 0) cfg.max_vocab = s.max_vocab;
    return cfg;
}

ModelConfig model_config(const Settings& s, int k) {
    ModelConfig cfg;
    cfg.num_topics = k;
    cfg.epochs = s.epochs;
    cfg.warmup_epochs = s.warmup;
    cfg.lr = s.lr;
    cfg.eps_dt = s.eps_dt;
    cfg.eps_tw = s.eps_tw;
    cfg.seed = s.seed;
    cfg.validate();
    return cfg;
}

/// Loaded data plus embeddings, shared by fit and sweep.
struct Prepared {
    RawCorpus raw;
    PreprocessConfig preprocess;
    Corpus corpus;
    DocEmbeddings docs;
    WordEmbeddings words;
    std::optional<LsaProjection> lsa;
    int dim = 0;
};

Prepared prepare(const Settings& s, std::ostream& err) {
    Prepared p;
    const std::optional<std::string> label_col =
        s.label_column.empty() ? std::nullopt : std::optional<std::string>(s.label_column);
    p.raw = load_csv(s.input, s.text_column, label_col, s.max_input_bytes);
    p.preprocess = preprocess_config(s);
    p.corpus = preprocess(p.raw, p.preprocess);
    const auto n = static_cast<int>(p.corpus.num_docs());
    const auto v = static_cast<int>(p.corpus.vocab_size());
    if (!s.quiet) {
        const StatsReport st = corpus_stats(p.corpus);
        err << "corpus: " << st.num_docs << " documents, " << st.vocab_size << " words, " << st.num_empty_docs
            << " empty after filtering\n";
    }

    if (!s.doc_embeddings.empty()) p.docs = load_doc_embeddings(s.doc_embeddings, p.corpus.num_docs());
    if (!s.word_embeddings.empty()) p.words = load_word_embeddings(s.word_embeddings, p.corpus.vocab_size());
    if (!s.doc_embeddings.empty() && !s.word_embeddings.empty() && p.docs.dim() != p.words.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "embed",
                    "document embeddings have " + std::to_string(p.docs.dim()) + " columns, word embeddings " +
                        std::to_string(p.words.dim()));
    }

    int h = s.embed_dim;
    if (!s.doc_embeddings.empty()) {
        h = static_cast<int>(p.docs.dim());
    } else if (!s.word_embeddings.empty()) {
        h = static_cast<int>(p.words.dim());
    } else if (h > std::min(n, v)) {
        h = std::min(n, v);
        if (!s.quiet) err << "warning: --embed-dim " << s.embed_dim << " exceeds min(N, V); using " << h << "\n";
    }
    if (s.doc_embeddings.empty()) {
        p.lsa = fit_lsa(p.corpus, h);
        p.docs = project_documents(*p.lsa, p.corpus);
    }
    if (s.word_embeddings.empty()) p.words = embed_words_ppmi(p.corpus, h, s.ppmi_window);
    p.dim = h;
    return p;
}

/// Owns whichever refiner the flags select; null when refinement is off.
struct RefinerChoice {
    std::unique_ptr<LlmClient> client;
    std::unique_ptr<Refiner> refiner;
};

RefinerChoice choose_refiner(const Settings& s) {
    RefinerChoice c;
    if (s.no_refine) return c;
    if (!s.llm_endpoint.empty()) {
        LlmClientConfig cfg;
        cfg.endpoint = s.llm_endpoint;
        cfg.model = s.llm_model;
        c.client = std::make_unique<LlmClient>(cfg);
        c.refiner = std::make_unique<LlmRefiner>(*c.client, s.top_m);
    } else {
        c.refiner = std::make_unique<StubRefiner>();
    }
    return c;
}

FitOptions fit_options(const Settings& s, Refiner* refiner, std::ostream& err) {
    FitOptions o;
    o.refiner = refiner;
    o.refine.lambda = s.lambda;
    o.refine.interval_epochs = s.refine_interval;
    o.refine.concurrency_limit = s.llm_concurrency;
    o.refine.top_m = s.top_m;
    o.refine.validate();
    if (!s.quiet) {
        const int every = std::max(1, s.epochs / 10);
        const int total = s.epochs;
        o.progress = [&err, every, total](int epoch, double loss) {
            if ((epoch + 1) % every == 0 || epoch + 1 == total) {
                char line[96];
                std::snprintf(line, sizeof line, "fit: epoch %d/%d loss=%.6f\n", epoch + 1, total, loss);
                err << line;
            }
        };
    }
    return o;
}

ojson settings_json(const Settings& s, const std::string& subcommand, int dim) {
    ojson j;
    j["subcommand"] = subcommand;
    j["input"] = s.input;
    j["text_column"] = s.text_column;
    j["label_column"] = s.label_column;
    j["max_input_bytes"] = s.max_input_bytes;
    j["min_df"] = s.min_df;
    j["max_df"] = s.max_df;
    j["stopwords"] = s.stopwords_file.empty() ? std::string("bundled:") + PreprocessConfig::stopwords_version()
                                              : s.stopwords_file;
    j["max_vocab"] = s.max_vocab;
    j["doc_embeddings"] = s.doc_embeddings.empty() ? "lsa" : s.doc_embeddings;
    j["word_embeddings"] = s.word_embeddings.empty() ? "ppmi" : s.word_embeddings;
    j["embed_dim"] = dim;
    j["ppmi_window"] = s.ppmi_window;
    j["epochs"] = s.epochs;
    j["warmup"] = s.warmup;
    j["lr"] = s.lr;
    j["eps_dt"] = s.eps_dt;
    j["eps_tw"] = s.eps_tw;
    j["top_m"] = s.top_m;
    j["refiner"] = s.no_refine ? "none" : (s.llm_endpoint.empty() ? "stub" : "llm");
    j["llm_endpoint"] = s.llm_endpoint;
    j["llm_model"] = s.llm_model;
    j["lambda"] = s.lambda;
    j["refine_interval"] = s.refine_interval;
    j["llm_concurrency"] = s.llm_concurrency;
    j["calibrate"] = !s.no_calibrate;
    j["precision"] = s.precision;
    return j;
}

void write_outputs(const Settings& s, const Prepared& p, const FitResult& result, const KSweepReport& report,
                   const std::string& subcommand, std::ostream& err) {
    std::filesystem::create_directories(s.output_dir);
    const Matrix shown = s.no_calibrate ? result.theta : calibrate(result.theta).matrix;
    std::vector<std::string> texts;
    texts.reserve(p.raw.size());
    for (const auto& r : p.raw.records) texts.push_back(r.text);

    write_proportions_csv(shown, result.labels, &texts, out_path(s, kProportionsFile), s.precision);
    write_topics_jsonl(result.beta, p.corpus.vocab, result.labels, result.descriptions, result.refined,
                       out_path(s, kTopicsFile), s.top_m);
    write_k_report_txt(report, out_path(s, kKReportFile));

    Checkpoint ckpt;
    ckpt.config = result.model.config;
    ckpt.preprocess = p.preprocess;
    ckpt.vocab = p.corpus.vocab;
    ckpt.lsa = p.lsa;
    ckpt.model = result.model;
    ckpt.labels = result.labels;
    ckpt.descriptions = result.descriptions;
    save_checkpoint(ckpt, out_path(s, kModelFile));

    const StatsReport st = corpus_stats(p.corpus);
    ojson manifest;
    manifest["tool"] = "lxtopic";
    manifest["version"] = LXTOPIC_VERSION;
    manifest["timestamp"] = utc_timestamp();
    manifest["seed"] = s.seed;
    manifest["num_topics"] = result.model.config.num_topics;
    manifest["config"] = settings_json(s, subcommand, p.dim);
    manifest["corpus"] = {{"num_docs", st.num_docs},
                          {"vocab_size", st.vocab_size},
                          {"mean_tokens", st.mean_tokens},
                          {"raw_mean_tokens", st.raw_mean_tokens},
                          {"num_categories", st.num_categories},
                          {"num_empty_docs", st.num_empty_docs}};
    manifest["training"] = {{"initial_recon", result.initial_recon}, {"final_recon", result.final_recon}};
    ojson sweep = ojson::array();
    for (const auto& row : report.rows) {
        ojson r = {{"k", row.k}, {"wall_seconds", row.wall_seconds}};
        if (row.error) r["error"] = *row.error;
        sweep.push_back(std::move(r));
    }
    manifest["sweep"] = std::move(sweep);
    manifest["outputs"] = {kProportionsFile, kTopicsFile, kKReportFile, kModelFile};
    write_json(manifest, out_path(s, kManifestFile));
    if (!s.quiet) err << "wrote outputs to " << s.output_dir << "\n";
}

int cmd_fit(const Settings& s, std::ostream& out, std::ostream& err) {
    const Prepared p = prepare(s, err);
    const ModelConfig cfg = model_config(s, s.k);
    RefinerChoice refiner = choose_refiner(s);
    const auto start = std::chrono::steady_clock::now();
    const FitResult result = fit(p.corpus, p.docs, p.words, cfg, fit_options(s, refiner.refiner.get(), err));

    KSweepReport report;
    KSweepRow row;
    row.k = s.k;
    const MetricsReport m = topic_metrics(all_top_words(result.beta, p.corpus.vocab, kDefaultTopM), p.corpus);
    row.tc = m.tc_mean;
    row.td = m.td;
    row.tq = m.tq;
    row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.rows.push_back(row);
    report.chosen_k = s.k;

    write_outputs(s, p, result, report, "fit", err);
    out << render_k_report(report);
    return kExitOk;
}

int cmd_sweep(const Settings& s, std::ostream& out, std::ostream& err) {
    const std::vector<int> grid = s.k_grid.empty() ? k_range(s.k_min, s.k_max, s.k_step) : parse_k_grid(s.k_grid);
    const Prepared p = prepare(s, err);
    RefinerChoice refiner = choose_refiner(s);
    FitOptions options = fit_options(s, refiner.refiner.get(), err);
    options.progress = nullptr;
    const ModelConfig cfg_template = model_config(s, std::max(2, grid.front()));

    auto on_row = [&](const KSweepRow& row) {
        if (s.quiet) return;
        char line[160];
        if (row.error) {
            std::snprintf(line, sizeof line, "sweep: K=%d failed (%.1fs): ", row.k, row.wall_seconds);
            err << line << *row.error << "\n";
        } else {
            std::snprintf(line, sizeof line, "sweep: K=%d TC=%.4f TD=%.4f TQ=%.4f (%.1fs)\n", row.k, row.tc, row.td, row.tq,
                          row.wall_seconds);
            err << line;
        }
    };
    SweepOutcome outcome = sweep_k(p.corpus, p.docs, p.words, grid, cfg_template, options, on_row);
    write_outputs(s, p, *outcome.chosen_fit, outcome.report, "sweep", err);
    out << render_k_report(outcome.report);
    return kExitOk;
}

/// Theta for documents in `path` under a trained checkpoint.
struct Folded {
    Corpus corpus;
    Matrix theta;
};

Folded fold_in(const Checkpoint& ckpt, const Settings& s, const std::string& path, const std::string& embeddings_path) {
    const std::optional<std::string> label_col =
        s.label_column.empty() ? std::nullopt : std::optional<std::string>(s.label_column);
    const RawCorpus raw = load_csv(path, s.text_column, label_col, s.max_input_bytes);
    Folded f;
    f.corpus = apply_vocabulary(raw, ckpt.preprocess, ckpt.vocab);
    DocEmbeddings docs;
    if (!embeddings_path.empty()) {
        docs = load_doc_embeddings(embeddings_path, f.corpus.num_docs());
    } else if (ckpt.lsa) {
        docs = project_documents(*ckpt.lsa, f.corpus);
    } else {
        throw Error(ErrorCode::InvalidConfig, "eval",
                    "model was trained on external document embeddings; pass --train-doc-embeddings and "
                    "--test-doc-embeddings");
    }
    f.theta = transform(ckpt.model, docs, f.corpus.empty_docs);
    return f;
}

int cmd_eval(const Settings& s, std::ostream& out, std::ostream& err) {
    std::string model_path = s.model_path;
    if (std::filesystem::is_directory(model_path)) model_path = (std::filesystem::path(model_path) / kModelFile).string();
    const Checkpoint ckpt = load_checkpoint(model_path);
    const Folded train = fold_in(ckpt, s, s.train, s.train_doc_embeddings);
    const Folded test = fold_in(ckpt, s, s.test, s.test_doc_embeddings);

    const ModelConfig& c = ckpt.config;
    const Matrix beta = topic_word(ckpt.model.topics, ckpt.model.words, c.eps_tw, c.sinkhorn_iters, c.sinkhorn_tol);
    MetricsReport m = topic_metrics(all_top_words(beta, ckpt.vocab, kDefaultTopM), train.corpus);
    const ClusterScores cs = cluster_eval(test.theta, test.corpus.labels);
    m.purity = cs.purity;
    m.nmi = cs.nmi;
    m.pn = cs.pn;
    m.acc = classify_eval(train.theta, train.corpus.labels, test.theta, test.corpus.labels, s.knn);

    ojson j;
    j["num_topics"] = c.num_topics;
    j["tc"] = m.tc_mean;
    j["td"] = m.td;
    j["tq"] = m.tq;
    j["tc_per_topic"] = m.tc_per_topic;
    j["purity"] = *m.purity;
    j["nmi"] = *m.nmi;
    j["pn"] = *m.pn;
    j["acc"] = *m.acc;
    j["knn"] = s.knn;
    const std::string path = s.output.empty() ? out_path(s, "metrics.json") : s.output;
    write_json(j, path);
    out << j.dump(2) << "\n";
    if (!s.quiet) err << "wrote " << path << "\n";
    return kExitOk;
}

int cmd_calibrate(const Settings& s, std::ostream&, std::ostream& err) {
    ProportionsTable table = read_proportions_csv(s.input);
    const double k = static_cast<double>(table.values.cols());
    // Rounded proportions miss the simplex by up to K half-units of the last
    // printed digit; rows within that slack are renormalized first.
    for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
        const double sum = table.values.row(i).sum();
        if (std::abs(sum - 1.0) <= k * 0.0005 + 1e-9 && sum > 0.0 && table.values.row(i).minCoeff() >= 0.0) {
            table.values.row(i) /= sum;
        }
    }
    const CalibratedTheta cal = calibrate(table.values);
    const std::vector<std::string>* texts = table.texts ? &*table.texts : nullptr;
    write_proportions_csv(cal.matrix, table.labels, texts, s.output, s.precision);
    if (!s.quiet) {
        err << "calibrated " << table.values.rows() << " rows (" << cal.fallback_rows.size()
            << " uniform) into " << s.output << "\n";
    }
    return kExitOk;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Settings s;
    CLI::App app{"Topic modeling with optimal transport and refined topic words"};
    app.name("lxtopic");
    app.set_version_flag("--version", LXTOPIC_VERSION);
    app.set_config("--config", "", "TOML or INI file; subcommand settings go under [fit], [sweep], ...");
    app.require_subcommand(1);

    CLI::App* fit_cmd = app.add_subcommand("fit", "fit a model with a fixed number of topics");
    add_input_options(*fit_cmd, s);
    fit_cmd->add_option("--k", s.k, "number of topics")->required()->check(CLI::PositiveNumber);
    add_model_options(*fit_cmd, s);
    add_output_options(*fit_cmd, s);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "fit a grid of topic counts and keep the best topic quality");
    add_input_options(*sweep_cmd, s);
    sweep_cmd->add_option("--k-min", s.k_min)->capture_default_str();
    sweep_cmd->add_option("--k-max", s.k_max)->capture_default_str();
    sweep_cmd->add_option("--k-step", s.k_step)->capture_default_str();
    sweep_cmd->add_option("--k-grid", s.k_grid, "explicit grid such as \"10,20,50\" or \"2..10\"");
    add_model_options(*sweep_cmd, s);
    add_output_options(*sweep_cmd, s);

    CLI::App* eval_cmd = app.add_subcommand("eval", "score a trained model on labeled train and test data");
    eval_cmd->add_option("--model", s.model_path, "model.json or the output directory holding it")->required();
    eval_cmd->add_option("--train", s.train, "labeled training CSV")->required();
    eval_cmd->add_option("--test", s.test, "labeled test CSV")->required();
    eval_cmd->add_option("--text-column", s.text_column)->required();
    eval_cmd->add_option("--label-column", s.label_column);
    eval_cmd->add_option("--max-input-bytes", s.max_input_bytes)->capture_default_str();
    eval_cmd->add_option("--train-doc-embeddings", s.train_doc_embeddings);
    eval_cmd->add_option("--test-doc-embeddings", s.test_doc_embeddings);
    eval_cmd->add_option("--knn", s.knn, "neighbors for the classification score")->capture_default_str()->check(CLI::PositiveNumber);
    eval_cmd->add_option("--output", s.output, "metrics JSON path (default <output-dir>/metrics.json)");
    eval_cmd->add_option("--output-dir", s.output_dir)->capture_default_str();
    eval_cmd->add_flag("--quiet", s.quiet);

    CLI::App* cal_cmd = app.add_subcommand("calibrate", "recalibrate an existing proportions CSV");
    cal_cmd->add_option("--input", s.input, "proportions CSV")->required();
    cal_cmd->add_option("--output", s.output, "destination CSV")->required();
    cal_cmd->add_option("--precision", s.precision)->capture_default_str()->check(CLI::Range(0, 17));
    cal_cmd->add_flag("--quiet", s.quiet);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << LXTOPIC_VERSION << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        const CLI::App* failed = &app;
        for (const CLI::App* sub : app.get_subcommands()) failed = sub;
        err << failed->help();
        return kExitUsage;
    }

    try {
        if (fit_cmd->parsed()) return cmd_fit(s, out, err);
        if (sweep_cmd->parsed()) return cmd_sweep(s, out, err);
        if (eval_cmd->parsed()) return cmd_eval(s, out, err);
        if (cal_cmd->parsed()) return cmd_calibrate(s, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}

} // namespace lxtopic
