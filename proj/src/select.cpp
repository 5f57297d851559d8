#include "lxtopic/select.hpp"

#include "lxtopic/error.hpp"
#include "lxtopic/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace lxtopic {

int choose_k(const std::vector<KSweepRow>& rows) {
    const KSweepRow* best = nullptr;
    for (const auto& row : rows) {
        if (row.error || !std::isfinite(row.tq)) continue;
        if (!best || row.tq > best->tq || (row.tq == best->tq && row.k < best->k)) best = &row;
    }
    if (!best) throw Error(ErrorCode::SweepFailed, "sweep_k", "no K in the grid could be fitted");
    return best->k;
}

namespace {

int parse_int(const std::string& token, const std::string& spec) {
    try {
        std::size_t used = 0;
        const int value = std::stoi(token, &used);
        if (used == token.size()) return value;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::InvalidConfig, "parse_k_grid", "bad K grid '" + spec + "'");
}

} // namespace

std::vector<int> parse_k_grid(const std::string& spec) {
    std::vector<int> grid;
    std::stringstream in(spec);
    for (std::string item; std::getline(in, item, ',');) {
        item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }), item.end());
        if (item.empty()) continue;
        if (const auto dots = item.find(".."); dots != std::string::npos) {
            const int lo = parse_int(item.substr(0, dots), spec);
            const int hi = parse_int(item.substr(dots + 2), spec);
            if (lo > hi) throw Error(ErrorCode::InvalidConfig, "parse_k_grid", "empty range in '" + spec + "'");
            for (int k = lo; k <= hi; ++k) grid.push_back(k);
        } else {
            grid.push_back(parse_int(item, spec));
        }
    }
    if (grid.empty()) throw Error(ErrorCode::InvalidConfig, "parse_k_grid", "empty K grid");
    return grid;
}

std::vector<int> k_range(int k_min, int k_max, int step) {
    if (step < 1 || k_min > k_max) throw Error(ErrorCode::InvalidConfig, "k_range", "need k_min <= k_max and step >= 1");
    std::vector<int> grid;
    for (int k = k_min; k <= k_max; k += step) grid.push_back(k);
    return grid;
}

SweepOutcome sweep_k(const Corpus& corpus, const DocEmbeddings& doc_embeddings, const WordEmbeddings& word_init,
                     std::vector<int> grid, const ModelConfig& config_template, const FitOptions& options,
                     const std::function<void(const KSweepRow&)>& on_row) {
    if (grid.empty()) throw Error(ErrorCode::InvalidConfig, "sweep_k", "empty K grid");
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (grid.front() < 2) throw Error(ErrorCode::InvalidConfig, "sweep_k", "every K in the grid must be >= 2");

    SweepOutcome out;
    std::optional<double> best_tq;
    for (int k : grid) {
        KSweepRow row;
        row.k = k;
        const auto start = std::chrono::steady_clock::now();
        try {
            ModelConfig cfg = config_template;
            cfg.num_topics = k;
            FitResult result = fit(corpus, doc_embeddings, word_init, cfg, options);
            const MetricsReport m = topic_metrics(all_top_words(result.beta, corpus.vocab, kDefaultTopM), corpus);
            row.tc = m.tc_mean;
            row.td = m.td;
            row.tq = m.tq;
            if (!best_tq || row.tq > *best_tq) {
                best_tq = row.tq;
                out.chosen_fit = std::move(result);
            }
        } catch (const Error& e) {
            row.tc = row.td = std::numeric_limits<double>::quiet_NaN();
            row.tq = -std::numeric_limits<double>::infinity();
            row.error = e.what();
        }
        row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.report.rows.push_back(row);
        if (on_row) on_row(row);
    }
    out.report.chosen_k = choose_k(out.report.rows);
    return out;
}

} // namespace lxtopic
