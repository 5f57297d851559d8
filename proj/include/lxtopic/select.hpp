#pragma once

#include "lxtopic/model.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lxtopic {

struct KSweepRow {
    int k = 0;
    double tc = 0.0;
    double td = 0.0;
    double tq = 0.0; // -inf when the fit failed
    double wall_seconds = 0.0;
    std::optional<std::string> error;
};

/// Rows ascending by K; chosen_k maximizes TQ, smallest K on ties.
struct KSweepReport {
    std::vector<KSweepRow> rows;
    int chosen_k = 0;
};

/// argmax TQ over successful rows, ties to the smallest K. Throws SweepFailed
/// when no row succeeded.
int choose_k(const std::vector<KSweepRow>& rows);

/// Parses "10,20,50" or "2..10" (inclusive range), or a mix such as "2..4,8".
std::vector<int> parse_k_grid(const std::string& spec);

/// k_min, k_min + step, ... <= k_max.
std::vector<int> k_range(int k_min, int k_max, int step);

struct SweepOutcome {
    KSweepReport report;
    std::optional<FitResult> chosen_fit;
};

/// Fits every K in `grid` (sorted and deduplicated first) with the template
/// config's seed, scoring TC/TD/TQ on top-10 words against `corpus`. Failed
/// Ks are recorded with TQ = -inf. `on_row` sees each completed row in order.
SweepOutcome sweep_k(const Corpus& corpus, const DocEmbeddings& doc_embeddings, const WordEmbeddings& word_init,
                     std::vector<int> grid, const ModelConfig& config_template, const FitOptions& options = {},
                     const std::function<void(const KSweepRow&)>& on_row = {});

} // namespace lxtopic
