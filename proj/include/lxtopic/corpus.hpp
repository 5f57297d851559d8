#pragma once

#include "lxtopic/types.hpp"

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

namespace lxtopic {

inline constexpr std::size_t kDefaultMaxInputBytes = 5u << 20;

struct RawRecord {
    std::size_t doc_id = 0;
    std::string text;
    std::optional<std::string> label;
};

/// Records in input order; doc_id == position.
struct RawCorpus {
    std::vector<RawRecord> records;

    std::size_t size() const { return records.size(); }
    bool has_labels() const;
};

struct PreprocessConfig {
    bool lowercase = true;
    std::size_t min_token_len = 2;
    std::size_t min_df = 2;
    double max_df_ratio = 0.95;
    std::unordered_set<std::string> stopwords = default_stopwords();
    std::optional<std::size_t> max_vocab;

    /// Bundled English list (version tag in stopwords_version()).
    static std::unordered_set<std::string> default_stopwords();
    static const char* stopwords_version();
};

struct Corpus {
    std::vector<std::vector<WordId>> docs;
    std::vector<std::string> vocab; // sorted lexicographically
    SparseMatrix bow;               // N x V counts
    std::vector<std::optional<std::string>> labels;
    std::set<std::size_t> empty_docs;
    std::size_t raw_token_total = 0; // tokens before vocabulary filtering

    std::size_t num_docs() const { return docs.size(); }
    std::size_t vocab_size() const { return vocab.size(); }
    std::optional<WordId> word_id(const std::string& word) const;
};

struct StatsReport {
    std::size_t num_docs = 0;
    std::size_t vocab_size = 0;
    double mean_tokens = 0.0;     // after vocabulary filtering
    double raw_mean_tokens = 0.0; // alphabetic tokens before any filtering
    std::size_t num_categories = 0;
    std::size_t num_empty_docs = 0;
};

RawCorpus load_csv(const std::string& path, const std::string& text_column,
                   const std::optional<std::string>& label_column = std::nullopt,
                   std::size_t max_bytes = kDefaultMaxInputBytes);

/// Same as load_csv but from in-memory text (size limit checked on the text).
RawCorpus parse_csv_corpus(const std::string& text, const std::string& text_column,
                           const std::optional<std::string>& label_column = std::nullopt,
                           std::size_t max_bytes = kDefaultMaxInputBytes);

/// Maximal ASCII-alphabetic runs of `text`, optionally lowercased, keeping
/// runs of at least `min_len` characters. Digits, punctuation and non-ASCII
/// bytes all separate tokens.
std::vector<std::string> tokenize(const std::string& text, bool lowercase, std::size_t min_len);

Corpus preprocess(const RawCorpus& raw, const PreprocessConfig& cfg);

/// Tokenizes `raw` against a fixed vocabulary (no thresholds); used to fold
/// held-out documents into a trained model.
Corpus apply_vocabulary(const RawCorpus& raw, const PreprocessConfig& cfg, const std::vector<std::string>& vocab);

StatsReport corpus_stats(const Corpus& c);

std::unordered_set<std::string> load_stopwords_file(const std::string& path);

} // namespace lxtopic
