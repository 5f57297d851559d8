#include "lxtopic/corpus.hpp"

#include "lxtopic/csv.hpp"
#include "lxtopic/error.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <unordered_map>

namespace lxtopic {

bool RawCorpus::has_labels() const {
    return !records.empty() &&
           std::all_of(records.begin(), records.end(), [](const RawRecord& r) { return r.label.has_value(); });
}

std::optional<WordId> Corpus::word_id(const std::string& word) const {
    auto it = std::lower_bound(vocab.begin(), vocab.end(), word);
    if (it == vocab.end() || *it != word) return std::nullopt;
    return static_cast<WordId>(it - vocab.begin());
}

RawCorpus parse_csv_corpus(const std::string& text, const std::string& text_column,
                           const std::optional<std::string>& label_column, std::size_t max_bytes) {
    if (text.size() > max_bytes) {
        throw Error(ErrorCode::FileTooLarge, "load_csv",
                    std::to_string(text.size()) + " bytes exceeds limit of " + std::to_string(max_bytes));
    }
    std::string_view body = text;
    if (body.substr(0, 3) == "\xEF\xBB\xBF") body.remove_prefix(3); // UTF-8 BOM

    const csv::Table table = csv::parse(body, true, "load_csv");
    auto column_index = [&](const std::string& name) {
        auto it = std::find(table.header.begin(), table.header.end(), name);
        if (it == table.header.end()) {
            throw Error(ErrorCode::MissingColumn, "load_csv", "column '" + name + "' not in header");
        }
        return static_cast<std::size_t>(it - table.header.begin());
    };
    const std::size_t text_idx = column_index(text_column);
    std::optional<std::size_t> label_idx;
    if (label_column) label_idx = column_index(*label_column);

    RawCorpus raw;
    raw.records.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        RawRecord rec;
        rec.doc_id = i;
        rec.text = table.rows[i][text_idx];
        if (label_idx && !table.rows[i][*label_idx].empty()) rec.label = table.rows[i][*label_idx];
        raw.records.push_back(std::move(rec));
    }
    if (raw.records.empty()) throw Error(ErrorCode::MalformedCsv, "load_csv", "no data rows");
    return raw;
}

RawCorpus load_csv(const std::string& path, const std::string& text_column,
                   const std::optional<std::string>& label_column, std::size_t max_bytes) {
    std::error_code ec;
    const auto size = std::filesystem::file_size(path, ec);
    if (ec) throw Error(ErrorCode::IoError, "load_csv", "cannot read '" + path + "': " + ec.message());
    if (size > max_bytes) {
        throw Error(ErrorCode::FileTooLarge, "load_csv",
                    "'" + path + "' is " + std::to_string(size) + " bytes, limit " + std::to_string(max_bytes));
    }
    return parse_csv_corpus(csv::read_file(path, "load_csv"), text_column, label_column, max_bytes);
}

std::vector<std::string> tokenize(const std::string& text, bool lowercase, std::size_t min_len) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (current.size() >= min_len && !current.empty()) tokens.push_back(current);
        current.clear();
    };
    for (unsigned char ch : text) {
        const bool upper = ch >= 'A' && ch <= 'Z';
        const bool lower = ch >= 'a' && ch <= 'z';
        if (upper || lower) {
            current.push_back(upper && lowercase ? static_cast<char>(ch - 'A' + 'a') : static_cast<char>(ch));
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

namespace {

void validate(const PreprocessConfig& cfg) {
    if (cfg.min_token_len < 1) throw Error(ErrorCode::InvalidConfig, "preprocess", "min_token_len must be >= 1");
    if (cfg.min_df < 1) throw Error(ErrorCode::InvalidConfig, "preprocess", "min_df must be >= 1");
    if (!(cfg.max_df_ratio > 0.0 && cfg.max_df_ratio <= 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "preprocess", "max_df_ratio must lie in (0, 1]");
    }
    if (cfg.max_vocab && *cfg.max_vocab == 0) throw Error(ErrorCode::InvalidConfig, "preprocess", "max_vocab must be >= 1");
}

struct Tokenized {
    std::vector<std::vector<std::string>> docs;
    std::size_t raw_total = 0;
};

Tokenized tokenize_all(const RawCorpus& raw, const PreprocessConfig& cfg) {
    Tokenized out;
    out.docs.reserve(raw.size());
    for (const auto& rec : raw.records) {
        auto all = tokenize(rec.text, cfg.lowercase, 1);
        out.raw_total += all.size();
        std::vector<std::string> kept;
        kept.reserve(all.size());
        for (auto& tok : all) {
            if (tok.size() < cfg.min_token_len) continue;
            // Stopword lookup is case-insensitive when lowercasing is on; the list is lowercase.
            if (cfg.stopwords.count(tok)) continue;
            kept.push_back(std::move(tok));
        }
        out.docs.push_back(std::move(kept));
    }
    return out;
}

Corpus assemble(const RawCorpus& raw, Tokenized tokenized, std::vector<std::string> vocab) {
    std::sort(vocab.begin(), vocab.end());
    std::unordered_map<std::string, WordId> index;
    index.reserve(vocab.size());
    for (std::size_t v = 0; v < vocab.size(); ++v) index.emplace(vocab[v], static_cast<WordId>(v));

    Corpus c;
    c.vocab = std::move(vocab);
    c.raw_token_total = tokenized.raw_total;
    c.docs.resize(tokenized.docs.size());
    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t i = 0; i < tokenized.docs.size(); ++i) {
        std::map<WordId, int> counts;
        for (const auto& tok : tokenized.docs[i]) {
            auto it = index.find(tok);
            if (it == index.end()) continue;
            c.docs[i].push_back(it->second);
            ++counts[it->second];
        }
        if (c.docs[i].empty()) c.empty_docs.insert(i);
        for (auto [w, n] : counts) triplets.emplace_back(static_cast<int>(i), w, static_cast<double>(n));
    }
    c.bow.resize(static_cast<Eigen::Index>(c.docs.size()), static_cast<Eigen::Index>(c.vocab.size()));
    c.bow.setFromTriplets(triplets.begin(), triplets.end());
    c.bow.makeCompressed();
    c.labels.reserve(raw.size());
    for (const auto& rec : raw.records) c.labels.push_back(rec.label);
    return c;
}

} // namespace

Corpus preprocess(const RawCorpus& raw, const PreprocessConfig& cfg) {
    validate(cfg);
    Tokenized tokenized = tokenize_all(raw, cfg);
    const std::size_t n = tokenized.docs.size();

    std::map<std::string, std::pair<std::size_t, std::size_t>> stats; // word -> (df, corpus freq)
    for (const auto& doc : tokenized.docs) {
        std::vector<std::string> distinct = doc;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        for (const auto& w : distinct) ++stats[w].first;
        for (const auto& w : doc) ++stats[w].second;
    }

    const double max_df = cfg.max_df_ratio * static_cast<double>(n);
    std::vector<std::pair<std::string, std::size_t>> kept;
    for (const auto& [word, s] : stats) {
        if (s.first >= cfg.min_df && static_cast<double>(s.first) <= max_df) kept.emplace_back(word, s.second);
    }
    if (kept.empty()) {
        throw Error(ErrorCode::EmptyVocabulary, "preprocess",
                    "no word has min_df=" + std::to_string(cfg.min_df) + " <= df <= " + std::to_string(max_df));
    }
    if (cfg.max_vocab && kept.size() > *cfg.max_vocab) {
        std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
            return a.second != b.second ? a.second > b.second : a.first < b.first;
        });
        kept.resize(*cfg.max_vocab);
    }
    std::vector<std::string> vocab;
    vocab.reserve(kept.size());
    for (auto& [word, freq] : kept) vocab.push_back(std::move(word));
    return assemble(raw, std::move(tokenized), std::move(vocab));
}

Corpus apply_vocabulary(const RawCorpus& raw, const PreprocessConfig& cfg, const std::vector<std::string>& vocab) {
    validate(cfg);
    if (vocab.empty()) throw Error(ErrorCode::EmptyVocabulary, "apply_vocabulary", "vocabulary is empty");
    return assemble(raw, tokenize_all(raw, cfg), vocab);
}

StatsReport corpus_stats(const Corpus& c) {
    StatsReport s;
    s.num_docs = c.num_docs();
    s.vocab_size = c.vocab_size();
    s.num_empty_docs = c.empty_docs.size();
    std::size_t total = 0;
    for (const auto& d : c.docs) total += d.size();
    if (s.num_docs > 0) {
        s.mean_tokens = static_cast<double>(total) / static_cast<double>(s.num_docs);
        s.raw_mean_tokens = static_cast<double>(c.raw_token_total) / static_cast<double>(s.num_docs);
    }
    std::set<std::string> categories;
    for (const auto& l : c.labels) {
        if (l) categories.insert(*l);
    }
    s.num_categories = categories.size();
    return s;
}

std::unordered_set<std::string> load_stopwords_file(const std::string& path) {
    const std::string text = csv::read_file(path, "load_stopwords_file");
    std::unordered_set<std::string> words;
    for (auto& tok : tokenize(text, true, 1)) words.insert(std::move(tok));
    return words;
}

} // namespace lxtopic
