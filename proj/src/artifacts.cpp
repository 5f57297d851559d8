#include "lxtopic/artifacts.hpp"

#include "lxtopic/csv.hpp"
#include "lxtopic/error.hpp"
#include "lxtopic/model.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unistd.h>

namespace lxtopic {

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
    }
    const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "write", "cannot create '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw Error(ErrorCode::IoError, "write", "short write to '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorCode::IoError, "write", "cannot move output into '" + path + "'");
    }
}

std::string format_fixed(double value, int decimals) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
    std::string out = buffer;
    // "-0.000" reads as a negative proportion; normalize the sign.
    if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
    return out;
}

std::vector<std::string> dedupe_labels(const std::vector<std::string>& labels) {
    std::map<std::string, int> seen;
    std::vector<std::string> out;
    out.reserve(labels.size());
    for (const auto& label : labels) {
        const int n = ++seen[label];
        out.push_back(n == 1 ? label : label + " (" + std::to_string(n) + ")");
    }
    // A generated suffix can collide with a literal label ("A (2)"); repeat until unique.
    std::map<std::string, int> count;
    for (const auto& l : out) ++count[l];
    bool clash = false;
    for (const auto& [l, c] : count) clash = clash || c > 1;
    return clash && out != labels ? dedupe_labels(out) : out;
}

std::string render_proportions_csv(const Matrix& theta, const std::vector<std::string>& labels,
                                   const std::vector<std::string>* texts, int decimals) {
    if (static_cast<Eigen::Index>(labels.size()) != theta.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "write_proportions_csv", "one label per topic required");
    }
    if (texts && static_cast<Eigen::Index>(texts->size()) != theta.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "write_proportions_csv", "one text per document required");
    }
    std::string out;
    csv::Row header;
    if (texts) header.push_back("text");
    for (const auto& l : dedupe_labels(labels)) header.push_back(l);
    out += csv::join_row(header) + "\n";
    for (Eigen::Index i = 0; i < theta.rows(); ++i) {
        csv::Row row;
        if (texts) row.push_back((*texts)[static_cast<std::size_t>(i)]);
        for (Eigen::Index k = 0; k < theta.cols(); ++k) row.push_back(format_fixed(theta(i, k), decimals));
        out += csv::join_row(row) + "\n";
    }
    return out;
}

void write_proportions_csv(const Matrix& theta, const std::vector<std::string>& labels,
                           const std::vector<std::string>* texts, const std::string& path, int decimals) {
    atomic_write(path, render_proportions_csv(theta, labels, texts, decimals));
}

ProportionsTable read_proportions_csv(const std::string& path) {
    const csv::Table table = csv::parse(csv::read_file(path, "read_proportions_csv"), true, "read_proportions_csv");
    ProportionsTable out;
    std::size_t first = 0;
    if (!table.header.empty() && table.header[0] == "text") {
        first = 1;
        out.texts.emplace();
    }
    out.labels.assign(table.header.begin() + static_cast<std::ptrdiff_t>(first), table.header.end());
    out.values.resize(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(out.labels.size()));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (out.texts) out.texts->push_back(table.rows[r][0]);
        for (std::size_t k = 0; k < out.labels.size(); ++k) {
            const std::string& cell = table.rows[r][first + k];
            char* end = nullptr;
            const double value = std::strtod(cell.c_str(), &end);
            if (cell.empty() || *end != '\0') {
                throw Error(ErrorCode::MalformedCsv, "read_proportions_csv",
                            "line " + std::to_string(table.line_numbers[r]) + ": '" + cell + "' is not a number");
            }
            out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = value;
        }
    }
    return out;
}

double round_significant(double value, int digits) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*g", digits, value);
    return std::strtod(buffer, nullptr);
}

std::string render_topics_jsonl(const Matrix& beta, const std::vector<std::string>& vocab,
                                const std::vector<std::string>& labels, const std::vector<std::string>& descriptions,
                                const std::optional<std::vector<RefinementSuggestion>>& refined, std::size_t top_m) {
    const auto k_topics = static_cast<std::size_t>(beta.rows());
    if (labels.size() != k_topics || descriptions.size() != k_topics || (refined && refined->size() != k_topics)) {
        throw Error(ErrorCode::DimensionMismatch, "write_topics_jsonl", "per-topic fields disagree with K");
    }
    std::string out;
    for (std::size_t k = 0; k < k_topics; ++k) {
        const Vector row = beta.row(static_cast<Eigen::Index>(k)).transpose();
        nlohmann::ordered_json words = nlohmann::ordered_json::array();
        for (WordId id : top_word_ids(row, vocab, top_m)) {
            words.push_back({{"word", vocab[static_cast<std::size_t>(id)]}, {"weight", round_significant(row(id))}});
        }
        nlohmann::ordered_json line;
        line["topic_id"] = k;
        line["label"] = labels[k];
        line["description"] = descriptions[k];
        line["top_words"] = std::move(words);
        line["refined_words"] = refined ? (*refined)[k].refined_words : std::vector<std::string>{};
        line["confidence"] = refined ? (*refined)[k].confidence : 0.0;
        out += line.dump() + "\n";
    }
    return out;
}

void write_topics_jsonl(const Matrix& beta, const std::vector<std::string>& vocab, const std::vector<std::string>& labels,
                        const std::vector<std::string>& descriptions,
                        const std::optional<std::vector<RefinementSuggestion>>& refined, const std::string& path,
                        std::size_t top_m) {
    atomic_write(path, render_topics_jsonl(beta, vocab, labels, descriptions, refined, top_m));
}

std::string render_k_report(const KSweepReport& report) {
    if (report.rows.empty()) throw Error(ErrorCode::InvalidConfig, "write_k_report_txt", "empty K report");
    std::string out;
    char buffer[160];
    for (const auto& row : report.rows) {
        std::snprintf(buffer, sizeof buffer, "K=%d  TC=%.4f  TD=%.4f  TQ=%.4f\n", row.k, row.tc, row.td, row.tq);
        out += buffer;
    }
    out += "CHOSEN K=" + std::to_string(report.chosen_k) + "\n";
    return out;
}

void write_k_report_txt(const KSweepReport& report, const std::string& path) { atomic_write(path, render_k_report(report)); }

void write_json(const nlohmann::ordered_json& value, const std::string& path) { atomic_write(path, value.dump(2) + "\n"); }

} // namespace lxtopic
