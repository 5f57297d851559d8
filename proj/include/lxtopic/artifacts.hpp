#pragma once

#include "lxtopic/refine.hpp"
#include "lxtopic/select.hpp"
#include "lxtopic/types.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace lxtopic {

inline constexpr const char* kProportionsFile = "proportions.csv";
inline constexpr const char* kTopicsFile = "topics.jsonl";
inline constexpr const char* kKReportFile = "k_report.txt";
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kModelFile = "model.json";

/// Writes via a temporary sibling file and rename, so readers never observe a
/// partially written artifact. Throws Error{IoError}.
void atomic_write(const std::string& path, const std::string& content);

/// printf-style fixed notation; glibc rounds the exact binary value, so exact
/// halfway cases go to even.
std::string format_fixed(double value, int decimals);

/// Appends " (2)", " (3)", ... to repeated labels, in topic order.
std::vector<std::string> dedupe_labels(const std::vector<std::string>& labels);

std::string render_proportions_csv(const Matrix& theta, const std::vector<std::string>& labels,
                                   const std::vector<std::string>* texts, int decimals = 3);
void write_proportions_csv(const Matrix& theta, const std::vector<std::string>& labels,
                           const std::vector<std::string>* texts, const std::string& path, int decimals = 3);

struct ProportionsTable {
    std::vector<std::string> labels;
    std::optional<std::vector<std::string>> texts;
    Matrix values;
};

/// Reads a proportions CSV (optional leading "text" column).
ProportionsTable read_proportions_csv(const std::string& path);

std::string render_topics_jsonl(const Matrix& beta, const std::vector<std::string>& vocab,
                                const std::vector<std::string>& labels, const std::vector<std::string>& descriptions,
                                const std::optional<std::vector<RefinementSuggestion>>& refined, std::size_t top_m = 10);
void write_topics_jsonl(const Matrix& beta, const std::vector<std::string>& vocab, const std::vector<std::string>& labels,
                        const std::vector<std::string>& descriptions,
                        const std::optional<std::vector<RefinementSuggestion>>& refined, const std::string& path,
                        std::size_t top_m = 10);

/// Rounds to six significant digits.
double round_significant(double value, int digits = 6);

/// One line per K ("K=<k>  TC=<x>  TD=<x>  TQ=<x>", four decimals) then
/// "CHOSEN K=<k>". Throws InvalidConfig on an empty report.
std::string render_k_report(const KSweepReport& report);
void write_k_report_txt(const KSweepReport& report, const std::string& path);

void write_json(const nlohmann::ordered_json& value, const std::string& path);

} // namespace lxtopic
