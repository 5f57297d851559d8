#pragma once

#include "lxtopic/embed.hpp"
#include "lxtopic/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lxtopic {

enum class SuggestionSource { Llm, Fallback, Skipped };

const char* to_string(SuggestionSource source);

struct RefinementSuggestion {
    std::size_t topic_id = 0;
    std::vector<std::string> original_words; // top-ranked words sent to the model
    std::vector<std::string> refined_words;
    std::string label;
    double confidence = 0.0;
    /// False when the completion omitted a confidence; sanitize() then fills
    /// in the Jaccard fallback.
    bool has_confidence = false;
    SuggestionSource source = SuggestionSource::Skipped;
};

struct RefineConfig {
    double lambda = 1.0;
    int interval_epochs = 20;
    double eps_r = 0.1;
    std::size_t top_m = 10;
    std::size_t concurrency_limit = 4;
    int sinkhorn_iters = 2000;
    double sinkhorn_tol = 1e-10;

    void validate() const;
};

inline constexpr std::size_t kMaxLabelChars = 40;
inline constexpr std::size_t kMaxDescriptionWords = 80;

/// Source of refinement suggestions and descriptions. Implementations must be
/// safe to call concurrently for different topics; both calls may throw, and
/// callers degrade to the skipped/template path.
class Refiner {
public:
    virtual ~Refiner() = default;
    virtual RefinementSuggestion suggest(std::size_t topic_id, const std::vector<std::string>& top_words) = 0;
    virtual std::string describe(const std::string& label, const std::vector<std::string>& words) = 0;
};

/// Offline stand-in: echoes the words back, labels with the first two words
/// title-cased, confidence 0.5.
class StubRefiner final : public Refiner {
public:
    RefinementSuggestion suggest(std::size_t topic_id, const std::vector<std::string>& top_words) override;
    std::string describe(const std::string& label, const std::vector<std::string>& words) override;
};

class LlmClient;

/// Prompts a chat-completion endpoint.
class LlmRefiner final : public Refiner {
public:
    LlmRefiner(LlmClient& client, std::size_t top_m) : client_(client), top_m_(top_m) {}
    RefinementSuggestion suggest(std::size_t topic_id, const std::vector<std::string>& top_words) override;
    std::string describe(const std::string& label, const std::vector<std::string>& words) override;

private:
    LlmClient& client_;
    std::size_t top_m_;
};

std::string build_prompt(const std::vector<std::string>& words, std::size_t top_m = 10);
std::string build_description_prompt(const std::string& label, const std::vector<std::string>& words);

struct ParsedResponse {
    std::vector<std::string> refined_words;
    std::string label;
    std::optional<double> confidence;
};

/// Extracts the first JSON object from a completion (code fences tolerated).
/// Throws Error{ParseError} when none is found or the keys have wrong types.
ParsedResponse parse_response(const std::string& text);

/// Lowercases and trims refined words, drops out-of-vocabulary words and
/// duplicates keeping first occurrences. Fewer than two survivors marks the
/// suggestion skipped with confidence 0. Otherwise a missing confidence is
/// replaced by confidence_fallback() and the source becomes Fallback; a
/// reported one is clamped to [0, 1].
RefinementSuggestion sanitize(RefinementSuggestion suggestion, const std::vector<std::string>& sorted_vocab);

/// Jaccard overlap |A n B| / |A u B|.
double confidence_fallback(const std::vector<std::string>& original, const std::vector<std::string>& refined);

/// Label used when no suggestion is available: first two words, title-cased.
std::string fallback_label(const std::vector<std::string>& words);

std::string trim_label(const std::string& label);

struct RefineLoss {
    double loss = 0.0;
    Vector grad; // w.r.t. the source marginal, centered
    double marginal_violation = 0.0;
};

/// Cost 1 - cos(emb[s], emb[r]) clamped to [0, 2] between support and refined
/// word ids. Zero-norm rows are orthogonal to everything except themselves.
Matrix refine_cost(const std::vector<WordId>& support, const std::vector<WordId>& refined, const Matrix& embeddings);

/// Entropic alignment between p (over the support words) and the uniform
/// distribution over the refined words:
///   loss = <P, C> + eps_r KL(P || p u^T)
/// which lies in [0, max C]. grad is the centered dual potential of this
/// problem, the exact derivative of loss along simplex-tangent directions.
RefineLoss refine_loss(const Vector& p, const Matrix& cost, const RefineConfig& cfg);

/// recon + lambda * sum_k c_k L_k over non-skipped topics.
double total_loss(double recon, const std::vector<RefinementSuggestion>& suggestions,
                  const std::vector<double>& per_topic_losses, double lambda);

/// Description via the refiner, truncated to kMaxDescriptionWords; falls back
/// to "Topic about: w1, w2, ..." on failure or when `refiner` is null.
std::string describe_topic(const std::string& label, const std::vector<std::string>& words, Refiner* refiner);

std::string template_description(const std::vector<std::string>& words);

/// Calls refiner->suggest for every topic with at most `concurrency_limit`
/// requests in flight, then sanitizes. Failures become skipped suggestions.
/// Results are ordered by topic id.
std::vector<RefinementSuggestion> refine_topics(Refiner& refiner, const std::vector<std::vector<std::string>>& top_words,
                                                const std::vector<std::string>& sorted_vocab,
                                                std::size_t concurrency_limit);

/// Skipped suggestion carrying the fallback label.
RefinementSuggestion skipped_suggestion(std::size_t topic_id, const std::vector<std::string>& top_words);

} // namespace lxtopic
