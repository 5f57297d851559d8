#pragma once

#include "lxtopic/corpus.hpp"
#include "lxtopic/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lxtopic {

inline constexpr std::size_t kDefaultCoherenceWindow = 10;
inline constexpr double kNpmiSmoothing = 1e-12;

using TopicWords = std::vector<std::vector<std::string>>;

struct Coherence {
    std::vector<double> per_topic;
    double mean = 0.0;
};

/// NPMI from window probabilities (see WindowStats):
///   npmi = log((p_ij + 1e-12) / (p_i p_j)) / -log(p_ij + 1e-12)
/// clamped to [-1, 1]; 1 when the pair fills every window; -1 for a word
/// that never occurs in the reference.
double npmi(double p_i, double p_j, double p_ij);

/// Mean NPMI over unordered pairs of each topic's words. Throws
/// EmptyReference when `ref` has no windows, LengthMismatch for a topic with
/// fewer than two words.
Coherence npmi_coherence(const TopicWords& topics, const Corpus& ref, std::size_t window = kDefaultCoherenceWindow);

/// |union of words| / (K * N). Every list must hold exactly `n` words (n = size
/// of the first list when omitted), else LengthMismatch.
double topic_diversity(const TopicWords& topics, std::optional<std::size_t> n = std::nullopt);

inline double topic_quality(double tc, double td) { return tc * td; }

struct ClusterScores {
    double purity = 0.0;
    double nmi = 0.0;
    double pn = 0.0;
};

/// Argmax-topic clusters (ties to the lowest topic) against ground truth.
ClusterScores cluster_eval(const Matrix& theta, const std::vector<std::optional<std::string>>& labels);

/// Same scores for explicit assignments.
ClusterScores cluster_scores(const std::vector<std::size_t>& clusters, const std::vector<std::string>& labels);

/// k-NN accuracy in Euclidean distance. Neighbors are ordered by (distance,
/// train index); every training row tied with the k-th distance also votes.
/// Vote ties go to the class most frequent in training, then the smaller label.
double classify_eval(const Matrix& theta_train, const std::vector<std::optional<std::string>>& y_train,
                     const Matrix& theta_test, const std::vector<std::optional<std::string>>& y_test,
                     std::size_t k_neighbors = 5);

struct MetricsReport {
    std::vector<double> tc_per_topic;
    double tc_mean = 0.0;
    double td = 0.0;
    double tq = 0.0;
    std::optional<double> purity;
    std::optional<double> nmi;
    std::optional<double> pn;
    std::optional<double> acc;
};

/// TC, TD and TQ for a set of topics against a reference corpus.
MetricsReport topic_metrics(const TopicWords& topics, const Corpus& ref, std::size_t window = kDefaultCoherenceWindow);

} // namespace lxtopic
