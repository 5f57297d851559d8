#include "lxtopic/metrics.hpp"

#include "lxtopic/cooccurrence.hpp"
#include "lxtopic/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace lxtopic {

double npmi(double p_i, double p_j, double p_ij) {
    if (p_i <= 0.0 || p_j <= 0.0) return -1.0;
    if (p_ij >= 1.0) return 1.0;
    const double joint = p_ij + kNpmiSmoothing;
    const double value = std::log(joint / (p_i * p_j)) / -std::log(joint);
    return std::clamp(value, -1.0, 1.0);
}

Coherence npmi_coherence(const TopicWords& topics, const Corpus& ref, std::size_t window) {
    std::vector<std::vector<std::optional<WordId>>> ids;
    std::vector<bool> tracked(ref.vocab_size(), false);
    for (const auto& topic : topics) {
        if (topic.size() < 2) throw Error(ErrorCode::LengthMismatch, "npmi_coherence", "each topic needs >= 2 words");
        auto& row = ids.emplace_back();
        for (const auto& w : topic) {
            row.push_back(ref.word_id(w));
            if (row.back()) tracked[static_cast<std::size_t>(*row.back())] = true;
        }
    }
    const WindowStats stats = count_windows(ref.docs, ref.vocab_size(), window, tracked);
    if (stats.num_windows == 0) throw Error(ErrorCode::EmptyReference, "npmi_coherence", "reference corpus has no tokens");
    const double total = static_cast<double>(stats.num_windows);

    Coherence out;
    for (const auto& row : ids) {
        double sum = 0.0;
        std::size_t pairs = 0;
        for (std::size_t a = 0; a < row.size(); ++a) {
            for (std::size_t b = a + 1; b < row.size(); ++b, ++pairs) {
                if (!row[a] || !row[b]) {
                    sum += -1.0;
                    continue;
                }
                const double p_i = static_cast<double>(stats.word_windows[static_cast<std::size_t>(*row[a])]) / total;
                const double p_j = static_cast<double>(stats.word_windows[static_cast<std::size_t>(*row[b])]) / total;
                const double p_ij =
                    *row[a] == *row[b] ? p_i : static_cast<double>(stats.pair_count(*row[a], *row[b])) / total;
                sum += npmi(p_i, p_j, p_ij);
            }
        }
        out.per_topic.push_back(sum / static_cast<double>(pairs));
    }
    if (!out.per_topic.empty()) {
        out.mean = std::accumulate(out.per_topic.begin(), out.per_topic.end(), 0.0) /
                   static_cast<double>(out.per_topic.size());
    }
    return out;
}

double topic_diversity(const TopicWords& topics, std::optional<std::size_t> n) {
    if (topics.empty()) throw Error(ErrorCode::LengthMismatch, "topic_diversity", "no topics");
    const std::size_t per_topic = n.value_or(topics.front().size());
    if (per_topic == 0) throw Error(ErrorCode::LengthMismatch, "topic_diversity", "empty topic word list");
    std::set<std::string> unique;
    for (const auto& topic : topics) {
        if (topic.size() != per_topic) {
            throw Error(ErrorCode::LengthMismatch, "topic_diversity",
                        "expected " + std::to_string(per_topic) + " words per topic, got " + std::to_string(topic.size()));
        }
        unique.insert(topic.begin(), topic.end());
    }
    return static_cast<double>(unique.size()) / static_cast<double>(topics.size() * per_topic);
}

namespace {

template <typename Key>
double entropy(const std::map<Key, std::size_t>& counts, double n) {
    double h = 0.0;
    for (const auto& [key, c] : counts) {
        const double p = static_cast<double>(c) / n;
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

std::vector<std::string> require_labels(const std::vector<std::optional<std::string>>& labels, const char* where) {
    std::vector<std::string> out;
    out.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!labels[i]) throw Error(ErrorCode::MissingLabels, where, "document " + std::to_string(i) + " has no label");
        out.push_back(*labels[i]);
    }
    if (out.empty()) throw Error(ErrorCode::MissingLabels, where, "no labeled documents");
    return out;
}

} // namespace

ClusterScores cluster_scores(const std::vector<std::size_t>& clusters, const std::vector<std::string>& labels) {
    if (clusters.size() != labels.size() || clusters.empty()) {
        throw Error(ErrorCode::DimensionMismatch, "cluster_eval", "one label per document required");
    }
    const double n = static_cast<double>(clusters.size());
    std::map<std::size_t, std::map<std::string, std::size_t>> table;
    std::map<std::size_t, std::size_t> cluster_counts;
    std::map<std::string, std::size_t> label_counts;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        ++table[clusters[i]][labels[i]];
        ++cluster_counts[clusters[i]];
        ++label_counts[labels[i]];
    }

    ClusterScores s;
    double majority = 0.0;
    double mi = 0.0;
    for (const auto& [cluster, row] : table) {
        std::size_t best = 0;
        const double nc = static_cast<double>(cluster_counts[cluster]);
        for (const auto& [label, count] : row) {
            best = std::max(best, count);
            const double nl = static_cast<double>(label_counts[label]);
            const double joint = static_cast<double>(count);
            mi += joint / n * std::log(joint * n / (nc * nl));
        }
        majority += static_cast<double>(best);
    }
    s.purity = majority / n;
    const double hc = entropy(cluster_counts, n);
    const double hl = entropy(label_counts, n);
    if (hc <= 0.0 || hl <= 0.0) {
        s.nmi = (cluster_counts.size() == 1 && label_counts.size() == 1) ? 1.0 : 0.0;
    } else {
        s.nmi = std::clamp(mi / std::sqrt(hc * hl), 0.0, 1.0);
    }
    s.pn = 0.5 * (s.purity + s.nmi);
    return s;
}

ClusterScores cluster_eval(const Matrix& theta, const std::vector<std::optional<std::string>>& labels) {
    const auto y = require_labels(labels, "cluster_eval");
    if (static_cast<Eigen::Index>(y.size()) != theta.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "cluster_eval", "one label per document required");
    }
    std::vector<std::size_t> clusters(y.size());
    for (Eigen::Index i = 0; i < theta.rows(); ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index k = 1; k < theta.cols(); ++k) {
            if (theta(i, k) > theta(i, best)) best = k;
        }
        clusters[static_cast<std::size_t>(i)] = static_cast<std::size_t>(best);
    }
    return cluster_scores(clusters, y);
}

double classify_eval(const Matrix& theta_train, const std::vector<std::optional<std::string>>& y_train_opt,
                     const Matrix& theta_test, const std::vector<std::optional<std::string>>& y_test_opt,
                     std::size_t k_neighbors) {
    const auto y_train = require_labels(y_train_opt, "classify_eval");
    const auto y_test = require_labels(y_test_opt, "classify_eval");
    if (theta_train.cols() != theta_test.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "classify_eval", "train and test topic counts differ");
    }
    if (static_cast<Eigen::Index>(y_train.size()) != theta_train.rows() ||
        static_cast<Eigen::Index>(y_test.size()) != theta_test.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "classify_eval", "one label per row required");
    }
    if (k_neighbors < 1) throw Error(ErrorCode::InvalidConfig, "classify_eval", "k must be >= 1");

    std::map<std::string, std::size_t> prior;
    for (const auto& y : y_train) ++prior[y];

    const std::size_t n_train = y_train.size();
    const std::size_t k = std::min(k_neighbors, n_train);
    std::vector<std::pair<double, std::size_t>> dist(n_train);
    std::size_t correct = 0;
    for (Eigen::Index t = 0; t < theta_test.rows(); ++t) {
        for (std::size_t j = 0; j < n_train; ++j) {
            dist[j] = {(theta_train.row(static_cast<Eigen::Index>(j)) - theta_test.row(t)).squaredNorm(), j};
        }
        std::sort(dist.begin(), dist.end());
        const double cutoff = dist[k - 1].first;
        std::map<std::string, std::size_t> votes;
        for (std::size_t j = 0; j < n_train && (j < k || dist[j].first == cutoff); ++j) ++votes[y_train[dist[j].second]];

        const std::string* winner = nullptr;
        std::size_t best_votes = 0;
        for (const auto& [label, count] : votes) {
            // std::map iterates labels in ascending order, so strict comparisons keep the smaller label.
            if (count > best_votes || (count == best_votes && prior[label] > prior[*winner])) {
                winner = &label;
                best_votes = count;
            }
        }
        if (*winner == y_test[static_cast<std::size_t>(t)]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(y_test.size());
}

MetricsReport topic_metrics(const TopicWords& topics, const Corpus& ref, std::size_t window) {
    MetricsReport r;
    const Coherence c = npmi_coherence(topics, ref, window);
    r.tc_per_topic = c.per_topic;
    r.tc_mean = c.mean;
    r.td = topic_diversity(topics);
    r.tq = topic_quality(r.tc_mean, r.td);
    return r;
}

} // namespace lxtopic
