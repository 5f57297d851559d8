#pragma once

#include "lxtopic/corpus.hpp"
#include "lxtopic/embed.hpp"
#include "lxtopic/refine.hpp"
#include "lxtopic/sinkhorn.hpp"
#include "lxtopic/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lxtopic {

inline constexpr double kProbFloor = 1e-12;
inline constexpr std::size_t kDefaultTopM = 10;

struct ModelConfig {
    int num_topics = 10;
    double eps_dt = 0.1;
    double eps_tw = 0.1;
    int sinkhorn_iters = 200;
    double sinkhorn_tol = 1e-6;
    int epochs = 200;
    int warmup_epochs = 100;
    double lr = 2e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    std::uint64_t seed = 0;
    int kmeans_iters = 20; // Lloyd steps after k-means++ seeding

    void validate() const;
};

/// Learnable parameters. Embedding dimension H is T.cols() == W.cols().
struct TopicModel {
    Matrix topics; // K x H
    Matrix words;  // V x H
    ModelConfig config;

    Eigen::Index num_topics() const { return topics.rows(); }
    Eigen::Index dim() const { return topics.cols(); }
};

struct FitResult {
    TopicModel model;
    Matrix theta; // N x K
    Matrix beta;  // K x V
    std::vector<double> loss_trace;  // total surrogate loss per epoch
    std::vector<double> recon_trace; // reconstruction part per epoch
    double initial_recon = 0.0;      // before any update
    double final_recon = 0.0;        // after the last update
    std::optional<std::vector<RefinementSuggestion>> refined;
    std::vector<std::string> labels;
    std::vector<std::string> descriptions;
};

/// Pairwise squared Euclidean distances between rows, clamped at 0.
Matrix squared_distances(const Matrix& x, const Matrix& y);

/// Row-normalized entropic transport between documents and topics with
/// uniform marginals. Rows listed in `empty_docs` are set to 1/K.
Matrix doc_topic(const Matrix& doc_embeddings, const Matrix& topics, double eps, const std::set<std::size_t>& empty_docs = {},
                 int max_iters = 200, double tol = 1e-6);

/// Row-normalized entropic transport between topics and words.
Matrix topic_word(const Matrix& topics, const Matrix& words, double eps, int max_iters = 200, double tol = 1e-6);

/// Rows of the bag-of-words matrix scaled to sum to one (empty rows stay zero).
SparseMatrix normalize_bow(const SparseMatrix& bow);

/// -(1/N) sum_i sum_v xhat_iv log(max((theta beta)_iv, 1e-12)).
double recon_loss(const SparseMatrix& bow_normalized, const Matrix& theta, const Matrix& beta);

/// M words of beta_k by descending weight, ties by word.
std::vector<std::string> top_words(const Eigen::Ref<const Vector>& beta_k, const std::vector<std::string>& vocab,
                                   std::size_t m = kDefaultTopM);
std::vector<WordId> top_word_ids(const Eigen::Ref<const Vector>& beta_k, const std::vector<std::string>& vocab,
                                 std::size_t m = kDefaultTopM);

std::vector<std::vector<std::string>> all_top_words(const Matrix& beta, const std::vector<std::string>& vocab,
                                                    std::size_t m = kDefaultTopM);

enum class GradientMode {
    /// Potentials treated as constants: gradients flow only through the kernel.
    FrozenPotentials,
    /// Potentials follow the cost through the marginal constraints (implicit
    /// differentiation of the converged transport plan).
    Implicit,
};

/// dL/dcost for prob = softmax_rows((g - cost) / eps), given dL/dprob, where g
/// is the column potential of a transport with row weights `a`. In Implicit
/// mode g is differentiated through the constraint prob^T a = const.
Matrix transport_cost_grad(const Matrix& prob, const Matrix& grad_prob, const Vector& a, double eps, GradientMode mode);

/// Active refinement term for one topic: support = the words shown to the
/// refiner, with a precomputed alignment cost to the refined words.
struct RefinementTerm {
    std::size_t topic = 0;
    std::vector<WordId> support;
    Matrix cost;
    double confidence = 0.0;
};

/// The training loss in terms of the column potentials g_dt (length K) and
/// g_tw (length V):
///   theta_i = softmax_k((g_dt_k - |e_i - t_k|^2) / eps_dt)
///   beta_k  = softmax_v((g_tw_v - |t_k - w_v|^2) / eps_tw)
///   L = recon(theta, beta) + lambda sum_k c_k OT_k(beta_k restricted to support)
/// FrozenPotentials gives the exact gradient of this function with g fixed.
/// Implicit gives the gradient when g is the converged Sinkhorn potential of
/// (T, W), so that the uniform topic and word marginals are kept; training
/// uses this one.
class SurrogateObjective {
public:
    SurrogateObjective(const Matrix& doc_embeddings, const SparseMatrix& bow_normalized, std::set<std::size_t> empty_docs,
                       const ModelConfig& config);

    void set_refinement(std::vector<RefinementTerm> terms, double lambda, RefineConfig refine_config);

    struct Evaluation {
        double total = 0.0;
        double recon = 0.0;
        double refine = 0.0; // sum_k c_k L_k, before lambda
        Matrix theta;
        Matrix beta;
        Matrix grad_topics;
        Matrix grad_words;
    };

    Evaluation evaluate(const Matrix& topics, const Matrix& words, const Vector& g_dt, const Vector& g_tw,
                        bool with_gradient, GradientMode mode = GradientMode::Implicit) const;

private:
    const Matrix& docs_;
    const SparseMatrix& bow_;
    std::set<std::size_t> empty_docs_;
    ModelConfig config_;
    std::vector<RefinementTerm> terms_;
    double lambda_ = 0.0;
    RefineConfig refine_config_;
};

struct FitOptions {
    Refiner* refiner = nullptr; // null: no refinement, fallback labels
    RefineConfig refine;
    /// Fixed embeddings for the refinement cost; defaults to the word init.
    const WordEmbeddings* refine_embeddings = nullptr;
    /// Called once per epoch with (epoch, total loss); may be empty.
    std::function<void(int, double)> progress;
};

/// k-means++ seeding followed by Lloyd iterations over the rows of `points`.
Matrix kmeans_init(const Matrix& points, int k, Rng& rng, int lloyd_iters);

FitResult fit(const Corpus& corpus, const DocEmbeddings& doc_embeddings, const WordEmbeddings& word_init,
              const ModelConfig& config, const FitOptions& options = {});

/// Document-topic proportions for new documents with the fitted topics frozen.
Matrix transform(const TopicModel& model, const DocEmbeddings& doc_embeddings, const std::set<std::size_t>& empty_docs = {});

/// Unit-norm copy of word embeddings; zero rows stay zero.
Matrix normalized_word_init(const Matrix& words);

} // namespace lxtopic
