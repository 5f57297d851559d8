#include "lxtopic/model.hpp"

#include "lxtopic/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lxtopic {

void ModelConfig::validate() const {
    if (num_topics < 1) throw Error(ErrorCode::InvalidConfig, "fit", "K must be >= 1");
    if (!(eps_dt > 0.0) || !(eps_tw > 0.0)) throw Error(ErrorCode::InvalidConfig, "fit", "eps values must be positive");
    if (epochs < 0 || warmup_epochs < 0 || warmup_epochs > epochs) {
        throw Error(ErrorCode::InvalidConfig, "fit", "need 0 <= warmup_epochs <= epochs");
    }
    if (!(lr > 0.0)) throw Error(ErrorCode::InvalidConfig, "fit", "lr must be positive");
    if (sinkhorn_iters < 1 || !(sinkhorn_tol > 0.0)) throw Error(ErrorCode::InvalidConfig, "fit", "bad Sinkhorn settings");
}

Matrix squared_distances(const Matrix& x, const Matrix& y) {
    const Vector xn = x.rowwise().squaredNorm();
    const Vector yn = y.rowwise().squaredNorm();
    Matrix d = -2.0 * (x * y.transpose());
    d.colwise() += xn;
    d.rowwise() += yn.transpose();
    return d.cwiseMax(0.0);
}

namespace {

// Row-wise softmax of (g_j - cost_ij) / eps: the row-normalized plan for
// column potential g.
Matrix softmax_rows(const Matrix& cost, const Vector& g, double eps) {
    Matrix out(cost.rows(), cost.cols());
    for (Eigen::Index i = 0; i < cost.rows(); ++i) {
        double hi = -std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < cost.cols(); ++j) hi = std::max(hi, g(j) - cost(i, j));
        double sum = 0.0;
        for (Eigen::Index j = 0; j < cost.cols(); ++j) {
            const double e = std::exp((g(j) - cost(i, j) - hi) / eps);
            out(i, j) = e;
            sum += e;
        }
        out.row(i) /= sum;
    }
    return out;
}

Vector uniform(Eigen::Index n) { return Vector::Constant(n, 1.0 / static_cast<double>(n)); }

void set_uniform_rows(Matrix& theta, const std::set<std::size_t>& rows) {
    const double u = 1.0 / static_cast<double>(theta.cols());
    for (std::size_t i : rows) {
        if (static_cast<Eigen::Index>(i) < theta.rows()) theta.row(static_cast<Eigen::Index>(i)).setConstant(u);
    }
}

// Backward pass of softmax rows: returns dL/dcost given dL/dprob.
Matrix softmax_cost_grad(const Matrix& prob, const Matrix& grad_prob, double eps) {
    Matrix out(prob.rows(), prob.cols());
    for (Eigen::Index i = 0; i < prob.rows(); ++i) {
        const double inner = prob.row(i).dot(grad_prob.row(i));
        for (Eigen::Index j = 0; j < prob.cols(); ++j) out(i, j) = -prob(i, j) * (grad_prob(i, j) - inner) / eps;
    }
    return out;
}

// Solves (diag(s) - Theta^T A Theta) x = r for r orthogonal to the ones
// vector, the null direction of that PSD matrix. Adding c 11^T makes it
// definite without changing the solution. With many columns the system is
// reduced to rows + 1 unknowns by the Woodbury identity.
Vector solve_marginal_system(const Matrix& prob, const Vector& a, const Vector& r) {
    const Eigen::Index m = prob.rows();
    const Eigen::Index n = prob.cols();
    const Vector s = (prob.transpose() * a).cwiseMax(1e-300);
    const double c = s.mean();
    if (n <= m + 1) {
        Matrix sys = -(prob.transpose() * a.asDiagonal() * prob);
        sys.diagonal() += s;
        sys.array() += c;
        return sys.ldlt().solve(r);
    }
    Matrix w(m + 1, n);
    w.topRows(m) = a.cwiseSqrt().asDiagonal() * prob;
    w.row(m).setConstant(std::sqrt(c));
    const Vector s_inv = s.cwiseInverse();
    Matrix inner = w * s_inv.asDiagonal() * w.transpose();
    inner.diagonal().head(m).array() -= 1.0;
    inner(m, m) += 1.0;
    const Vector sr = s_inv.cwiseProduct(r);
    const Vector y = inner.partialPivLu().solve(w * sr);
    return sr - s_inv.cwiseProduct(w.transpose() * y);
}

} // namespace

Matrix transport_cost_grad(const Matrix& prob, const Matrix& grad_prob, const Vector& a, double eps, GradientMode mode) {
    Matrix out = softmax_cost_grad(prob, grad_prob, eps);
    if (mode == GradientMode::FrozenPotentials) return out;
    // The column potential moves with the cost to keep prob^T a = b; its
    // adjoint lambda solves the linearized marginal equation.
    const Vector h = -out.colwise().sum().transpose();
    const Vector lambda = solve_marginal_system(prob, a, eps * h);
    const Vector mean_lambda = prob * lambda;
    for (Eigen::Index i = 0; i < prob.rows(); ++i) {
        const double scale = a(i) / eps;
        for (Eigen::Index j = 0; j < prob.cols(); ++j) out(i, j) += scale * prob(i, j) * (lambda(j) - mean_lambda(i));
    }
    return out;
}

namespace {

} // namespace

Matrix doc_topic(const Matrix& doc_embeddings, const Matrix& topics, double eps, const std::set<std::size_t>& empty_docs,
                 int max_iters, double tol) {
    if (doc_embeddings.cols() != topics.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "doc_topic", "document and topic embedding dimensions differ");
    }
    const Matrix cost = squared_distances(doc_embeddings, topics);
    const SinkhornDuals d =
        sinkhorn_duals(cost, uniform(cost.rows()), uniform(cost.cols()), {eps, max_iters, tol, nullptr});
    Matrix theta = softmax_rows(cost, d.g, eps);
    set_uniform_rows(theta, empty_docs);
    return theta;
}

Matrix topic_word(const Matrix& topics, const Matrix& words, double eps, int max_iters, double tol) {
    if (words.cols() != topics.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "topic_word", "word and topic embedding dimensions differ");
    }
    const Matrix cost = squared_distances(topics, words);
    const SinkhornDuals d =
        sinkhorn_duals(cost, uniform(cost.rows()), uniform(cost.cols()), {eps, max_iters, tol, nullptr});
    return softmax_rows(cost, d.g, eps);
}

SparseMatrix normalize_bow(const SparseMatrix& bow) {
    SparseMatrix out = bow;
    for (Eigen::Index i = 0; i < out.outerSize(); ++i) {
        double sum = 0.0;
        for (SparseMatrix::InnerIterator it(out, i); it; ++it) sum += it.value();
        if (sum <= 0.0) continue;
        for (SparseMatrix::InnerIterator it(out, i); it; ++it) it.valueRef() /= sum;
    }
    return out;
}

namespace {

// Loss plus optional gradients w.r.t. theta and beta.
double recon_with_grad(const SparseMatrix& x, const Matrix& theta, const Matrix& beta, Matrix* grad_theta,
                       Matrix* grad_beta) {
    if (x.rows() != theta.rows() || x.cols() != beta.cols() || theta.cols() != beta.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "recon_loss", "shapes of bow, theta and beta disagree");
    }
    const double n = static_cast<double>(x.rows());
    const Matrix beta_t = beta.transpose(); // V x K, contiguous per word
    Matrix grad_beta_t;
    if (grad_theta) grad_theta->setZero(theta.rows(), theta.cols());
    if (grad_beta) grad_beta_t.setZero(beta_t.rows(), beta_t.cols());
    double loss = 0.0;
    for (Eigen::Index i = 0; i < x.outerSize(); ++i) {
        for (SparseMatrix::InnerIterator it(x, i); it; ++it) {
            const Eigen::Index v = it.col();
            const double p = theta.row(i).dot(beta_t.row(v));
            loss -= it.value() * std::log(std::max(p, kProbFloor));
            if (p <= kProbFloor) continue;
            const double g = -it.value() / (n * p);
            if (grad_theta) grad_theta->row(i) += g * beta_t.row(v);
            if (grad_beta) grad_beta_t.row(v) += g * theta.row(i);
        }
    }
    if (grad_beta) *grad_beta = grad_beta_t.transpose();
    return loss / n;
}

} // namespace

double recon_loss(const SparseMatrix& bow_normalized, const Matrix& theta, const Matrix& beta) {
    return recon_with_grad(bow_normalized, theta, beta, nullptr, nullptr);
}

std::vector<WordId> top_word_ids(const Eigen::Ref<const Vector>& beta_k, const std::vector<std::string>& vocab,
                                 std::size_t m) {
    if (static_cast<std::size_t>(beta_k.size()) != vocab.size()) {
        throw Error(ErrorCode::DimensionMismatch, "top_words", "beta row and vocabulary sizes differ");
    }
    m = std::min(m, vocab.size());
    std::vector<WordId> ids(vocab.size());
    std::iota(ids.begin(), ids.end(), 0);
    std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(m), ids.end(), [&](WordId a, WordId b) {
        if (beta_k(a) != beta_k(b)) return beta_k(a) > beta_k(b);
        return vocab[static_cast<std::size_t>(a)] < vocab[static_cast<std::size_t>(b)];
    });
    ids.resize(m);
    return ids;
}

std::vector<std::string> top_words(const Eigen::Ref<const Vector>& beta_k, const std::vector<std::string>& vocab,
                                   std::size_t m) {
    std::vector<std::string> out;
    for (WordId id : top_word_ids(beta_k, vocab, m)) out.push_back(vocab[static_cast<std::size_t>(id)]);
    return out;
}

std::vector<std::vector<std::string>> all_top_words(const Matrix& beta, const std::vector<std::string>& vocab,
                                                    std::size_t m) {
    std::vector<std::vector<std::string>> out;
    out.reserve(static_cast<std::size_t>(beta.rows()));
    for (Eigen::Index k = 0; k < beta.rows(); ++k) out.push_back(top_words(beta.row(k).transpose(), vocab, m));
    return out;
}

SurrogateObjective::SurrogateObjective(const Matrix& doc_embeddings, const SparseMatrix& bow_normalized,
                                       std::set<std::size_t> empty_docs, const ModelConfig& config)
    : docs_(doc_embeddings), bow_(bow_normalized), empty_docs_(std::move(empty_docs)), config_(config) {}

void SurrogateObjective::set_refinement(std::vector<RefinementTerm> terms, double lambda, RefineConfig refine_config) {
    terms_ = std::move(terms);
    lambda_ = lambda;
    refine_config_ = refine_config;
}

SurrogateObjective::Evaluation SurrogateObjective::evaluate(const Matrix& topics, const Matrix& words,
                                                            const Vector& g_dt, const Vector& g_tw,
                                                            bool with_gradient, GradientMode mode) const {
    Evaluation ev;
    const Matrix cost_dt = squared_distances(docs_, topics);
    const Matrix cost_tw = squared_distances(topics, words);
    const Matrix theta_plan = softmax_rows(cost_dt, g_dt, config_.eps_dt);
    ev.theta = theta_plan;
    set_uniform_rows(ev.theta, empty_docs_);
    ev.beta = softmax_rows(cost_tw, g_tw, config_.eps_tw);

    Matrix grad_theta;
    Matrix grad_beta;
    ev.recon = recon_with_grad(bow_, ev.theta, ev.beta, with_gradient ? &grad_theta : nullptr,
                               with_gradient ? &grad_beta : nullptr);

    for (const RefinementTerm& term : terms_) {
        const auto k = static_cast<Eigen::Index>(term.topic);
        Vector p(static_cast<Eigen::Index>(term.support.size()));
        for (std::size_t s = 0; s < term.support.size(); ++s) p(static_cast<Eigen::Index>(s)) = ev.beta(k, term.support[s]);
        const double z = p.sum();
        p /= z;
        const RefineLoss rl = refine_loss(p, term.cost, refine_config_);
        ev.refine += term.confidence * rl.loss;
        if (with_gradient && lambda_ > 0.0) {
            const double centered = p.dot(rl.grad);
            for (std::size_t s = 0; s < term.support.size(); ++s) {
                grad_beta(k, term.support[s]) +=
                    lambda_ * term.confidence * (rl.grad(static_cast<Eigen::Index>(s)) - centered) / z;
            }
        }
    }
    ev.total = ev.recon + lambda_ * ev.refine;
    if (!with_gradient) return ev;

    for (std::size_t i : empty_docs_) {
        if (static_cast<Eigen::Index>(i) < grad_theta.rows()) grad_theta.row(static_cast<Eigen::Index>(i)).setZero();
    }
    // d|a - b|^2 / da = 2 (a - b)
    const Matrix dc_dt = transport_cost_grad(theta_plan, grad_theta, uniform(theta_plan.rows()), config_.eps_dt, mode);
    const Matrix dc_tw = transport_cost_grad(ev.beta, grad_beta, uniform(ev.beta.rows()), config_.eps_tw, mode);

    const Vector dt_col = dc_dt.colwise().sum().transpose();
    const Vector tw_row = dc_tw.rowwise().sum();
    const Vector tw_col = dc_tw.colwise().sum().transpose();

    ev.grad_topics = 2.0 * (dt_col.asDiagonal() * topics - dc_dt.transpose() * docs_);
    ev.grad_topics += 2.0 * (tw_row.asDiagonal() * topics - dc_tw * words);
    ev.grad_words = 2.0 * (tw_col.asDiagonal() * words - dc_tw.transpose() * topics);
    return ev;
}

Matrix kmeans_init(const Matrix& points, int k, Rng& rng, int lloyd_iters) {
    const Eigen::Index n = points.rows();
    if (k < 1 || k > n) {
        throw Error(ErrorCode::TooManyTopics, "fit", "K=" + std::to_string(k) + " exceeds " + std::to_string(n) + " documents");
    }
    Matrix centers(k, points.cols());
    std::size_t first = rng.index(static_cast<std::size_t>(n));
    centers.row(0) = points.row(static_cast<Eigen::Index>(first));
    Vector d2 = (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (int c = 1; c < k; ++c) {
        const double total = d2.sum();
        Eigen::Index pick = 0;
        if (total <= 0.0) {
            pick = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(n)));
        } else {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            pick = n - 1;
            for (Eigen::Index i = 0; i < n; ++i) {
                acc += d2(i);
                if (acc > target) {
                    pick = i;
                    break;
                }
            }
        }
        centers.row(c) = points.row(pick);
        d2 = d2.cwiseMin((points.rowwise() - centers.row(c)).rowwise().squaredNorm());
    }

    std::vector<Eigen::Index> assign(static_cast<std::size_t>(n), -1);
    for (int it = 0; it < lloyd_iters; ++it) {
        const Matrix dist = squared_distances(points, centers);
        bool changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::Index best = 0;
            dist.row(i).minCoeff(&best);
            if (assign[static_cast<std::size_t>(i)] != best) {
                assign[static_cast<std::size_t>(i)] = best;
                changed = true;
            }
        }
        if (!changed) break;
        Matrix sums = Matrix::Zero(k, points.cols());
        std::vector<int> counts(static_cast<std::size_t>(k), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            sums.row(assign[static_cast<std::size_t>(i)]) += points.row(i);
            ++counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) centers.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
        }
    }
    return centers;
}

Matrix normalized_word_init(const Matrix& words) {
    Matrix out = words;
    for (Eigen::Index v = 0; v < out.rows(); ++v) {
        const double norm = out.row(v).norm();
        if (norm > 0.0) out.row(v) /= norm;
    }
    return out;
}

namespace {

struct Adam {
    Matrix m;
    Matrix v;

    explicit Adam(const Matrix& like) : m(Matrix::Zero(like.rows(), like.cols())), v(Matrix::Zero(like.rows(), like.cols())) {}

    void step(Matrix& param, const Matrix& grad, const ModelConfig& c, int t) {
        m = c.beta1 * m + (1.0 - c.beta1) * grad;
        v = c.beta2 * v + (1.0 - c.beta2) * grad.cwiseProduct(grad);
        const double bc1 = 1.0 - std::pow(c.beta1, t);
        const double bc2 = 1.0 - std::pow(c.beta2, t);
        param.array() -= c.lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + c.adam_eps);
    }
};

std::vector<RefinementTerm> build_terms(const std::vector<RefinementSuggestion>& suggestions, const Corpus& corpus,
                                        const Matrix& cost_embeddings) {
    std::vector<RefinementTerm> terms;
    for (const auto& s : suggestions) {
        if (s.source == SuggestionSource::Skipped) continue;
        RefinementTerm term;
        term.topic = s.topic_id;
        term.confidence = s.confidence;
        std::vector<WordId> refined;
        for (const auto& w : s.original_words) {
            if (auto id = corpus.word_id(w)) term.support.push_back(*id);
        }
        for (const auto& w : s.refined_words) {
            if (auto id = corpus.word_id(w)) refined.push_back(*id);
        }
        if (term.support.size() < 2 || refined.size() < 2) continue;
        term.cost = refine_cost(term.support, refined, cost_embeddings);
        terms.push_back(std::move(term));
    }
    return terms;
}

} // namespace

FitResult fit(const Corpus& corpus, const DocEmbeddings& doc_embeddings, const WordEmbeddings& word_init,
              const ModelConfig& config, const FitOptions& options) {
    config.validate();
    options.refine.validate();
    const Eigen::Index n = static_cast<Eigen::Index>(corpus.num_docs());
    const Eigen::Index v = static_cast<Eigen::Index>(corpus.vocab_size());
    if (doc_embeddings.matrix.rows() != n) {
        throw Error(ErrorCode::DimensionMismatch, "fit", "one document embedding per document required");
    }
    if (word_init.matrix.rows() != v) throw Error(ErrorCode::DimensionMismatch, "fit", "one word embedding per word required");
    if (word_init.dim() != doc_embeddings.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "fit", "document and word embedding dimensions differ");
    }
    if (config.num_topics > n) {
        throw Error(ErrorCode::TooManyTopics, "fit",
                    "K=" + std::to_string(config.num_topics) + " exceeds " + std::to_string(n) + " documents");
    }

    FitResult result;
    Rng rng(config.seed);
    TopicModel& model = result.model;
    model.config = config;
    model.topics = kmeans_init(doc_embeddings.matrix, config.num_topics, rng, config.kmeans_iters);
    model.words = normalized_word_init(word_init.matrix);
    const Matrix& cost_embeddings = options.refine_embeddings ? options.refine_embeddings->matrix : word_init.matrix;

    const SparseMatrix bow = normalize_bow(corpus.bow);
    SurrogateObjective objective(doc_embeddings.matrix, bow, corpus.empty_docs, config);

    auto cold_theta = [&] {
        return doc_topic(doc_embeddings.matrix, model.topics, config.eps_dt, corpus.empty_docs, config.sinkhorn_iters,
                         config.sinkhorn_tol);
    };
    auto cold_beta = [&] {
        return topic_word(model.topics, model.words, config.eps_tw, config.sinkhorn_iters, config.sinkhorn_tol);
    };
    result.initial_recon = recon_loss(bow, cold_theta(), cold_beta());

    const Vector a_docs = uniform(n);
    const Vector b_topics = uniform(config.num_topics);
    const Vector b_words = uniform(v);
    Vector g_dt = Vector::Zero(config.num_topics);
    Vector g_tw = Vector::Zero(v);
    Adam adam_topics(model.topics);
    Adam adam_words(model.words);
    std::vector<RefinementSuggestion> suggestions;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const Matrix cost_dt = squared_distances(doc_embeddings.matrix, model.topics);
        const Matrix cost_tw = squared_distances(model.topics, model.words);
        g_dt = sinkhorn_duals(cost_dt, a_docs, b_topics, {config.eps_dt, config.sinkhorn_iters, config.sinkhorn_tol, &g_dt}).g;
        g_tw = sinkhorn_duals(cost_tw, b_topics, b_words, {config.eps_tw, config.sinkhorn_iters, config.sinkhorn_tol, &g_tw}).g;

        const bool refining = options.refiner && epoch >= config.warmup_epochs;
        if (refining && (epoch - config.warmup_epochs) % options.refine.interval_epochs == 0) {
            const Matrix beta = softmax_rows(cost_tw, g_tw, config.eps_tw);
            suggestions = refine_topics(*options.refiner, all_top_words(beta, corpus.vocab, options.refine.top_m),
                                        corpus.vocab, options.refine.concurrency_limit);
            objective.set_refinement(build_terms(suggestions, corpus, cost_embeddings), options.refine.lambda,
                                     options.refine);
        }

        const auto ev = objective.evaluate(model.topics, model.words, g_dt, g_tw, true);
        result.loss_trace.push_back(ev.total);
        result.recon_trace.push_back(ev.recon);
        if (options.progress) options.progress(epoch, ev.total);

        adam_topics.step(model.topics, ev.grad_topics, config, epoch + 1);
        adam_words.step(model.words, ev.grad_words, config, epoch + 1);
    }

    result.theta = cold_theta();
    result.beta = cold_beta();
    result.final_recon = recon_loss(bow, result.theta, result.beta);

    const auto final_words = all_top_words(result.beta, corpus.vocab, options.refine.top_m);
    if (options.refiner) {
        result.refined = refine_topics(*options.refiner, final_words, corpus.vocab, options.refine.concurrency_limit);
        for (const auto& s : *result.refined) {
            result.labels.push_back(s.label);
            const auto& words = s.refined_words.empty() ? s.original_words : s.refined_words;
            result.descriptions.push_back(describe_topic(s.label, words, options.refiner));
        }
    } else {
        for (const auto& words : final_words) {
            result.labels.push_back(fallback_label(words));
            result.descriptions.push_back(template_description(words));
        }
    }
    return result;
}

Matrix transform(const TopicModel& model, const DocEmbeddings& doc_embeddings, const std::set<std::size_t>& empty_docs) {
    if (doc_embeddings.dim() != model.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "transform",
                    "embedding dimension " + std::to_string(doc_embeddings.dim()) + " != model dimension " +
                        std::to_string(model.dim()));
    }
    return doc_topic(doc_embeddings.matrix, model.topics, model.config.eps_dt, empty_docs, model.config.sinkhorn_iters,
                     model.config.sinkhorn_tol);
}

} // namespace lxtopic
