#include "lxtopic/embed.hpp"

#include "lxtopic/cooccurrence.hpp"
#include "lxtopic/csv.hpp"
#include "lxtopic/error.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>

namespace lxtopic {

namespace {

void check_dim(const char* where, int h, Eigen::Index limit) {
    if (h < 1 || h > limit) {
        throw Error(ErrorCode::DimensionTooLarge, where,
                    "embedding dimension " + std::to_string(h) + " must lie in [1, " + std::to_string(limit) + "]");
    }
}

SparseMatrix tfidf(const Corpus& c, const Vector& idf) {
    SparseMatrix m = c.bow;
    for (Eigen::Index i = 0; i < m.outerSize(); ++i) {
        for (SparseMatrix::InnerIterator it(m, i); it; ++it) it.valueRef() = std::log1p(it.value()) * idf(it.col());
    }
    m.prune(0.0);
    return m;
}

Matrix read_matrix(const std::string& path, std::size_t expected_rows, const char* where) {
    const csv::Table table = csv::parse(csv::read_file(path, where), false, where);
    if (table.rows.size() != expected_rows) {
        throw Error(ErrorCode::RowCountMismatch, where,
                    "'" + path + "' has " + std::to_string(table.rows.size()) + " rows, expected " +
                        std::to_string(expected_rows));
    }
    const std::size_t cols = table.rows.empty() ? 0 : table.rows[0].size();
    Matrix m(static_cast<Eigen::Index>(expected_rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        for (std::size_t j = 0; j < cols; ++j) {
            const std::string& cell = table.rows[r][j];
            char* end = nullptr;
            errno = 0;
            const double value = std::strtod(cell.c_str(), &end);
            if (cell.empty() || end == cell.c_str() || *end != '\0') {
                throw Error(ErrorCode::MalformedCsv, where,
                            "line " + std::to_string(table.line_numbers[r]) + ": '" + cell + "' is not a number");
            }
            if (!std::isfinite(value)) {
                throw Error(ErrorCode::NonFiniteValue, where,
                            "line " + std::to_string(table.line_numbers[r]) + ": non-finite value '" + cell + "'");
            }
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = value;
        }
    }
    return m;
}

} // namespace

void normalize_rows(Matrix& m) {
    if (m.cols() == 0) return;
    const double uniform = 1.0 / std::sqrt(static_cast<double>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double norm = m.row(i).norm();
        if (norm > 0.0) {
            m.row(i) /= norm;
        } else {
            m.row(i).setConstant(uniform);
        }
    }
}

LsaProjection fit_lsa(const Corpus& c, int h, const SvdOptions& svd) {
    check_dim("embed_documents_lsa", h, std::min<Eigen::Index>(c.bow.rows(), c.bow.cols()));
    const Eigen::Index v = c.bow.cols();
    Vector df = Vector::Zero(v);
    for (Eigen::Index i = 0; i < c.bow.outerSize(); ++i) {
        for (SparseMatrix::InnerIterator it(c.bow, i); it; ++it) {
            if (it.value() > 0.0) df(it.col()) += 1.0;
        }
    }
    LsaProjection p;
    p.idf = Vector::Zero(v);
    const double n = static_cast<double>(c.bow.rows());
    for (Eigen::Index w = 0; w < v; ++w) {
        if (df(w) > 0.0) p.idf(w) = std::log(n / df(w));
    }
    const TruncatedSvd result = truncated_svd(tfidf(c, p.idf), h, svd);
    p.components = result.V;
    return p;
}

DocEmbeddings project_documents(const LsaProjection& projection, const Corpus& c) {
    if (projection.idf.size() != c.bow.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "project_documents", "vocabulary size differs from projection");
    }
    DocEmbeddings out;
    out.matrix = tfidf(c, projection.idf) * projection.components;
    normalize_rows(out.matrix);
    return out;
}

DocEmbeddings embed_documents_lsa(const Corpus& c, int h, const SvdOptions& svd) {
    return project_documents(fit_lsa(c, h, svd), c);
}

SparseMatrix ppmi_matrix(const Corpus& c, std::size_t window) {
    const WindowStats stats = count_windows(c.docs, c.vocab_size(), window);
    const auto v = static_cast<Eigen::Index>(c.vocab_size());
    SparseMatrix m(v, v);
    if (stats.num_windows == 0) return m;
    const double total = static_cast<double>(stats.num_windows);
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(stats.pair_windows.size() * 2);
    for (const auto& [key, count] : stats.pair_windows) {
        const auto i = static_cast<Eigen::Index>(key >> 32);
        const auto j = static_cast<Eigen::Index>(key & 0xffffffffu);
        const double pmi = std::log(static_cast<double>(count) * total /
                                    (static_cast<double>(stats.word_windows[static_cast<std::size_t>(i)]) *
                                     static_cast<double>(stats.word_windows[static_cast<std::size_t>(j)])));
        if (pmi > 0.0) {
            triplets.emplace_back(i, j, pmi);
            triplets.emplace_back(j, i, pmi);
        }
    }
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return m;
}

WordEmbeddings embed_words_ppmi(const Corpus& c, int h, std::size_t window, const SvdOptions& svd) {
    if (window < 1) throw Error(ErrorCode::InvalidConfig, "embed_words_ppmi", "window must be >= 1");
    check_dim("embed_words_ppmi", h, static_cast<Eigen::Index>(c.vocab_size()));
    const SparseMatrix ppmi = ppmi_matrix(c, window);
    WordEmbeddings out;
    if (ppmi.nonZeros() == 0) {
        out.matrix = Matrix::Zero(ppmi.rows(), h);
        return out;
    }
    const TruncatedSvd result = truncated_svd(ppmi, h, svd);
    // M V = U S; zero PPMI rows stay exactly zero.
    out.matrix = ppmi * result.V;
    return out;
}

DocEmbeddings load_doc_embeddings(const std::string& path, std::size_t expected_rows) {
    DocEmbeddings out{read_matrix(path, expected_rows, "load_embeddings")};
    normalize_rows(out.matrix);
    return out;
}

WordEmbeddings load_word_embeddings(const std::string& path, std::size_t expected_rows) {
    return WordEmbeddings{read_matrix(path, expected_rows, "load_embeddings")};
}

} // namespace lxtopic
