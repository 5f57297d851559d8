#pragma once

#include "lxtopic/corpus.hpp"
#include "lxtopic/svd.hpp"
#include "lxtopic/types.hpp"

#include <string>

namespace lxtopic {

inline constexpr int kDefaultEmbedDim = 64;
inline constexpr std::size_t kDefaultPpmiWindow = 10;

/// N x H, unit rows.
struct DocEmbeddings {
    Matrix matrix;
    Eigen::Index dim() const { return matrix.cols(); }
};

/// V x H in vocabulary order. Words without co-occurrences have zero rows.
struct WordEmbeddings {
    Matrix matrix;
    Eigen::Index dim() const { return matrix.cols(); }
};

/// TF-IDF weighting plus the right singular basis, so held-out documents can
/// be folded into the same space as the training corpus.
struct LsaProjection {
    Vector idf;        // log(N / df), zero for words absent from the fit corpus
    Matrix components; // V x H
};

LsaProjection fit_lsa(const Corpus& c, int h, const SvdOptions& svd = {});

/// Row i: normalize(tfidf(doc i) * components); zero rows become 1/sqrt(H).
DocEmbeddings project_documents(const LsaProjection& projection, const Corpus& c);

/// fit_lsa followed by project_documents.
DocEmbeddings embed_documents_lsa(const Corpus& c, int h, const SvdOptions& svd = {});

/// Windowed PPMI matrix, V x V sparse symmetric with a zero diagonal.
SparseMatrix ppmi_matrix(const Corpus& c, std::size_t window);

WordEmbeddings embed_words_ppmi(const Corpus& c, int h, std::size_t window, const SvdOptions& svd = {});

/// Reads a headerless CSV of reals. Document rows are L2-normalized.
DocEmbeddings load_doc_embeddings(const std::string& path, std::size_t expected_rows);
WordEmbeddings load_word_embeddings(const std::string& path, std::size_t expected_rows);

/// Normalizes each row in place; zero rows get the uniform direction.
void normalize_rows(Matrix& m);

} // namespace lxtopic
