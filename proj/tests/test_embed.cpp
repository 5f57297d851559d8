#include "lxtopic/embed.hpp"
#include "lxtopic/error.hpp"
#include "lxtopic/svd.hpp"

#include "tempdir.hpp"

#include <Eigen/SVD>
#include <doctest.h>

#include <cmath>

using namespace lxtopic;
using lxtopic::testing::TempDir;

namespace {

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
    return m;
}

Matrix rank_r(Eigen::Index rows, Eigen::Index cols, int r, Rng& rng) {
    return random_matrix(rows, r, rng) * random_matrix(r, cols, rng);
}

Corpus corpus_of(const std::vector<std::string>& texts) {
    RawCorpus raw;
    for (std::size_t i = 0; i < texts.size(); ++i) raw.records.push_back({i, texts[i], std::nullopt});
    PreprocessConfig cfg;
    cfg.stopwords.clear();
    return preprocess(raw, cfg);
}

const std::vector<std::string> kTexts = {
    "apple banana cherry apple", "banana cherry durian", "apple cherry elder fig",   "durian elder fig fig",
    "apple banana fig",          "cherry durian elder",  "banana banana elder fig",  "apple durian cherry"};

} // namespace

TEST_CASE("truncated_svd reconstructs low-rank matrices like a Jacobi SVD") {
    Rng rng(11);
    for (Eigen::Index n : {2, 5, 8, 13, 20}) {
        for (int r : {1, 2, 4}) {
            if (r > n) continue;
            const Matrix a = rank_r(n, n + 3 > 20 ? 20 : n + 3, r, rng);
            const TruncatedSvd s = truncated_svd(a, r);
            const Matrix recon = s.U * s.S.asDiagonal() * s.V.transpose();
            CHECK((recon - a).norm() / a.norm() <= 1e-6);

            Eigen::JacobiSVD<Eigen::MatrixXd> oracle(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
            for (int k = 0; k < r; ++k) CHECK(s.S(k) == doctest::Approx(oracle.singularValues()(k)).epsilon(1e-8));
            // Orthonormal right basis
            CHECK((s.V.transpose() * s.V - Matrix::Identity(r, r)).norm() <= 1e-9);
        }
    }
}

TEST_CASE("truncated_svd singular vectors match the oracle up to the sign convention") {
    Rng rng(5);
    Matrix a = random_matrix(12, 9, rng);
    const TruncatedSvd s = truncated_svd(a, 3, {0x5eed, 500, 1e-13});
    Eigen::JacobiSVD<Eigen::MatrixXd> oracle(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    for (int k = 0; k < 3; ++k) {
        Eigen::VectorXd v = oracle.matrixV().col(k);
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0) v = -v;
        CHECK((s.V.col(k) - v).norm() <= 1e-6);
    }
}

TEST_CASE("truncated_svd on a rank-1 matrix gives rows equal up to sign") {
    Rng rng(3);
    Matrix a = random_matrix(8, 1, rng) * random_matrix(1, 8, rng);
    const TruncatedSvd s = truncated_svd(a, 1);
    Matrix emb = s.U * s.S.asDiagonal();
    normalize_rows(emb);
    for (Eigen::Index i = 1; i < emb.rows(); ++i) CHECK(std::abs(std::abs(emb(i, 0)) - 1.0) <= 1e-12);
}

TEST_CASE("truncated_svd rejects impossible ranks and is deterministic") {
    Rng rng(1);
    const Matrix a = random_matrix(4, 6, rng);
    CHECK_THROWS_AS(truncated_svd(a, 5), Error);
    CHECK_THROWS_AS(truncated_svd(a, 0), Error);
    const TruncatedSvd x = truncated_svd(a, 3);
    const TruncatedSvd y = truncated_svd(a, 3);
    CHECK(x.V == y.V);
    CHECK(x.U == y.U);
}

TEST_CASE("LSA embeddings match a dense oracle pipeline") {
    const Corpus c = corpus_of(kTexts);
    const int h = 3;
    const DocEmbeddings e = embed_documents_lsa(c, h);
    REQUIRE(e.matrix.rows() == 8);
    REQUIRE(e.dim() == h);

    // Independent oracle: dense TF-IDF, Jacobi SVD, projection, normalization.
    const Eigen::Index n = static_cast<Eigen::Index>(c.num_docs());
    const Eigen::Index v = static_cast<Eigen::Index>(c.vocab_size());
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, v);
    for (Eigen::Index i = 0; i < n; ++i)
        for (WordId w : c.docs[static_cast<std::size_t>(i)]) counts(i, w) += 1.0;
    Eigen::MatrixXd tfidf(n, v);
    for (Eigen::Index w = 0; w < v; ++w) {
        const double df = (counts.col(w).array() > 0).count();
        for (Eigen::Index i = 0; i < n; ++i) tfidf(i, w) = std::log(1.0 + counts(i, w)) * std::log(n / df);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> oracle(tfidf, Eigen::ComputeThinV);
    for (int k = 0; k < h; ++k) {
        Eigen::VectorXd comp = oracle.matrixV().col(k);
        Eigen::Index arg = 0;
        comp.cwiseAbs().maxCoeff(&arg);
        if (comp(arg) < 0) comp = -comp;
        Eigen::VectorXd proj = tfidf * comp;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double norm = (tfidf.row(i) * oracle.matrixV().leftCols(h)).norm();
            CHECK(e.matrix(i, k) == doctest::Approx(proj(i) / norm).epsilon(1e-6));
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) CHECK(std::abs(e.matrix.row(i).norm() - 1.0) <= 1e-9);
}

TEST_CASE("LSA maps empty documents to the uniform direction and checks H") {
    std::vector<std::string> texts = kTexts;
    texts.push_back("!!!");
    const Corpus c = corpus_of(texts);
    const DocEmbeddings e = embed_documents_lsa(c, 4);
    CHECK((e.matrix.row(8).transpose() - Vector::Constant(4, 0.5)).norm() <= 1e-12);
    CHECK_THROWS_AS(embed_documents_lsa(c, static_cast<int>(c.vocab_size()) + 1), Error);
    try {
        embed_documents_lsa(c, static_cast<int>(c.vocab_size()) + 1);
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::DimensionTooLarge);
    }
}

TEST_CASE("PPMI of a pair filling every window it occurs in is log 2") {
    const Corpus c = corpus_of({"alpha beta", "alpha beta", "gamma delta", "gamma delta"});
    const SparseMatrix m = ppmi_matrix(c, 10);
    const WordId a = *c.word_id("alpha");
    const WordId b = *c.word_id("beta");
    CHECK(m.coeff(a, b) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(m.coeff(b, a) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(m.coeff(a, a) == 0.0);
    CHECK(m.coeff(a, *c.word_id("gamma")) == 0.0);
}

TEST_CASE("words without co-occurrences get zero embeddings") {
    const Corpus c = corpus_of({"alpha beta", "alpha beta", "gamma", "gamma", "delta beta"});
    const WordEmbeddings w = embed_words_ppmi(c, 2, 10);
    CHECK(w.matrix.row(*c.word_id("gamma")).norm() == 0.0);
    const Vector a = w.matrix.row(*c.word_id("alpha")).transpose();
    CHECK(a.norm() > 0.0);
    CHECK(a.dot(a) / (a.norm() * a.norm()) == doctest::Approx(1.0));
    CHECK(w.matrix.allFinite());
}

TEST_CASE("embedding loaders validate shape and values") {
    TempDir dir;
    const auto ok = dir.write("ok.csv", "3,4\n1,0\n0,2\n");
    const DocEmbeddings d = load_doc_embeddings(ok, 3);
    CHECK(d.matrix.rows() == 3);
    CHECK(d.matrix(0, 0) == doctest::Approx(0.6));
    CHECK(d.matrix(2, 1) == doctest::Approx(1.0));
    const WordEmbeddings w = load_word_embeddings(ok, 3);
    CHECK(w.matrix(0, 0) == 3.0);

    auto code = [](const std::function<void()>& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::IoError;
    };
    CHECK(code([&] { load_doc_embeddings(ok, 4); }) == ErrorCode::RowCountMismatch);
    const auto nan = dir.write("nan.csv", "1,2\nNaN,3\n");
    CHECK(code([&] { load_word_embeddings(nan, 2); }) == ErrorCode::NonFiniteValue);
    const auto bad = dir.write("bad.csv", "1,2\nx,3\n");
    CHECK(code([&] { load_word_embeddings(bad, 2); }) == ErrorCode::MalformedCsv);
}

TEST_CASE("embeddings are bitwise reproducible") {
    const Corpus c = corpus_of(kTexts);
    CHECK(embed_documents_lsa(c, 3).matrix == embed_documents_lsa(c, 3).matrix);
    CHECK(embed_words_ppmi(c, 3, 4).matrix == embed_words_ppmi(c, 3, 4).matrix);
}
