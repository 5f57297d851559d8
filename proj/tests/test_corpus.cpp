#include "lxtopic/corpus.hpp"
#include "lxtopic/error.hpp"

#include "tempdir.hpp"

#include <doctest.h>

#include <numeric>

using namespace lxtopic;
using lxtopic::testing::TempDir;

namespace {

RawCorpus raw_of(const std::vector<std::string>& texts) {
    RawCorpus raw;
    for (std::size_t i = 0; i < texts.size(); ++i) raw.records.push_back({i, texts[i], std::nullopt});
    return raw;
}

PreprocessConfig no_stopwords(std::size_t min_df = 2) {
    PreprocessConfig cfg;
    cfg.stopwords.clear();
    cfg.min_df = min_df;
    return cfg;
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::IoError;
}

} // namespace

TEST_CASE("load_csv keeps rows in file order") {
    TempDir dir;
    const auto path = dir.write("r.csv", "id,review,stars\n1,great phone,5\n2,\"bad, slow\",1\n");
    const RawCorpus raw = load_csv(path, "review", std::string("stars"));
    REQUIRE(raw.size() == 2);
    CHECK(raw.records[0].text == "great phone");
    CHECK(raw.records[1].text == "bad, slow");
    CHECK(raw.records[1].doc_id == 1);
    CHECK(raw.records[0].label == std::optional<std::string>("5"));
    CHECK(raw.has_labels());
}

TEST_CASE("load_csv enforces the size limit") {
    TempDir dir;
    std::string big = "text\n";
    const std::string line = "lorem ipsum dolor sit amet consectetur\n";
    while (big.size() <= (6u << 20)) big += line;
    const auto path = dir.write("big.csv", big);
    CHECK(code_of([&] { load_csv(path, "text", std::nullopt, 5u << 20); }) == ErrorCode::FileTooLarge);
    CHECK_NOTHROW(load_csv(path, "text", std::nullopt, 7u << 20));
}

TEST_CASE("load_csv reports missing columns and unreadable files") {
    TempDir dir;
    const auto path = dir.write("r.csv", "review\nhello\n");
    CHECK(code_of([&] { load_csv(path, "body"); }) == ErrorCode::MissingColumn);
    CHECK(code_of([&] { load_csv(path, "review", std::string("label")); }) == ErrorCode::MissingColumn);
    try {
        load_csv(dir.file("absent.csv"), "review");
        FAIL("expected IoError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IoError);
        CHECK(std::string(e.what()).find("load_csv") != std::string::npos);
    }
}

TEST_CASE("parse_csv_corpus strips a UTF-8 byte order mark") {
    const RawCorpus raw = parse_csv_corpus("\xEF\xBB\xBFtext\nhello world\n", "text");
    REQUIRE(raw.size() == 1);
    CHECK(raw.records[0].text == "hello world");
}

TEST_CASE("tokenize splits on anything but ASCII letters") {
    CHECK(tokenize("Hello, World! abc123def caf\xC3\xA9 x", true, 1) ==
          std::vector<std::string>{"hello", "world", "abc", "def", "caf", "x"});
    CHECK(tokenize("Hello a bb", false, 2) == std::vector<std::string>{"Hello", "bb"});
}

TEST_CASE("preprocess applies document-frequency thresholds") {
    const Corpus c = preprocess(raw_of({"red cat", "red dog", "blue dog"}), no_stopwords());
    CHECK(c.vocab == std::vector<std::string>{"dog", "red"});
    CHECK(c.num_docs() == 3);
    CHECK(c.docs[0].size() == 1);
    CHECK(c.docs[2].size() == 1);
    for (std::size_t i = 0; i < c.num_docs(); ++i) {
        double row = 0.0;
        for (SparseMatrix::InnerIterator it(c.bow, static_cast<Eigen::Index>(i)); it; ++it) row += it.value();
        CHECK(row == static_cast<double>(c.docs[i].size()));
    }
    CHECK(code_of([] { preprocess(raw_of({"red cat", "red dog", "blue dog"}), no_stopwords(4)); }) ==
          ErrorCode::EmptyVocabulary);
}

TEST_CASE("preprocess records empty documents without dropping them") {
    const Corpus c = preprocess(raw_of({"a!!", "red dog", "red dog"}), no_stopwords());
    CHECK(c.num_docs() == 3);
    CHECK(c.docs[0].empty());
    CHECK(c.empty_docs == std::set<std::size_t>{0});
}

TEST_CASE("preprocess removes stopwords and over-frequent words") {
    PreprocessConfig cfg;
    cfg.min_df = 1;
    cfg.max_df_ratio = 0.5;
    const Corpus c = preprocess(raw_of({"the common alpha", "the common beta", "the common gamma", "delta"}), cfg);
    CHECK(c.vocab == std::vector<std::string>{"alpha", "beta", "delta", "gamma"});
}

TEST_CASE("max_vocab keeps the most frequent words, ties lexicographic") {
    PreprocessConfig cfg = no_stopwords(1);
    cfg.max_df_ratio = 1.0;
    cfg.max_vocab = 2;
    const Corpus c = preprocess(raw_of({"zeta zeta beta", "alpha gamma", "zeta alpha"}), cfg);
    // zeta:3, alpha:2, beta:1, gamma:1
    CHECK(c.vocab == std::vector<std::string>{"alpha", "zeta"});
    cfg.max_vocab = 3;
    CHECK(preprocess(raw_of({"zeta zeta beta", "alpha gamma", "zeta alpha"}), cfg).vocab ==
          std::vector<std::string>{"alpha", "beta", "zeta"});
}

TEST_CASE("every vocabulary word respects the df bounds") {
    std::vector<std::string> texts;
    for (int i = 0; i < 40; ++i) {
        std::string t = "always";
        for (int j = 0; j <= i % 7; ++j) t += " w" + std::string(1, static_cast<char>('a' + (i * 3 + j) % 26)) + "x";
        texts.push_back(t);
    }
    PreprocessConfig cfg = no_stopwords(3);
    cfg.max_df_ratio = 0.9;
    const Corpus c = preprocess(raw_of(texts), cfg);
    std::vector<std::size_t> df(c.vocab_size(), 0);
    for (const auto& doc : c.docs) {
        std::set<WordId> seen(doc.begin(), doc.end());
        for (WordId w : seen) ++df[static_cast<std::size_t>(w)];
    }
    for (std::size_t v = 0; v < df.size(); ++v) {
        CHECK(df[v] >= 3);
        CHECK(static_cast<double>(df[v]) <= 0.9 * 40);
    }
    CHECK(std::find(c.vocab.begin(), c.vocab.end(), "always") == c.vocab.end());
    CHECK(std::is_sorted(c.vocab.begin(), c.vocab.end()));
}

TEST_CASE("preprocess is deterministic") {
    const RawCorpus raw = raw_of({"red cat dog", "red dog", "blue dog cat"});
    const Corpus a = preprocess(raw, no_stopwords());
    const Corpus b = preprocess(raw, no_stopwords());
    CHECK(a.vocab == b.vocab);
    CHECK(a.docs == b.docs);
}

TEST_CASE("corpus_stats reports filtered and raw token means") {
    RawCorpus raw = raw_of({"red cat", "red dog", "blue dog"});
    raw.records[0].label = "x";
    raw.records[1].label = "y";
    raw.records[2].label = "x";
    const StatsReport s = corpus_stats(preprocess(raw, no_stopwords()));
    CHECK(s.num_docs == 3);
    CHECK(s.vocab_size == 2);
    CHECK(s.raw_mean_tokens == doctest::Approx(2.0));
    CHECK(s.mean_tokens == doctest::Approx(4.0 / 3.0));
    CHECK(s.num_categories == 2);

    Corpus single;
    single.docs.emplace_back();
    single.empty_docs.insert(0);
    const StatsReport e = corpus_stats(single);
    CHECK(e.num_docs == 1);
    CHECK(e.mean_tokens == 0.0);
    CHECK(e.num_empty_docs == 1);
}

TEST_CASE("apply_vocabulary folds new text into a fixed vocabulary") {
    const Corpus c = apply_vocabulary(raw_of({"red zebra dog", "!!!"}), no_stopwords(), {"dog", "red"});
    CHECK(c.vocab == std::vector<std::string>{"dog", "red"});
    CHECK(c.docs[0] == std::vector<WordId>{1, 0});
    CHECK(c.empty_docs == std::set<std::size_t>{1});
}

TEST_CASE("stopword files replace the bundled list") {
    TempDir dir;
    const auto path = dir.write("stop.txt", "Red\n\n  dog \n");
    const auto words = load_stopwords_file(path);
    CHECK(words.count("red") == 1);
    CHECK(words.count("dog") == 1);
    CHECK(words.size() == 2);
    CHECK(PreprocessConfig::default_stopwords().count("the") == 1);
}
