#include "lxtopic/checkpoint.hpp"

#include "lxtopic/artifacts.hpp"
#include "lxtopic/csv.hpp"
#include "lxtopic/error.hpp"

#include <json.hpp>

#include <algorithm>

namespace lxtopic {

namespace {

using ojson = nlohmann::ordered_json;

ojson matrix_json(const Matrix& m) {
    ojson rows = ojson::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ojson row = ojson::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::InvalidCheckpoint, "load_checkpoint", msg); }

Matrix matrix_from(const ojson& j, Eigen::Index cols, const char* name) {
    if (!j.is_array()) bad(std::string(name) + " must be an array of rows");
    Matrix m(static_cast<Eigen::Index>(j.size()), cols);
    for (std::size_t i = 0; i < j.size(); ++i) {
        const ojson& row = j[i];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            bad(std::string(name) + " row " + std::to_string(i) + " has the wrong width");
        }
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (!row[c].is_number()) bad(std::string(name) + " holds a non-number");
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = row[c].get<double>();
        }
    }
    return m;
}

Eigen::Index width(const ojson& rows) {
    return rows.is_array() && !rows.empty() && rows[0].is_array() ? static_cast<Eigen::Index>(rows[0].size()) : 0;
}

} // namespace

std::string serialize_checkpoint(const Checkpoint& ckpt) {
    const ModelConfig& c = ckpt.config;
    ojson j;
    j["format"] = kCheckpointFormat;
    j["version"] = kCheckpointVersion;
    j["config"] = {{"num_topics", c.num_topics},       {"eps_dt", c.eps_dt},
                   {"eps_tw", c.eps_tw},               {"sinkhorn_iters", c.sinkhorn_iters},
                   {"sinkhorn_tol", c.sinkhorn_tol},   {"epochs", c.epochs},
                   {"warmup_epochs", c.warmup_epochs}, {"lr", c.lr},
                   {"beta1", c.beta1},                 {"beta2", c.beta2},
                   {"adam_eps", c.adam_eps},           {"seed", c.seed},
                   {"kmeans_iters", c.kmeans_iters}};
    std::vector<std::string> stopwords(ckpt.preprocess.stopwords.begin(), ckpt.preprocess.stopwords.end());
    std::sort(stopwords.begin(), stopwords.end());
    j["preprocess"] = {{"lowercase", ckpt.preprocess.lowercase},
                       {"min_token_len", ckpt.preprocess.min_token_len},
                       {"min_df", ckpt.preprocess.min_df},
                       {"max_df_ratio", ckpt.preprocess.max_df_ratio},
                       {"stopwords", stopwords}};
    j["preprocess"]["max_vocab"] = ckpt.preprocess.max_vocab ? ojson(*ckpt.preprocess.max_vocab) : ojson(nullptr);
    j["vocab"] = ckpt.vocab;
    if (ckpt.lsa) {
        ojson idf = ojson::array();
        for (Eigen::Index v = 0; v < ckpt.lsa->idf.size(); ++v) idf.push_back(ckpt.lsa->idf(v));
        j["lsa"] = {{"idf", std::move(idf)}, {"components", matrix_json(ckpt.lsa->components)}};
    } else {
        j["lsa"] = nullptr;
    }
    j["topics"] = matrix_json(ckpt.model.topics);
    j["words"] = matrix_json(ckpt.model.words);
    j["labels"] = ckpt.labels;
    j["descriptions"] = ckpt.descriptions;
    return j.dump() + "\n";
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) { atomic_write(path, serialize_checkpoint(ckpt)); }

Checkpoint parse_checkpoint(const std::string& text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const nlohmann::json::exception& e) {
        bad(std::string("not JSON: ") + e.what());
    }
    if (!j.is_object() || j.value("format", "") != kCheckpointFormat) bad("not an lxtopic model file");
    if (j.value("version", -1) != kCheckpointVersion) bad("unsupported model file version");

    Checkpoint ckpt;
    try {
        const ojson& c = j.at("config");
        ModelConfig& m = ckpt.config;
        m.num_topics = c.at("num_topics").get<int>();
        m.eps_dt = c.at("eps_dt").get<double>();
        m.eps_tw = c.at("eps_tw").get<double>();
        m.sinkhorn_iters = c.at("sinkhorn_iters").get<int>();
        m.sinkhorn_tol = c.at("sinkhorn_tol").get<double>();
        m.epochs = c.at("epochs").get<int>();
        m.warmup_epochs = c.at("warmup_epochs").get<int>();
        m.lr = c.at("lr").get<double>();
        m.beta1 = c.at("beta1").get<double>();
        m.beta2 = c.at("beta2").get<double>();
        m.adam_eps = c.at("adam_eps").get<double>();
        m.seed = c.at("seed").get<std::uint64_t>();
        m.kmeans_iters = c.at("kmeans_iters").get<int>();

        const ojson& p = j.at("preprocess");
        ckpt.preprocess.lowercase = p.at("lowercase").get<bool>();
        ckpt.preprocess.min_token_len = p.at("min_token_len").get<std::size_t>();
        ckpt.preprocess.min_df = p.at("min_df").get<std::size_t>();
        ckpt.preprocess.max_df_ratio = p.at("max_df_ratio").get<double>();
        const auto stopwords = p.at("stopwords").get<std::vector<std::string>>();
        ckpt.preprocess.stopwords = {stopwords.begin(), stopwords.end()};
        if (p.contains("max_vocab") && !p.at("max_vocab").is_null()) {
            ckpt.preprocess.max_vocab = p.at("max_vocab").get<std::size_t>();
        }

        ckpt.vocab = j.at("vocab").get<std::vector<std::string>>();
        const ojson& topics = j.at("topics");
        const Eigen::Index h = width(topics);
        ckpt.model.topics = matrix_from(topics, h, "topics");
        ckpt.model.words = matrix_from(j.at("words"), h, "words");
        ckpt.model.config = ckpt.config;
        if (!j.at("lsa").is_null()) {
            const ojson& lsa = j.at("lsa");
            LsaProjection proj;
            const auto idf = lsa.at("idf").get<std::vector<double>>();
            proj.idf = Eigen::Map<const Vector>(idf.data(), static_cast<Eigen::Index>(idf.size()));
            proj.components = matrix_from(lsa.at("components"), h, "lsa.components");
            ckpt.lsa = std::move(proj);
        }
        ckpt.labels = j.at("labels").get<std::vector<std::string>>();
        ckpt.descriptions = j.at("descriptions").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        bad(std::string("missing or mistyped field: ") + e.what());
    }

    const auto v = static_cast<Eigen::Index>(ckpt.vocab.size());
    const auto k = static_cast<std::size_t>(ckpt.model.topics.rows());
    if (ckpt.model.topics.rows() != ckpt.config.num_topics || ckpt.model.topics.cols() < 1) bad("topic matrix shape");
    if (ckpt.model.words.rows() != v) bad("word matrix does not match the vocabulary");
    if (ckpt.lsa && (ckpt.lsa->idf.size() != v || ckpt.lsa->components.rows() != v)) bad("LSA shapes do not match the vocabulary");
    if (ckpt.labels.size() != k || ckpt.descriptions.size() != k) bad("one label and description per topic required");
    if (!std::is_sorted(ckpt.vocab.begin(), ckpt.vocab.end())) bad("vocabulary must be sorted");
    return ckpt;
}

Checkpoint load_checkpoint(const std::string& path) { return parse_checkpoint(csv::read_file(path, "load_checkpoint")); }

} // namespace lxtopic
