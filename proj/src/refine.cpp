#include "lxtopic/refine.hpp"

#include "lxtopic/error.hpp"
#include "lxtopic/llm_client.hpp"
#include "lxtopic/sinkhorn.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>
#include <thread>

namespace lxtopic {

const char* to_string(SuggestionSource source) {
    switch (source) {
    case SuggestionSource::Llm: return "llm";
    case SuggestionSource::Fallback: return "fallback";
    case SuggestionSource::Skipped: return "skipped";
    }
    return "skipped";
}

void RefineConfig::validate() const {
    if (!(lambda >= 0.0)) throw Error(ErrorCode::InvalidConfig, "refine", "lambda must be >= 0");
    if (interval_epochs < 1) throw Error(ErrorCode::InvalidConfig, "refine", "interval_epochs must be >= 1");
    if (!(eps_r > 0.0)) throw Error(ErrorCode::InvalidConfig, "refine", "eps_r must be positive");
    if (top_m < 2) throw Error(ErrorCode::InvalidConfig, "refine", "top_m must be >= 2");
    if (concurrency_limit < 1) throw Error(ErrorCode::InvalidConfig, "refine", "concurrency_limit must be >= 1");
}

namespace {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::string lower(std::string s) {
    for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return s;
}

std::string title_case(const std::string& word) {
    std::string out = word;
    if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
}

std::string join(const std::vector<std::string>& words, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) out += sep;
        out += words[i];
    }
    return out;
}

// Index one past the '}' closing the object that opens at `start`, or npos.
std::size_t match_object(const std::string& text, std::size_t start) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = start; i < text.size(); ++i) {
        const char ch = text[i];
        if (in_string) {
            if (ch == '\\') {
                ++i;
            } else if (ch == '"') {
                in_string = false;
            }
            continue;
        }
        if (ch == '"') {
            in_string = true;
        } else if (ch == '{') {
            ++depth;
        } else if (ch == '}') {
            if (--depth == 0) return i + 1;
        }
    }
    return std::string::npos;
}

} // namespace

std::string trim_label(const std::string& label) {
    std::string out = trim(label);
    if (out.size() <= kMaxLabelChars) return out;
    std::size_t cut = kMaxLabelChars;
    // Do not split a UTF-8 sequence.
    while (cut > 0 && (static_cast<unsigned char>(out[cut]) & 0xC0) == 0x80) --cut;
    return trim(out.substr(0, cut));
}

std::string fallback_label(const std::vector<std::string>& words) {
    std::vector<std::string> head;
    for (std::size_t i = 0; i < std::min<std::size_t>(2, words.size()); ++i) head.push_back(title_case(words[i]));
    return trim_label(join(head, " "));
}

std::string template_description(const std::vector<std::string>& words) {
    return "Topic about: " + join(words, ", ");
}

std::string build_prompt(const std::vector<std::string>& words, std::size_t top_m) {
    std::ostringstream out;
    out << "You are helping to interpret a topic learned by a topic model from a text corpus.\n"
        << "The most representative words of the topic, in order of importance, are:\n";
    for (std::size_t i = 0; i < words.size(); ++i) out << (i ? ", " : "") << '"' << words[i] << '"';
    out << "\n\n"
        << "Remove words that do not fit the common theme and keep or reorder the ones that do. You may add "
           "closely related words, but prefer words from the list.\n"
        << "Reply with a single JSON object and nothing else, using exactly these keys:\n"
        << "{\"refined_words\": [at most " << top_m << " lowercase words], "
        << "\"label\": \"a concise topic label of at most 3 words\", "
        << "\"confidence\": a number between 0.0 and 1.0 saying how coherent the topic is}\n";
    return out.str();
}

std::string build_description_prompt(const std::string& label, const std::vector<std::string>& words) {
    std::ostringstream out;
    out << "A topic labeled \"" << label << "\" is characterized by the words: " << join(words, ", ") << ".\n"
        << "Write one short natural-language description (at most " << kMaxDescriptionWords
        << " words) summarizing what documents about this topic discuss. Reply with the description only.\n";
    return out.str();
}

ParsedResponse parse_response(const std::string& text) {
    for (std::size_t start = text.find('{'); start != std::string::npos; start = text.find('{', start + 1)) {
        const std::size_t end = match_object(text, start);
        if (end == std::string::npos) break;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(text.substr(start, end - start));
        } catch (const nlohmann::json::exception&) {
            continue;
        }
        if (!obj.is_object()) continue;
        ParsedResponse out;
        try {
            if (obj.contains("refined_words")) out.refined_words = obj.at("refined_words").get<std::vector<std::string>>();
            if (obj.contains("label")) out.label = trim_label(obj.at("label").get<std::string>());
            if (obj.contains("confidence") && !obj.at("confidence").is_null()) {
                const auto& c = obj.at("confidence");
                out.confidence = c.is_string() ? std::stod(c.get<std::string>()) : c.get<double>();
            }
        } catch (const std::exception& e) {
            throw Error(ErrorCode::ParseError, "parse_response", std::string("bad field type: ") + e.what());
        }
        return out;
    }
    throw Error(ErrorCode::ParseError, "parse_response", "no JSON object in completion");
}

double confidence_fallback(const std::vector<std::string>& original, const std::vector<std::string>& refined) {
    const std::set<std::string> a(original.begin(), original.end());
    const std::set<std::string> b(refined.begin(), refined.end());
    std::size_t common = 0;
    for (const auto& w : a) common += b.count(w);
    const std::size_t uni = a.size() + b.size() - common;
    return uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
}

RefinementSuggestion sanitize(RefinementSuggestion s, const std::vector<std::string>& sorted_vocab) {
    std::vector<std::string> kept;
    std::set<std::string> seen;
    for (const auto& raw : s.refined_words) {
        std::string w = lower(trim(raw));
        if (!std::binary_search(sorted_vocab.begin(), sorted_vocab.end(), w)) continue;
        if (!seen.insert(w).second) continue;
        kept.push_back(std::move(w));
    }
    s.refined_words = std::move(kept);
    s.label = trim_label(s.label);
    if (s.label.empty()) s.label = fallback_label(s.original_words);
    if (s.source == SuggestionSource::Skipped || s.refined_words.size() < 2) {
        s.source = SuggestionSource::Skipped;
        s.confidence = 0.0;
        return s;
    }
    if (!s.has_confidence || !std::isfinite(s.confidence)) {
        s.confidence = confidence_fallback(s.original_words, s.refined_words);
        s.has_confidence = true;
        s.source = SuggestionSource::Fallback;
    } else {
        s.confidence = std::clamp(s.confidence, 0.0, 1.0);
    }
    return s;
}

RefinementSuggestion skipped_suggestion(std::size_t topic_id, const std::vector<std::string>& top_words) {
    RefinementSuggestion s;
    s.topic_id = topic_id;
    s.original_words = top_words;
    s.label = fallback_label(top_words);
    s.source = SuggestionSource::Skipped;
    return s;
}

Matrix refine_cost(const std::vector<WordId>& support, const std::vector<WordId>& refined, const Matrix& embeddings) {
    Matrix cost(static_cast<Eigen::Index>(support.size()), static_cast<Eigen::Index>(refined.size()));
    for (std::size_t i = 0; i < support.size(); ++i) {
        const auto x = embeddings.row(support[i]);
        const double nx = x.norm();
        for (std::size_t j = 0; j < refined.size(); ++j) {
            const auto y = embeddings.row(refined[j]);
            const double ny = y.norm();
            double cosine;
            if (support[i] == refined[j]) {
                cosine = 1.0;
            } else if (nx == 0.0 || ny == 0.0) {
                cosine = 0.0;
            } else {
                cosine = x.dot(y) / (nx * ny);
            }
            cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::clamp(1.0 - cosine, 0.0, 2.0);
        }
    }
    return cost;
}

RefineLoss refine_loss(const Vector& p, const Matrix& cost, const RefineConfig& cfg) {
    if (cost.cols() < 1 || cost.rows() != p.size()) {
        throw Error(ErrorCode::DimensionMismatch, "refine_loss", "cost shape does not match support");
    }
    const Vector u = Vector::Constant(cost.cols(), 1.0 / static_cast<double>(cost.cols()));
    const TransportPlan t = sinkhorn(cost, p, u, {cfg.eps_r, cfg.sinkhorn_iters, cfg.sinkhorn_tol, nullptr});

    RefineLoss out;
    out.marginal_violation = t.marginal_violation;
    double transport = 0.0;
    double kl = 0.0;
    for (Eigen::Index i = 0; i < cost.rows(); ++i) {
        for (Eigen::Index j = 0; j < cost.cols(); ++j) {
            const double pij = t.plan(i, j);
            transport += pij * cost(i, j);
            if (pij > 0.0) kl += pij * std::log(pij / (std::max(p(i), 1e-300) * u(j)));
        }
    }
    out.loss = std::max(0.0, transport + cfg.eps_r * kl);
    // With P = (p u^T) exp((phi + psi - C) / eps), the potential phi = f - eps log p
    // is the marginal derivative of the KL-regularized objective.
    out.grad.resize(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) out.grad(i) = t.dual_f(i) - cfg.eps_r * std::log(std::max(p(i), 1e-300));
    out.grad.array() -= out.grad.mean();
    return out;
}

double total_loss(double recon, const std::vector<RefinementSuggestion>& suggestions,
                  const std::vector<double>& per_topic_losses, double lambda) {
    if (suggestions.size() != per_topic_losses.size()) {
        throw Error(ErrorCode::DimensionMismatch, "total_loss", "one loss per suggestion required");
    }
    double refine = 0.0;
    for (std::size_t k = 0; k < suggestions.size(); ++k) {
        if (suggestions[k].source == SuggestionSource::Skipped) continue;
        refine += suggestions[k].confidence * per_topic_losses[k];
    }
    return recon + lambda * refine;
}

std::string describe_topic(const std::string& label, const std::vector<std::string>& words, Refiner* refiner) {
    if (refiner) {
        try {
            std::istringstream in(refiner->describe(label, words));
            std::vector<std::string> tokens;
            for (std::string tok; in >> tok && tokens.size() < kMaxDescriptionWords;) tokens.push_back(tok);
            if (!tokens.empty()) return join(tokens, " ");
        } catch (const std::exception&) {
            // fall through to the template
        }
    }
    return template_description(words);
}

std::vector<RefinementSuggestion> refine_topics(Refiner& refiner, const std::vector<std::vector<std::string>>& top_words,
                                                const std::vector<std::string>& sorted_vocab,
                                                std::size_t concurrency_limit) {
    const std::size_t k = top_words.size();
    std::vector<RefinementSuggestion> out(k);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < k; t = next++) {
            RefinementSuggestion s;
            try {
                s = refiner.suggest(t, top_words[t]);
                s.topic_id = t;
                s.original_words = top_words[t];
            } catch (const std::exception&) {
                s = skipped_suggestion(t, top_words[t]);
            }
            out[t] = sanitize(std::move(s), sorted_vocab);
        }
    };
    const std::size_t threads = std::min(std::max<std::size_t>(1, concurrency_limit), k);
    if (threads <= 1) {
        worker();
        return out;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return out;
}

RefinementSuggestion StubRefiner::suggest(std::size_t topic_id, const std::vector<std::string>& top_words) {
    RefinementSuggestion s;
    s.topic_id = topic_id;
    s.original_words = top_words;
    s.refined_words = top_words;
    s.label = fallback_label(top_words);
    s.confidence = 0.5;
    s.has_confidence = true;
    s.source = SuggestionSource::Llm;
    return s;
}

std::string StubRefiner::describe(const std::string& label, const std::vector<std::string>& words) {
    std::vector<std::string> head(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(5, words.size())));
    return label + ": documents mentioning " + join(head, ", ") + ".";
}

RefinementSuggestion LlmRefiner::suggest(std::size_t topic_id, const std::vector<std::string>& top_words) {
    const ParsedResponse parsed = parse_response(client_.complete(build_prompt(top_words, top_m_)));
    RefinementSuggestion s;
    s.topic_id = topic_id;
    s.original_words = top_words;
    s.refined_words = parsed.refined_words;
    if (s.refined_words.size() > top_m_) s.refined_words.resize(top_m_);
    s.label = parsed.label;
    s.has_confidence = parsed.confidence.has_value();
    s.confidence = parsed.confidence.value_or(0.0);
    s.source = SuggestionSource::Llm;
    return s;
}

std::string LlmRefiner::describe(const std::string& label, const std::vector<std::string>& words) {
    return trim(client_.complete(build_description_prompt(label, words)));
}

} // namespace lxtopic
