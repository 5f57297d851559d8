#include "lxtopic/corpus.hpp"

namespace lxtopic {

const char* PreprocessConfig::stopwords_version() { return "en-1"; }

std::unordered_set<std::string> PreprocessConfig::default_stopwords() {
    static const char* const kWords[] = {
        "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and", "any", "are",
        "aren", "as", "at", "be", "because", "been", "before", "being", "below", "between", "both", "but",
        "by", "can", "cannot", "could", "couldn", "did", "didn", "do", "does", "doesn", "doing", "don",
        "down", "during", "each", "even", "ever", "few", "for", "from", "further", "get", "got", "had",
        "hadn", "has", "hasn", "have", "haven", "having", "he", "her", "here", "hers", "herself", "him",
        "himself", "his", "how", "however", "if", "in", "into", "is", "isn", "it", "its", "itself", "just",
        "ll", "me", "might", "more", "most", "much", "must", "mustn", "my", "myself", "no", "nor", "not",
        "now", "of", "off", "on", "once", "one", "only", "or", "other", "our", "ours", "ourselves", "out",
        "over", "own", "re", "same", "shan", "she", "should", "shouldn", "so", "some", "such", "than",
        "that", "the", "their", "theirs", "them", "themselves", "then", "there", "these", "they", "this",
        "those", "through", "to", "too", "under", "until", "up", "us", "ve", "very", "was", "wasn", "we",
        "were", "weren", "what", "when", "where", "which", "while", "who", "whom", "why", "will", "with",
        "won", "would", "wouldn", "you", "your", "yours", "yourself", "yourselves",
    };
    return {std::begin(kWords), std::end(kWords)};
}

} // namespace lxtopic
