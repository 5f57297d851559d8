#pragma once

#include "lxtopic/corpus.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lxtopic::testing {

/// Synthetic corpus with known topics: each topic owns a block of
/// `words_per_topic` words (Zipf weights, flat by default); documents draw `dominant_mass`
/// of their tokens from one topic and the rest from the others uniformly.
struct PlantedSpec {
    int topics = 5;
    int vocab = 200;
    int words_per_topic = 40;
    int docs = 500;
    int mean_length = 50;
    double dominant_mass = 0.8;
    double zipf_exponent = 0.0; // 0: flat weights within a topic
    std::uint64_t seed = 1;
};

struct PlantedCorpus {
    RawCorpus raw;            // label = "topic<k>" of the dominant topic
    std::vector<int> dominant;
    std::vector<std::string> words; // generator vocabulary, word v = words[v]
};

/// Letters-only token for index v ("qab", "qac", ...), never a stopword.
std::string planted_word(int v);

PlantedCorpus make_planted(const PlantedSpec& spec);

/// Renders the corpus as CSV with columns text,label.
std::string planted_csv(const PlantedCorpus& corpus);

} // namespace lxtopic::testing
