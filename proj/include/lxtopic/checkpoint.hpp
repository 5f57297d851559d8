#pragma once

#include "lxtopic/corpus.hpp"
#include "lxtopic/embed.hpp"
#include "lxtopic/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lxtopic {

inline constexpr const char* kCheckpointFormat = "lxtopic-model";
inline constexpr int kCheckpointVersion = 1;

/// Everything needed to fold new documents into a trained model.
struct Checkpoint {
    ModelConfig config;
    PreprocessConfig preprocess;
    std::vector<std::string> vocab;
    std::optional<LsaProjection> lsa; // absent when document embeddings were supplied externally
    TopicModel model;
    std::vector<std::string> labels;
    std::vector<std::string> descriptions;
};

std::string serialize_checkpoint(const Checkpoint& ckpt);
void save_checkpoint(const Checkpoint& ckpt, const std::string& path);

/// Throws InvalidCheckpoint for a wrong format tag, an unknown version or
/// inconsistent shapes, IoError when the file cannot be read.
Checkpoint parse_checkpoint(const std::string& text);
Checkpoint load_checkpoint(const std::string& path);

} // namespace lxtopic
