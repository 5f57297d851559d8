#pragma once

#include "lxtopic/types.hpp"

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace lxtopic {

/// Boolean sliding-window co-occurrence counts. A document of length L yields
/// max(1, L - window + 1) windows (exactly one when L <= window, none when
/// L == 0); each window counts a word or pair at most once.
struct WindowStats {
    std::size_t num_windows = 0;
    std::vector<std::size_t> word_windows; // windows containing word v
    std::unordered_map<std::uint64_t, std::size_t> pair_windows; // key = pair_key(i, j), i < j

    static std::uint64_t pair_key(WordId i, WordId j) {
        if (i > j) std::swap(i, j);
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) | static_cast<std::uint32_t>(j);
    }

    std::size_t pair_count(WordId i, WordId j) const {
        auto it = pair_windows.find(pair_key(i, j));
        return it == pair_windows.end() ? 0 : it->second;
    }
};

/// Counts windows over `docs`. When `tracked` is nonempty only words with
/// tracked[v] set are counted (num_windows still counts every window).
WindowStats count_windows(const std::vector<std::vector<WordId>>& docs, std::size_t vocab_size, std::size_t window,
                          const std::vector<bool>& tracked = {});

} // namespace lxtopic
