#include "lxtopic/cooccurrence.hpp"

#include "lxtopic/error.hpp"

#include <algorithm>

namespace lxtopic {

WindowStats count_windows(const std::vector<std::vector<WordId>>& docs, std::size_t vocab_size, std::size_t window,
                          const std::vector<bool>& tracked) {
    if (window < 1) throw Error(ErrorCode::InvalidConfig, "count_windows", "window must be >= 1");
    WindowStats stats;
    stats.word_windows.assign(vocab_size, 0);
    const bool filter = !tracked.empty();

    std::vector<int> in_window(vocab_size, 0);
    std::vector<WordId> distinct;
    for (const auto& doc : docs) {
        if (doc.empty()) continue;
        const std::size_t len = doc.size();
        const std::size_t span = std::min(window, len);
        const std::size_t n_windows = len <= window ? 1 : len - window + 1;

        for (std::size_t p = 0; p < span; ++p) ++in_window[static_cast<std::size_t>(doc[p])];
        for (std::size_t s = 0; s < n_windows; ++s) {
            if (s > 0) {
                --in_window[static_cast<std::size_t>(doc[s - 1])];
                ++in_window[static_cast<std::size_t>(doc[s + span - 1])];
            }
            distinct.clear();
            for (std::size_t p = s; p < s + span; ++p) {
                const WordId w = doc[p];
                if (filter && !tracked[static_cast<std::size_t>(w)]) continue;
                // Mark visited by flipping the count negative; restored below.
                if (in_window[static_cast<std::size_t>(w)] > 0) {
                    in_window[static_cast<std::size_t>(w)] = -in_window[static_cast<std::size_t>(w)];
                    distinct.push_back(w);
                }
            }
            for (WordId w : distinct) in_window[static_cast<std::size_t>(w)] = -in_window[static_cast<std::size_t>(w)];
            std::sort(distinct.begin(), distinct.end());
            for (std::size_t a = 0; a < distinct.size(); ++a) {
                ++stats.word_windows[static_cast<std::size_t>(distinct[a])];
                for (std::size_t b = a + 1; b < distinct.size(); ++b) {
                    ++stats.pair_windows[WindowStats::pair_key(distinct[a], distinct[b])];
                }
            }
            ++stats.num_windows;
        }
        for (std::size_t p = len - span; p < len; ++p) --in_window[static_cast<std::size_t>(doc[p])];
    }
    return stats;
}

} // namespace lxtopic
