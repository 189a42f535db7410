#include <algorithm>
#include <stdexcept>

#include "colorpack/keyframes.hpp"

namespace cpk {

KeyframeSet select_keyframes(const DistanceSeries& series, std::size_t x) {
    if (x == 0) throw std::invalid_argument("select_keyframes: step must be positive");
    if (series.labels.size() != series.distances.size()) {
        throw std::invalid_argument("select_keyframes: series has no cluster labels");
    }

    int cluster_count = 0;
    for (int label : series.labels) {
        if (label < 0) throw std::invalid_argument("select_keyframes: negative cluster label");
        cluster_count = std::max(cluster_count, label + 1);
    }

    // Frames are visited in index order, so each member list is already sorted.
    std::vector<std::vector<std::size_t>> members(cluster_count);
    for (std::size_t i = 0; i < series.labels.size(); ++i) members[series.labels[i]].push_back(i);

    std::vector<std::pair<std::size_t, int>> picked;
    for (int c = 0; c < cluster_count; ++c) {
        for (std::size_t pos = 0; pos < members[c].size(); pos += x) picked.emplace_back(members[c][pos], c);
    }
    std::sort(picked.begin(), picked.end());

    KeyframeSet set;
    for (const auto& [index, cluster] : picked) {
        set.indices.push_back(index);
        set.source_clusters.push_back(cluster);
    }
    return set;
}

KeyframeResult extract_keyframes(std::span<const FrameRGB> video, const KeyframeOptions& options) {
    KeyframeResult result;
    result.series = distance_series(video);
    result.bandwidth =
        options.mean_shift.bandwidth ? *options.mean_shift.bandwidth : auto_bandwidth(result.series.distances);
    MeanShiftOptions ms = options.mean_shift;
    ms.bandwidth = result.bandwidth;
    result.series = mean_shift_cluster(std::move(result.series), ms);
    result.keyframes = select_keyframes(result.series, options.step);
    return result;
}

}  // namespace cpk
