#include "fieldforge/scenes/protocols.hpp"

#include <algorithm>
#include <cmath>

namespace fieldforge {

namespace {

void check_range(const std::vector<int>& ids, int total, const char* what) {
    for (int id : ids)
        if (id < 0 || id >= total)
            throw ConfigError(std::string(what) + ": view id " + std::to_string(id) +
                              " out of range for " + std::to_string(total) + " views");
}

}  // namespace

const std::vector<int>& blender_input_ids() {
    static const std::vector<int> ids = {26, 86, 2, 55, 75, 93, 16, 73, 8};
    return ids;
}

const std::vector<int>& dtu_input_ids() {
    static const std::vector<int> ids = {25, 22, 28, 40, 44, 48, 0, 8, 13};
    return ids;
}

const std::vector<int>& dtu_test_ids() {
    static const std::vector<int> ids = {1,  2,  9,  10, 11, 12, 14, 15, 23, 24, 26, 27, 29,
                                         30, 31, 32, 33, 34, 35, 41, 42, 43, 45, 46, 47};
    return ids;
}

ViewSplit select_views_blender(int total_views, int n_train) {
    const auto& ids = blender_input_ids();
    if (n_train < 1 || n_train > static_cast<int>(ids.size()))
        throw ConfigError("blender protocol: n_train must be in [1, " +
                          std::to_string(ids.size()) + "]");
    ViewSplit split;
    split.train.assign(ids.begin(), ids.begin() + n_train);
    check_range(split.train, total_views, "blender protocol");
    for (int i = 0; i < total_views; ++i)
        if (std::find(split.train.begin(), split.train.end(), i) == split.train.end())
            split.test.push_back(i);
    return split;
}

ViewSplit select_views_dtu(int total_views, int n_train) {
    const auto& ids = dtu_input_ids();
    if (n_train < 1 || n_train > static_cast<int>(ids.size()))
        throw ConfigError("dtu protocol: n_train must be in [1, " + std::to_string(ids.size()) + "]");
    ViewSplit split;
    split.train.assign(ids.begin(), ids.begin() + n_train);
    split.test = dtu_test_ids();
    check_range(split.train, total_views, "dtu protocol");
    check_range(split.test, total_views, "dtu protocol");
    return split;
}

ViewSplit select_views_llff(int total_views, int n_train) {
    if (total_views < 2) throw ConfigError("llff protocol: need at least 2 views");
    ViewSplit split;
    std::vector<int> remaining;
    for (int i = 0; i < total_views; ++i) {
        if (i % 8 == 0)
            split.test.push_back(i);
        else
            remaining.push_back(i);
    }
    if (n_train < 1 || n_train > static_cast<int>(remaining.size()))
        throw ConfigError("llff protocol: n_train out of range");
    // Even subsampling of the non-test views.
    for (int k = 0; k < n_train; ++k) {
        const double pos = n_train == 1
                               ? 0.0
                               : static_cast<double>(k) * (remaining.size() - 1) / (n_train - 1);
        split.train.push_back(remaining[static_cast<std::size_t>(std::llround(pos))]);
    }
    return split;
}

ViewSplit select_views_explicit(int total_views, const std::vector<int>& train_ids) {
    check_range(train_ids, total_views, "explicit split");
    ViewSplit split;
    split.train = train_ids;
    for (int i = 0; i < total_views; ++i)
        if (std::find(train_ids.begin(), train_ids.end(), i) == train_ids.end())
            split.test.push_back(i);
    return split;
}

}  // namespace fieldforge
