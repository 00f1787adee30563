#pragma once

#include <vector>

#include "fieldforge/core/errors.hpp"

namespace fieldforge {

struct ViewSplit {
    std::vector<int> train;
    std::vector<int> test;
};

// Fixed per-dataset input-view ID lists used by the standard few-shot
// evaluation protocols (counting from 0).
const std::vector<int>& blender_input_ids();  // 9 listed ids; 8-view runs use the first 8
const std::vector<int>& dtu_input_ids();      // prefix 3/6/9 rule
const std::vector<int>& dtu_test_ids();       // exposure-excluded evaluation views

// Blender: first n of the fixed id list as train; `test_pool` evaluation ids
// (or all remaining when empty).
ViewSplit select_views_blender(int total_views, int n_train);

// DTU: first n of the fixed id list as train; the fixed test id list.
ViewSplit select_views_dtu(int total_views, int n_train);

// LLFF: every 8th view is a test view; train views are evenly sampled from
// the remaining ones.
ViewSplit select_views_llff(int total_views, int n_train);

// Explicit user list: exactly these as train, the rest as test.
ViewSplit select_views_explicit(int total_views, const std::vector<int>& train_ids);

}  // namespace fieldforge
