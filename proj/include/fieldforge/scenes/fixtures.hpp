#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fieldforge/scenes/oracle.hpp"
#include "fieldforge/scenes/view_set.hpp"

namespace fieldforge {

struct Fixture {
    SceneOracle<float> oracle;
    ViewSet views;  // n_views train cameras + fixed test cameras, images from the oracle
};

// Deterministic procedural scenes with exact ground truth. The seed jitters
// the training camera placement only; geometry and test cameras are fixed so
// runs are comparable across seeds.
//   three-spheres  three colored spheres around the origin
//   box-room       floor and back wall slabs with a sphere inside
//   near-clutter   like three-spheres plus a small ball right in front of
//                  one training camera (within 10% of t_near) to give the
//                  near-camera penalty something real to act on
Fixture make_fixture(const std::string& name, int n_views, int image_size, std::uint64_t seed);

const std::vector<std::string>& fixture_names();

}  // namespace fieldforge
