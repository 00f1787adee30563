#pragma once

#include <string>

#include "fieldforge/scenes/view_set.hpp"

namespace fieldforge {

struct PoseLoadOptions {
    bool load_images = true;          // images from sibling files named in the document
    int downsample = 1;               // integer factor rescaling W, H and focal
    int default_image_size = 800;     // used when images are not loaded
    std::array<float, 3> background{0, 0, 0};  // alpha compositing at load
    float t_near = 2.0f;
    float t_far = 6.0f;
};

// Standard synthetic-scene camera document: JSON with `camera_angle_x`
// (radians) and `frames[]`, each carrying `file_path` and a 4x4 row-major
// `transform_matrix` (camera-to-world). focal = 0.5 * W / tan(0.5 * fov).
ViewSet load_pose_file(const std::string& path, const PoseLoadOptions& opt = {});

// Inverse of load_pose_file for the camera data; `file_paths` pairs with
// cameras (empty entries get frame_{i}).
void save_pose_file(const std::string& path, const ViewSet& views,
                    const std::vector<std::string>& file_paths = {});

}  // namespace fieldforge
