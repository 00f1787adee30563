#pragma once

#include <string>
#include <vector>

#include "fieldforge/core/errors.hpp"
#include "fieldforge/render/camera.hpp"
#include "fieldforge/render/image.hpp"

namespace fieldforge {

// Posed images with a train/test split. Images may be absent when only the
// cameras were loaded.
struct ViewSet {
    std::vector<Camera<float>> cameras;
    std::vector<Image> images;  // empty, or one per camera
    std::vector<int> train_ids;
    std::vector<int> test_ids;

    int size() const { return static_cast<int>(cameras.size()); }

    void validate() const {
        if (!images.empty()) {
            if (images.size() != cameras.size())
                throw ConfigError("view set: image/camera count mismatch");
            for (std::size_t i = 1; i < images.size(); ++i)
                if (images[i].width != images[0].width || images[i].height != images[0].height)
                    throw ConfigError("view set: images must share dimensions");
        }
        for (const auto& cam : cameras) cam.validate();
        for (int id : train_ids)
            if (id < 0 || id >= size()) throw ConfigError("view set: train id out of range");
        for (int id : test_ids)
            if (id < 0 || id >= size()) throw ConfigError("view set: test id out of range");
    }
};

}  // namespace fieldforge
