#include "fieldforge/scenes/poses.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>

#include <nlohmann/json.hpp>

#include "fieldforge/core/errors.hpp"

namespace fieldforge {

namespace fs = std::filesystem;
using nlohmann::json;

ViewSet load_pose_file(const std::string& path, const PoseLoadOptions& opt) {
    if (opt.downsample < 1) throw ConfigError("load_pose_file: downsample must be >= 1");
    std::ifstream is(path);
    if (!is) throw IoError("load_pose_file: cannot open " + path);
    json doc;
    try {
        is >> doc;
    } catch (const json::exception& e) {
        throw IoError("load_pose_file: malformed document " + path + ": " + e.what());
    }
    if (!doc.contains("camera_angle_x") || !doc.contains("frames") || !doc["frames"].is_array())
        throw IoError("load_pose_file: malformed document " + path +
                      ": need camera_angle_x and frames[]");
    const float fov_x = doc["camera_angle_x"].get<float>();

    ViewSet views;
    const fs::path base = fs::path(path).parent_path();
    for (const auto& frame : doc["frames"]) {
        if (!frame.contains("file_path") || !frame.contains("transform_matrix"))
            throw IoError("load_pose_file: malformed frame in " + path);
        const auto& m = frame["transform_matrix"];
        if (!m.is_array() || m.size() != 4)
            throw IoError("load_pose_file: transform_matrix must be 4x4 in " + path);

        Camera<float> cam;
        for (int r = 0; r < 4; ++r) {
            if (!m[r].is_array() || m[r].size() != 4)
                throw IoError("load_pose_file: transform_matrix must be 4x4 in " + path);
            for (int c = 0; c < 4; ++c) cam.c2w[r][c] = m[r][c].get<float>();
        }

        int w = opt.default_image_size, h = opt.default_image_size;
        if (opt.load_images) {
            std::string rel = frame["file_path"].get<std::string>();
            fs::path img_path = base / rel;
            if (!fs::exists(img_path) && fs::exists(img_path.string() + ".png"))
                img_path = img_path.string() + ".png";
            if (!fs::exists(img_path))
                throw IoError("load_pose_file: missing image file " + img_path.string());
            Image im = png_read(img_path.string(), opt.background);
            if (opt.downsample > 1) {
                // Box average over downsample x downsample blocks.
                const int dw = im.width / opt.downsample, dh = im.height / opt.downsample;
                Image small = Image::filled(dw, dh, {0, 0, 0});
                for (int j = 0; j < dh; ++j)
                    for (int i = 0; i < dw; ++i) {
                        float acc[3] = {0, 0, 0};
                        for (int y = 0; y < opt.downsample; ++y)
                            for (int x = 0; x < opt.downsample; ++x) {
                                const float* px =
                                    im.pixel(i * opt.downsample + x, j * opt.downsample + y);
                                for (int c = 0; c < 3; ++c) acc[c] += px[c];
                            }
                        const float inv = 1.f / (opt.downsample * opt.downsample);
                        float* out = small.pixel(i, j);
                        for (int c = 0; c < 3; ++c) out[c] = acc[c] * inv;
                    }
                im = std::move(small);
            }
            w = im.width;
            h = im.height;
            views.images.push_back(std::move(im));
        } else {
            w /= opt.downsample;
            h /= opt.downsample;
        }

        cam.width = w;
        cam.height = h;
        cam.focal = focal_from_fov(fov_x, w);
        cam.t_near = opt.t_near;
        cam.t_far = opt.t_far;
        try {
            cam.validate();
        } catch (const ConfigError& e) {
            throw IoError("load_pose_file: invalid pose in " + path + ": " + e.what());
        }
        views.cameras.push_back(cam);
    }
    return views;
}

void save_pose_file(const std::string& path, const ViewSet& views,
                    const std::vector<std::string>& file_paths) {
    if (views.cameras.empty()) throw ConfigError("save_pose_file: no cameras");
    json doc;
    const Camera<float>& first = views.cameras.front();
    doc["camera_angle_x"] = 2.0 * std::atan(0.5 * first.width / first.focal);
    doc["frames"] = json::array();
    for (std::size_t i = 0; i < views.cameras.size(); ++i) {
        json frame;
        frame["file_path"] =
            i < file_paths.size() ? file_paths[i] : ("frame_" + std::to_string(i));
        json rows = json::array();
        for (int r = 0; r < 4; ++r) {
            json row = json::array();
            for (int c = 0; c < 4; ++c) row.push_back(views.cameras[i].c2w[r][c]);
            rows.push_back(row);
        }
        frame["transform_matrix"] = rows;
        doc["frames"].push_back(frame);
    }
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("save_pose_file: cannot open " + path);
    os << std::setprecision(17) << doc.dump(1);
    if (!os) throw IoError("save_pose_file: write failed for " + path);
}

}  // namespace fieldforge
