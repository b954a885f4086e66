#include "ergokit/camera.hpp"

#include <algorithm>
#include <cmath>

#include "ergokit/errors.hpp"

namespace ergokit {

PoseFrame project(const Skeleton3D& skeleton, const CameraSpec& camera) {
    std::array<Vec3, kNumKeypoints> rotated;
    for (int i = 0; i < kNumKeypoints; ++i) {
        const Vec3& j = skeleton.joints[static_cast<size_t>(i)];
        rotated[static_cast<size_t>(i)] =
            rotate_about_x(rotate_about_y(j, camera.azimuth), camera.elevation);
    }

    PoseFrame frame;
    const double cx = camera.image_width * 0.5;
    const double cy = camera.image_height * 0.5;

    if (camera.mode == CameraSpec::Mode::Pinhole) {
        for (int i = 0; i < kNumKeypoints; ++i) {
            const Vec3& p = rotated[static_cast<size_t>(i)];
            const double depth = camera.distance - p.z;
            if (depth <= 1e-9) {
                throw BehindCamera("joint " + std::string(keypoint_name(i)) +
                                   " at or behind the camera plane");
            }
            frame[i] = {cx + camera.focal * p.x / depth,
                        cy - camera.focal * p.y / depth, 1.0};
        }
        return frame;
    }

    double scale = camera.ortho_scale;
    Vec2 center{0.0, 0.0};
    if (scale <= 0.0) {
        // Auto-fit: uniform scale and centering from the bounding box,
        // which preserves every apparent angle.
        double min_x = rotated[0].x, max_x = rotated[0].x;
        double min_y = rotated[0].y, max_y = rotated[0].y;
        for (const Vec3& p : rotated) {
            min_x = std::min(min_x, p.x);
            max_x = std::max(max_x, p.x);
            min_y = std::min(min_y, p.y);
            max_y = std::max(max_y, p.y);
        }
        const double extent = std::max(max_x - min_x, max_y - min_y);
        scale = 0.8 * std::min(camera.image_width, camera.image_height) /
                std::max(extent, 1e-9);
        center = {(min_x + max_x) * 0.5, (min_y + max_y) * 0.5};
    }
    for (int i = 0; i < kNumKeypoints; ++i) {
        const Vec3& p = rotated[static_cast<size_t>(i)];
        frame[i] = {cx + scale * (p.x - center.x),
                    cy - scale * (p.y - center.y), 1.0};
    }
    return frame;
}

}  // namespace ergokit
