#pragma once

#include <array>
#include <string>

#include "ergokit/body25.hpp"
#include "ergokit/geometry.hpp"

namespace ergokit {

// A keypoint is "present" iff its confidence clears this threshold.
// OpenPose emits zeros for undetected parts and small positive values
// for unreliable ones.
constexpr double kPresenceThreshold = 0.05;

struct Keypoint {
    double x = 0.0;
    double y = 0.0;
    double confidence = 0.0;

    bool present() const { return confidence >= kPresenceThreshold; }
    Vec2 position() const { return {x, y}; }
};

// One detected person: 25 keypoints in pixel coordinates.
struct PoseFrame {
    std::array<Keypoint, kNumKeypoints> keypoints{};
    std::string source_id;
    int person_index = 0;

    Keypoint& operator[](int id) { return keypoints[static_cast<size_t>(id)]; }
    const Keypoint& operator[](int id) const {
        return keypoints[static_cast<size_t>(id)];
    }

    int present_count() const {
        int n = 0;
        for (const auto& kp : keypoints) n += kp.present() ? 1 : 0;
        return n;
    }
};

}  // namespace ergokit
