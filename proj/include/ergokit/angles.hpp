#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ergokit/pose.hpp"

namespace ergokit {

struct Skeleton3D;

// The 16 joint angles scored by the assessment, in table order.
enum class AngleName : int {
    EL = 0,  // left elbow
    ER,      // right elbow
    SL,      // left shoulder
    SR,      // right shoulder
    SL2,     // left shoulder 2
    SR2,     // right shoulder 2
    KL,      // left knee
    KR,      // right knee
    NT,      // neck twisting
    NBL,     // neck bending left
    NBR,     // neck bending right
    NF,      // neck flexion
    TTR,     // trunk twisting right
    TTL,     // trunk twisting left
    TB,      // trunk bending
    TF,      // trunk flexion
};

constexpr int kNumAngles = 16;

constexpr std::array<AngleName, kNumAngles> kAllAngles = {
    AngleName::EL,  AngleName::ER,  AngleName::SL,  AngleName::SR,
    AngleName::SL2, AngleName::SR2, AngleName::KL,  AngleName::KR,
    AngleName::NT,  AngleName::NBL, AngleName::NBR, AngleName::NF,
    AngleName::TTR, AngleName::TTL, AngleName::TB,  AngleName::TF,
};

const char* angle_acronym(AngleName name);
const char* angle_description(AngleName name);
std::optional<AngleName> parse_angle_acronym(std::string_view acronym);

// An angle triple endpoint: either a raw keypoint or a derived midpoint.
struct PointSpec {
    enum class Kind { Keypoint, MiddleEar, MidKnee };
    Kind kind = Kind::Keypoint;
    int keypoint = 0;

    static PointSpec kp(int id) { return {Kind::Keypoint, id}; }
    static PointSpec middle_ear() { return {Kind::MiddleEar, -1}; }
    static PointSpec mid_knee() { return {Kind::MidKnee, -1}; }

    // Raw keypoints this spec depends on.
    std::vector<int> constituents() const;
};

// One row of the angle table: the interior angle at `vertex` between the
// rays toward `point_a` and `point_c`.
struct AngleDefinition {
    AngleName name;
    PointSpec point_a;
    PointSpec vertex;
    PointSpec point_c;

    // Every raw keypoint that must be present for the angle to resolve.
    std::vector<int> required_keypoints() const;
};

// All 16 definitions, in table order, with the middle-ear and mid-knee
// substitutions applied.
const std::array<AngleDefinition, kNumAngles>& angle_definitions();

const AngleDefinition& angle_definition(AngleName name);

// Map from angle name to optional value in [0, 180] degrees.
class JointAngleSet {
  public:
    std::optional<double>& operator[](AngleName name) {
        return values_[static_cast<size_t>(name)];
    }
    const std::optional<double>& operator[](AngleName name) const {
        return values_[static_cast<size_t>(name)];
    }

    bool all_present() const {
        for (const auto& v : values_)
            if (!v) return false;
        return true;
    }

    int present_count() const {
        int n = 0;
        for (const auto& v : values_) n += v ? 1 : 0;
        return n;
    }

  private:
    std::array<std::optional<double>, kNumAngles> values_{};
};

// Concrete coordinates for a definition's triple, or nullopt if any
// required keypoint is missing. Virtual points are midpoints of their
// two constituents.
std::optional<std::array<Vec2, 3>> resolve_points(const PoseFrame& pose,
                                                  const AngleDefinition& def);
std::optional<std::array<Vec3, 3>> resolve_points(const Skeleton3D& skeleton,
                                                  const AngleDefinition& def);

// Interior angles measured directly on the 2D keypoints. Angles whose
// keypoints are missing (or degenerate) come back absent; degenerate
// triples are additionally reported through `diagnostics` when given.
JointAngleSet apparent_angles_2d(
    const PoseFrame& pose,
    std::vector<std::pair<AngleName, std::string>>* diagnostics = nullptr);

// Exact angles of a full 3D skeleton; all 16 present.
JointAngleSet ground_truth_angles(const Skeleton3D& skeleton);

}  // namespace ergokit
