#include "ergokit/skeleton3d.hpp"

#include <algorithm>
#include <cmath>

#include "ergokit/errors.hpp"

namespace ergokit {

namespace {

std::pair<int, int> edge_key(int a, int b) {
    return {std::min(a, b), std::max(a, b)};
}

double bone_length(const BoneLengths& bones, int a, int b) {
    auto it = bones.find(edge_key(a, b));
    if (it == bones.end()) {
        throw Error(std::string("missing bone length for edge (") +
                    std::to_string(a) + "," + std::to_string(b) + ")");
    }
    return it->second;
}

Vec3 in_plane(const Vec2& v) { return {v.x, v.y, 0.0}; }

// Rotates the listed joints about a pivot joint. Axis must be unit length.
template <std::size_t N>
void rotate_subtree(Skeleton3D& s, const std::array<int, N>& ids, int pivot,
                    const Vec3& axis, double degrees) {
    const Vec3 origin = s.joints[static_cast<size_t>(pivot)];
    for (int id : ids) {
        Vec3& j = s.joints[static_cast<size_t>(id)];
        j = origin + rotate_about_axis(j - origin, axis, degrees);
    }
}

constexpr Vec3 kAxisX{1.0, 0.0, 0.0};
constexpr Vec3 kAxisY{0.0, 1.0, 0.0};
constexpr Vec3 kAxisZ{0.0, 0.0, 1.0};

constexpr std::array<int, 12> kUpperBody = {0, 1, 2, 3, 4, 5, 6, 7, 15, 16, 17, 18};
constexpr std::array<int, 5> kHeadChain = {0, 15, 16, 17, 18};

}  // namespace

BoneLengths default_bone_lengths() {
    BoneLengths b;
    auto set = [&b](int i, int j, double len) { b[edge_key(i, j)] = len; };
    set(1, 8, 1.0);    // torso
    set(1, 2, 0.20);   // shoulder offsets
    set(1, 5, 0.20);
    set(2, 3, 0.35);   // upper arms
    set(5, 6, 0.35);
    set(3, 4, 0.30);   // forearms
    set(6, 7, 0.30);
    set(8, 9, 0.12);   // hip offsets
    set(8, 12, 0.12);
    set(9, 10, 0.50);  // thighs
    set(12, 13, 0.50);
    set(10, 11, 0.45); // shins
    set(13, 14, 0.45);
    set(1, 0, 0.15);   // neck to nose
    set(0, 15, 0.05);  // nose to eyes
    set(0, 16, 0.05);
    set(15, 17, 0.07); // eyes to ears
    set(16, 18, 0.07);
    set(11, 22, 0.10); // ankle / toe triples
    set(22, 23, 0.05);
    set(11, 24, 0.06);
    set(14, 19, 0.10);
    set(19, 20, 0.05);
    set(14, 21, 0.06);
    return b;
}

double Skeleton3D::max_bone_length_error() const {
    double worst = 0.0;
    for (const auto& [i, j] : kSkeletonEdges) {
        const double want = bone_length(bone_lengths, i, j);
        const double got =
            (joints[static_cast<size_t>(i)] - joints[static_cast<size_t>(j)]).norm();
        worst = std::max(worst, std::abs(got - want));
    }
    return worst;
}

AngleLimits AngleLimits::defaults() {
    AngleLimits l;
    l.ranges[AngleName::EL] = {20.0, 180.0};
    l.ranges[AngleName::ER] = {20.0, 180.0};
    l.ranges[AngleName::SL] = {0.0, 135.0};
    l.ranges[AngleName::SR] = {0.0, 135.0};
    l.ranges[AngleName::KL] = {60.0, 180.0};
    l.ranges[AngleName::KR] = {60.0, 180.0};
    l.ranges[AngleName::NF] = {130.0, 180.0};
    return l;
}

PoseVariation PoseVariation::defaults() {
    PoseVariation v;
    v.arm_swing = 25.0;
    v.forearm_swing = 30.0;
    v.leg_swing = 10.0;
    v.torso_lean = 25.0;
    v.torso_side = 12.0;
    v.head_nod = 12.0;
    v.head_tilt = 12.0;
    v.head_turn = 25.0;
    return v;
}

Skeleton3D build_skeleton(const std::map<AngleName, double>& angle_config,
                          const BoneLengths& bones) {
    static const std::array<AngleName, 7> kSupported = {
        AngleName::EL, AngleName::ER, AngleName::KL, AngleName::KR,
        AngleName::SL, AngleName::SR, AngleName::NF,
    };
    for (const auto& [name, value] : angle_config) {
        if (std::find(kSupported.begin(), kSupported.end(), name) ==
            kSupported.end()) {
            throw InconsistentConfig(
                std::string("angle ") + angle_acronym(name) +
                " cannot be pinned; it is determined by the supported joints");
        }
        if (value < 0.0 || value > 180.0) {
            throw InvalidAngle(std::string(angle_acronym(name)) + " = " +
                               std::to_string(value) + " outside [0, 180]");
        }
    }
    auto requested = [&angle_config](AngleName name,
                                     double fallback) -> double {
        auto it = angle_config.find(name);
        return it == angle_config.end() ? fallback : it->second;
    };

    Skeleton3D s;
    s.bone_lengths = bones;
    auto L = [&bones](int a, int b) { return bone_length(bones, a, b); };
    auto place = [&s](int id, const Vec2& p) {
        s.joints[static_cast<size_t>(id)] = in_plane(p);
    };

    // Torso and offsets, +y up, chain 2/3/4 and 9/10/11 on the -x side.
    const Vec2 hip{0.0, 0.0};
    const Vec2 neck{0.0, L(1, 8)};
    place(kMidHip, hip);
    place(kNeck, neck);
    const Vec2 hipA = hip + Vec2{-L(8, 9), 0.0};
    const Vec2 hipB = hip + Vec2{L(8, 12), 0.0};
    place(kRHip, hipA);
    place(kLHip, hipB);
    const Vec2 shoulderA = neck + Vec2{-L(1, 2), 0.0};
    const Vec2 shoulderB = neck + Vec2{L(1, 5), 0.0};
    place(kRShoulder, shoulderA);
    place(kLShoulder, shoulderB);

    const Vec2 down{0.0, -1.0};

    // One arm: the shoulder angle is measured between the upper arm and the
    // shoulder-to-hip ray, so rotating that ray by the requested angle
    // realizes it exactly. `outward` is +1 when outward rotation for this
    // side is counterclockwise.
    auto place_arm = [&](const Vec2& shoulder, const Vec2& same_side_hip,
                         int elbow_id, int wrist_id, double shoulder_angle,
                         double elbow_angle, double outward, bool shoulder_given,
                         int shoulder_kp) {
        const Vec2 ref = same_side_hip - shoulder;
        const Vec2 ref_unit = ref * (1.0 / ref.norm());
        double theta = shoulder_angle;
        if (!shoulder_given) {
            // Neutral: arm hangs straight down.
            theta = angle_at_vertex(shoulder + ref_unit, shoulder, shoulder + down);
        }
        const Vec2 upper = rotate_ccw(ref_unit, outward * theta);
        const Vec2 elbow =
            shoulder + upper * L(shoulder_kp, elbow_id);
        const Vec2 fore = rotate_ccw(upper, outward * (180.0 - elbow_angle));
        place(elbow_id, elbow);
        place(wrist_id, elbow + fore * L(elbow_id, wrist_id));
    };
    place_arm(shoulderA, hipA, kRElbow, kRWrist,
              requested(AngleName::SL, 0.0), requested(AngleName::EL, 180.0),
              -1.0, angle_config.count(AngleName::SL) > 0, kRShoulder);
    place_arm(shoulderB, hipB, kLElbow, kLWrist,
              requested(AngleName::SR, 0.0), requested(AngleName::ER, 180.0),
              +1.0, angle_config.count(AngleName::SR) > 0, kLShoulder);

    // Legs hang from the hips; the knee angle bends the shin outward.
    auto place_leg = [&](const Vec2& hip_pt, int hip_id, int knee_id,
                         int ankle_id, int big_toe, int small_toe, int heel,
                         double knee_angle, double outward) {
        const Vec2 knee = hip_pt + down * L(hip_id, knee_id);
        const Vec2 shin = rotate_ccw(down, outward * (180.0 - knee_angle));
        const Vec2 ankle = knee + shin * L(knee_id, ankle_id);
        place(knee_id, knee);
        place(ankle_id, ankle);
        const Vec2 foot = rotate_ccw(shin, outward * 90.0);
        place(big_toe, ankle + foot * L(ankle_id, big_toe));
        place(small_toe, ankle + foot * (L(ankle_id, big_toe) + L(big_toe, small_toe)));
        place(heel, ankle - foot * L(ankle_id, heel));
    };
    place_leg(hipA, kRHip, kRKnee, kRAnkle, kRBigToe, kRSmallToe, kRHeel,
              requested(AngleName::KL, 180.0), -1.0);
    place_leg(hipB, kLHip, kLKnee, kLAnkle, kLBigToe, kLSmallToe, kLHeel,
              requested(AngleName::KR, 180.0), +1.0);

    // Head: neck flexion is the angle between the neck-to-nose ray and the
    // neck-to-hip ray (straight down), so the nose direction realizes it
    // directly.
    const Vec2 head_dir = rotate_ccw(down, requested(AngleName::NF, 180.0));
    const Vec2 nose = neck + head_dir * L(1, 0);
    place(kNose, nose);
    const Vec2 across = rotate_ccw(head_dir, 90.0);  // toward the -x side when upright
    const Vec2 eyeA = nose + (across * 0.6 + head_dir * 0.8) * L(0, 15);
    const Vec2 eyeB = nose + (across * -0.6 + head_dir * 0.8) * L(0, 16);
    place(kREye, eyeA);
    place(kLEye, eyeB);
    place(kREar, eyeA + across * L(15, 17));
    place(kLEar, eyeB - across * L(16, 18));

    return s;
}

void apply_pose_variation(Skeleton3D& s, Rng& rng, const PoseVariation& v) {
    auto cone = [&rng](double half) {
        return half <= 0.0 ? 0.0 : rng.uniform(-half, half);
    };

    // Arms: whole-arm swing out of plane, then a forearm twist about the
    // upper-arm axis (twist preserves the elbow angle).
    auto swing_arm = [&](int shoulder, int elbow, int wrist) {
        const std::array<int, 2> arm = {elbow, wrist};
        rotate_subtree(s, arm, shoulder, kAxisX, cone(v.arm_swing));
        rotate_subtree(s, arm, shoulder, kAxisY, cone(v.arm_swing));
        Vec3 axis = s.joints[static_cast<size_t>(elbow)] -
                    s.joints[static_cast<size_t>(shoulder)];
        const double n = axis.norm();
        if (n > 1e-12) {
            axis = axis * (1.0 / n);
            const std::array<int, 1> hand = {wrist};
            rotate_subtree(s, hand, elbow, axis, cone(v.forearm_swing));
        }
    };
    swing_arm(kRShoulder, kRElbow, kRWrist);
    swing_arm(kLShoulder, kLElbow, kLWrist);

    // Legs: small whole-leg swing about the hip.
    const std::array<int, 5> legA = {kRKnee, kRAnkle, kRBigToe, kRSmallToe, kRHeel};
    const std::array<int, 5> legB = {kLKnee, kLAnkle, kLBigToe, kLSmallToe, kLHeel};
    rotate_subtree(s, legA, kRHip, kAxisX, cone(v.leg_swing));
    rotate_subtree(s, legB, kLHip, kAxisX, cone(v.leg_swing));

    // Head: nod (x), tilt (z), turn (y).
    rotate_subtree(s, kHeadChain, kNeck, kAxisX, cone(v.head_nod));
    rotate_subtree(s, kHeadChain, kNeck, kAxisZ, cone(v.head_tilt));
    rotate_subtree(s, kHeadChain, kNeck, kAxisY, cone(v.head_turn));

    // Torso last so arms and head ride along.
    rotate_subtree(s, kUpperBody, kMidHip, kAxisX, cone(v.torso_lean));
    rotate_subtree(s, kUpperBody, kMidHip, kAxisZ, cone(v.torso_side));
}

Skeleton3D sample_skeleton(Rng& rng, const AngleLimits& limits,
                           const BoneLengths& bones,
                           const PoseVariation& variation) {
    std::map<AngleName, double> config;
    // Fixed draw order keeps streams reproducible.
    static const std::array<AngleName, 7> kOrder = {
        AngleName::EL, AngleName::ER, AngleName::SL, AngleName::SR,
        AngleName::KL, AngleName::KR, AngleName::NF,
    };
    for (AngleName name : kOrder) {
        auto it = limits.ranges.find(name);
        if (it == limits.ranges.end()) continue;
        config[name] = rng.uniform(it->second.first, it->second.second);
    }
    Skeleton3D s = build_skeleton(config, bones);
    apply_pose_variation(s, rng, variation);
    return s;
}

}  // namespace ergokit
