#pragma once

#include <array>
#include <map>
#include <utility>

#include "ergokit/angles.hpp"
#include "ergokit/body25.hpp"
#include "ergokit/geometry.hpp"
#include "ergokit/rng.hpp"

namespace ergokit {

// Bone lengths keyed by skeleton edge, in body-length units.
using BoneLengths = std::map<std::pair<int, int>, double>;

// Default proportions, torso (1,8) = 1.0. Plausible adult proportions;
// exact values are configuration, not correctness.
BoneLengths default_bone_lengths();

// Full 3D joint set. Invariant: |joint_i - joint_j| equals
// bone_lengths[(i,j)] within 1e-9 for every skeleton edge.
struct Skeleton3D {
    std::array<Vec3, kNumKeypoints> joints{};
    BoneLengths bone_lengths;

    // Largest violation of the bone-length invariant, for tests.
    double max_bone_length_error() const;
};

// Interior-angle range per controllable joint.
struct AngleLimits {
    std::map<AngleName, std::pair<double, double>> ranges;

    static AngleLimits defaults();
};

// Out-of-plane variation applied on top of the in-plane construction.
// All values are half-cone angles in degrees.
struct PoseVariation {
    double arm_swing = 0.0;    // whole arm about the shoulder
    double forearm_swing = 0.0;
    double leg_swing = 0.0;    // whole leg about the hip
    double torso_lean = 0.0;   // upper body about the mid-hip, fwd/back
    double torso_side = 0.0;   // upper body about the mid-hip, sideways
    double head_nod = 0.0;
    double head_tilt = 0.0;
    double head_turn = 0.0;

    static PoseVariation defaults();
    static PoseVariation none() { return {}; }
};

// Builds a canonical frontal-plane (z = 0) skeleton that realizes every
// requested interior angle exactly. Accepted keys: EL, ER, KL, KR, SL,
// SR, NF; anything else is jointly over-constrained and rejected.
Skeleton3D build_skeleton(const std::map<AngleName, double>& angle_config,
                          const BoneLengths& bones = default_bone_lengths());

// Randomized skeleton: controllable joints drawn uniformly from their
// limits, then limb/torso/head rotations within `variation` cones.
// Rejection-free; ground truth is read back with ground_truth_angles.
Skeleton3D sample_skeleton(Rng& rng, const AngleLimits& limits,
                           const BoneLengths& bones = default_bone_lengths(),
                           const PoseVariation& variation = PoseVariation::defaults());

// Applies the variation cones to an already-built frontal skeleton.
void apply_pose_variation(Skeleton3D& skeleton, Rng& rng,
                          const PoseVariation& variation);

}  // namespace ergokit
