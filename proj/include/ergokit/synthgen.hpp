#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "ergokit/camera.hpp"
#include "ergokit/pose.hpp"
#include "ergokit/rng.hpp"
#include "ergokit/skeleton3d.hpp"

namespace ergokit {

// Which keypoints get dropped from a projected frame.
struct OcclusionPolicy {
    enum class Kind { None, Random, Limb };
    Kind kind = Kind::None;
    double probability = 0.0;  // Random: per-keypoint drop probability
    LimbChain chain = LimbChain::RightArm;

    static OcclusionPolicy none() { return {}; }
    static OcclusionPolicy random(double p) {
        return {Kind::Random, p, LimbChain::RightArm};
    }
    static OcclusionPolicy limb(LimbChain chain) {
        return {Kind::Limb, 0.0, chain};
    }

    std::string to_string() const;
    static OcclusionPolicy parse(const std::string& text);
};

// One labeled training/evaluation sample. Truth is computed from the 3D
// skeleton before projection, jitter, and occlusion.
struct PoseSample {
    PoseFrame frame;
    JointAngleSet truth;
    CameraSpec camera;
    std::set<int> occluded;
    std::int64_t sample_id = 0;
};

// A named full-body angle configuration for the posture-library sampler.
struct Posture {
    std::string name;
    std::map<AngleName, double> angles;  // build_skeleton keys
};

// Working postures with both arms configured alike, so that a hidden limb
// stays inferable from its visible mirror. Per-sample jitter decorrelates
// the sides a little.
const std::vector<Posture>& default_posture_library();

struct DatasetSpec {
    std::int64_t count = 0;
    std::uint64_t seed = 0;
    OcclusionPolicy occlusion;
    std::vector<CameraSpec> cameras;  // empty: a frontal orthographic camera
    double jitter_sigma = 0.0;        // pixels
    AngleLimits angle_limits = AngleLimits::defaults();

    // Pose distribution: with `use_postures` each sample perturbs a random
    // library posture by +-posture_jitter per joint; otherwise joints are
    // drawn independently from angle_limits.
    bool use_postures = true;
    double posture_jitter = 8.0;  // degrees
    std::vector<Posture> postures;  // empty: default_posture_library()

    PoseVariation variation = PoseVariation::defaults();
    BoneLengths bones = default_bone_lengths();
};

// Zeroes occluded keypoints: coordinates (0, 0), confidence 0.
PoseFrame apply_occlusion(const PoseFrame& frame, const OcclusionPolicy& policy,
                          Rng& rng, std::set<int>& occluded);

// Gaussian localization noise on present keypoints; their confidences are
// resampled uniformly in [0.5, 1.0]. Missing keypoints stay untouched.
PoseFrame apply_jitter(const PoseFrame& frame, double sigma, Rng& rng);

// Generates spec.count samples. Sample i derives its own rng stream from
// (spec.seed, i), so output does not depend on generation order or thread
// count. Construction failures carry the sample index.
std::vector<PoseSample> generate_dataset(const DatasetSpec& spec);

// Single-sample path used by generate_dataset; exposed for tests.
PoseSample generate_sample(const DatasetSpec& spec, std::int64_t index);

}  // namespace ergokit
