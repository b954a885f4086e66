#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ergokit/pose.hpp"
#include "ergokit/synthgen.hpp"

namespace ergokit {

// Anchor-relative, torso-scaled keypoints. The anchor (mid-hip when
// present, else neck) sits at the origin; when both torso endpoints are
// present the torso length is exactly 1.
struct NormalizedPose {
    std::array<Keypoint, kNumKeypoints> keypoints{};
    std::array<bool, kNumKeypoints> present{};
};

constexpr int kRelationChannels = 5;

// Pairwise-feature grid over all keypoint pairs, the regressor input.
// Channels: 0 dx(j-i), 1 dy(j-i), 2 distance, 3 min confidence,
// 4 skeleton-edge indicator. mask[i][j] = 1 iff both keypoints present;
// features are zero wherever the mask is zero and on the diagonal.
struct RelationTensor {
    // Row-major (i, j, channel), 25 x 25 x 5.
    std::vector<double> features =
        std::vector<double>(kNumKeypoints * kNumKeypoints * kRelationChannels, 0.0);
    // Row-major (i, j), 25 x 25, values 0 or 1.
    std::vector<double> mask =
        std::vector<double>(kNumKeypoints * kNumKeypoints, 0.0);

    double& at(int i, int j, int c) {
        return features[static_cast<size_t>((i * kNumKeypoints + j) * kRelationChannels + c)];
    }
    double at(int i, int j, int c) const {
        return features[static_cast<size_t>((i * kNumKeypoints + j) * kRelationChannels + c)];
    }
    double& mask_at(int i, int j) {
        return mask[static_cast<size_t>(i * kNumKeypoints + j)];
    }
    double mask_at(int i, int j) const {
        return mask[static_cast<size_t>(i * kNumKeypoints + j)];
    }
};

// Throws NoAnchor when neither mid-hip nor neck is present and
// TooFewKeypoints when fewer than two distinct keypoints are present.
NormalizedPose normalize_pose(const PoseFrame& frame);

RelationTensor relation_tensor(const NormalizedPose& pose);

// Convenience composition used by prediction and training paths.
RelationTensor frame_tensor(const PoseFrame& frame);

struct TensorBatch {
    struct Labeled {
        RelationTensor tensor;
        JointAngleSet truth;
        std::int64_t sample_id = 0;
    };
    struct Drop {
        std::int64_t sample_id = 0;
        std::string reason;
    };
    std::vector<Labeled> items;
    std::vector<Drop> drops;
};

// One tensor per sample; samples whose normalization fails are dropped
// and reported, never thrown.
TensorBatch batch_tensors(const std::vector<PoseSample>& samples);

}  // namespace ergokit
