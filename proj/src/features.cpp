#include "ergokit/features.hpp"

#include <cmath>

#include "ergokit/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ergokit {

NormalizedPose normalize_pose(const PoseFrame& frame) {
    int anchor = -1;
    if (frame[kMidHip].present()) {
        anchor = kMidHip;
    } else if (frame[kNeck].present()) {
        anchor = kNeck;
    } else {
        throw NoAnchor("neither mid-hip nor neck detected");
    }

    int n_present = 0;
    for (const auto& kp : frame.keypoints) n_present += kp.present() ? 1 : 0;
    if (n_present < 2) {
        throw TooFewKeypoints("need at least 2 present keypoints, have " +
                              std::to_string(n_present));
    }

    double scale = 0.0;
    if (frame[kNeck].present() && frame[kMidHip].present()) {
        scale = (frame[kNeck].position() - frame[kMidHip].position()).norm();
    } else {
        // Fallback: bounding-box diagonal of the present keypoints.
        double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
        bool first = true;
        for (const auto& kp : frame.keypoints) {
            if (!kp.present()) continue;
            if (first) {
                min_x = max_x = kp.x;
                min_y = max_y = kp.y;
                first = false;
            } else {
                min_x = std::min(min_x, kp.x);
                max_x = std::max(max_x, kp.x);
                min_y = std::min(min_y, kp.y);
                max_y = std::max(max_y, kp.y);
            }
        }
        scale = std::hypot(max_x - min_x, max_y - min_y);
    }
    if (scale <= 1e-12) {
        throw TooFewKeypoints("present keypoints are coincident");
    }

    const Vec2 origin = frame[anchor].position();
    NormalizedPose out;
    for (int i = 0; i < kNumKeypoints; ++i) {
        const Keypoint& kp = frame[i];
        if (!kp.present()) {
            out.keypoints[static_cast<size_t>(i)] = {0.0, 0.0, 0.0};
            out.present[static_cast<size_t>(i)] = false;
            continue;
        }
        out.keypoints[static_cast<size_t>(i)] = {(kp.x - origin.x) / scale,
                                                 (kp.y - origin.y) / scale,
                                                 kp.confidence};
        out.present[static_cast<size_t>(i)] = true;
    }
    return out;
}

RelationTensor relation_tensor(const NormalizedPose& pose) {
    static const auto adjacency = [] {
        std::array<std::array<double, kNumKeypoints>, kNumKeypoints> adj{};
        for (const auto& [a, b] : kSkeletonEdges) {
            adj[static_cast<size_t>(a)][static_cast<size_t>(b)] = 1.0;
            adj[static_cast<size_t>(b)][static_cast<size_t>(a)] = 1.0;
        }
        return adj;
    }();

    RelationTensor out;
    for (int i = 0; i < kNumKeypoints; ++i) {
        const auto& ki = pose.keypoints[static_cast<size_t>(i)];
        for (int j = 0; j < kNumKeypoints; ++j) {
            const auto& kj = pose.keypoints[static_cast<size_t>(j)];
            const bool both = pose.present[static_cast<size_t>(i)] &&
                              pose.present[static_cast<size_t>(j)];
            out.mask_at(i, j) = both ? 1.0 : 0.0;
            if (!both || i == j) continue;
            const double dx = kj.x - ki.x;
            const double dy = kj.y - ki.y;
            out.at(i, j, 0) = dx;
            out.at(i, j, 1) = dy;
            out.at(i, j, 2) = std::sqrt(dx * dx + dy * dy);
            out.at(i, j, 3) = std::min(ki.confidence, kj.confidence);
            out.at(i, j, 4) = adjacency[static_cast<size_t>(i)][static_cast<size_t>(j)];
        }
    }
    return out;
}

RelationTensor frame_tensor(const PoseFrame& frame) {
    return relation_tensor(normalize_pose(frame));
}

TensorBatch batch_tensors(const std::vector<PoseSample>& samples) {
    const std::int64_t n = static_cast<std::int64_t>(samples.size());
    std::vector<TensorBatch::Labeled> items(static_cast<size_t>(n));
    std::vector<std::string> failures(static_cast<size_t>(n));
    std::vector<char> failed(static_cast<size_t>(n), 0);

#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const PoseSample& sample = samples[static_cast<size_t>(i)];
        try {
            items[static_cast<size_t>(i)] = {frame_tensor(sample.frame),
                                             sample.truth, sample.sample_id};
        } catch (const std::exception& e) {
            failed[static_cast<size_t>(i)] = 1;
            failures[static_cast<size_t>(i)] = e.what();
        }
    }

    TensorBatch out;
    for (std::int64_t i = 0; i < n; ++i) {
        if (failed[static_cast<size_t>(i)]) {
            out.drops.push_back({samples[static_cast<size_t>(i)].sample_id,
                                 failures[static_cast<size_t>(i)]});
        } else {
            out.items.push_back(std::move(items[static_cast<size_t>(i)]));
        }
    }
    return out;
}

}  // namespace ergokit
