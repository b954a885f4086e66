#include "ergokit/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ergokit/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ergokit {

std::string OcclusionPolicy::to_string() const {
    switch (kind) {
        case Kind::None:
            return "none";
        case Kind::Random: {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "random:%.6f", probability);
            return buf;
        }
        case Kind::Limb:
            return "limb:" + std::string(chain_name(chain));
    }
    return "none";
}

OcclusionPolicy OcclusionPolicy::parse(const std::string& text) {
    if (text == "none" || text.empty()) return none();
    if (text.rfind("random:", 0) == 0) {
        const double p = std::stod(text.substr(7));
        if (p < 0.0 || p > 1.0) {
            throw Error("occlusion probability " + std::to_string(p) +
                        " outside [0, 1]");
        }
        return random(p);
    }
    if (text.rfind("limb:", 0) == 0) {
        LimbChain chain;
        if (!parse_chain_name(text.substr(5), chain)) {
            throw Error("unknown limb chain '" + text.substr(5) + "'");
        }
        return limb(chain);
    }
    throw Error("cannot parse occlusion policy '" + text + "'");
}

const std::vector<Posture>& default_posture_library() {
    using A = AngleName;
    static const std::vector<Posture> kLibrary = {
        {"stand_neutral",
         {{A::EL, 180}, {A::ER, 180}, {A::SL, 5}, {A::SR, 5}, {A::KL, 180}, {A::KR, 180}, {A::NF, 180}}},
        {"t_pose",
         {{A::EL, 180}, {A::ER, 180}, {A::SL, 95}, {A::SR, 95}, {A::KL, 180}, {A::KR, 180}, {A::NF, 180}}},
        {"arms_up",
         {{A::EL, 170}, {A::ER, 170}, {A::SL, 170}, {A::SR, 170}, {A::KL, 180}, {A::KR, 180}, {A::NF, 170}}},
        {"reach_forward",
         {{A::EL, 160}, {A::ER, 160}, {A::SL, 75}, {A::SR, 75}, {A::KL, 175}, {A::KR, 175}, {A::NF, 170}}},
        {"elbows_bent",
         {{A::EL, 90}, {A::ER, 90}, {A::SL, 10}, {A::SR, 10}, {A::KL, 180}, {A::KR, 180}, {A::NF, 180}}},
        {"desk_typing",
         {{A::EL, 100}, {A::ER, 100}, {A::SL, 20}, {A::SR, 20}, {A::KL, 95}, {A::KR, 95}, {A::NF, 165}}},
        {"squat",
         {{A::EL, 150}, {A::ER, 150}, {A::SL, 30}, {A::SR, 30}, {A::KL, 90}, {A::KR, 90}, {A::NF, 175}}},
        {"deep_squat",
         {{A::EL, 120}, {A::ER, 120}, {A::SL, 25}, {A::SR, 25}, {A::KL, 60}, {A::KR, 60}, {A::NF, 170}}},
        {"folded_arms",
         {{A::EL, 0}, {A::ER, 0}, {A::SL, 45}, {A::SR, 45}, {A::KL, 180}, {A::KR, 180}, {A::NF, 175}}},
        {"lift_low",
         {{A::EL, 140}, {A::ER, 140}, {A::SL, 60}, {A::SR, 60}, {A::KL, 120}, {A::KR, 120}, {A::NF, 150}}},
        {"head_down",
         {{A::EL, 175}, {A::ER, 175}, {A::SL, 8}, {A::SR, 8}, {A::KL, 180}, {A::KR, 180}, {A::NF, 140}}},
        {"overhead_work",
         {{A::EL, 120}, {A::ER, 120}, {A::SL, 150}, {A::SR, 150}, {A::KL, 170}, {A::KR, 170}, {A::NF, 160}}},
        {"half_raise",
         {{A::EL, 170}, {A::ER, 170}, {A::SL, 70}, {A::SR, 70}, {A::KL, 180}, {A::KR, 180}, {A::NF, 178}}},
        {"crouch_reach",
         {{A::EL, 130}, {A::ER, 130}, {A::SL, 110}, {A::SR, 110}, {A::KL, 80}, {A::KR, 80}, {A::NF, 160}}},
    };
    return kLibrary;
}

PoseFrame apply_occlusion(const PoseFrame& frame, const OcclusionPolicy& policy,
                          Rng& rng, std::set<int>& occluded) {
    occluded.clear();
    PoseFrame out = frame;
    switch (policy.kind) {
        case OcclusionPolicy::Kind::None:
            break;
        case OcclusionPolicy::Kind::Random:
            for (int i = 0; i < kNumKeypoints; ++i) {
                if (rng.uniform() < policy.probability) occluded.insert(i);
            }
            break;
        case OcclusionPolicy::Kind::Limb: {
            int count = 0;
            const auto& ids = chain_keypoints(policy.chain, count);
            for (int k = 0; k < count; ++k) occluded.insert(ids[static_cast<size_t>(k)]);
            break;
        }
    }
    for (int id : occluded) out[id] = {0.0, 0.0, 0.0};
    return out;
}

PoseFrame apply_jitter(const PoseFrame& frame, double sigma, Rng& rng) {
    PoseFrame out = frame;
    for (auto& kp : out.keypoints) {
        if (!kp.present()) continue;
        // Fixed draw order per keypoint: dx, dy, confidence.
        const double dx = sigma > 0.0 ? rng.normal(0.0, sigma) : 0.0;
        const double dy = sigma > 0.0 ? rng.normal(0.0, sigma) : 0.0;
        kp.x += dx;
        kp.y += dy;
        kp.confidence = rng.uniform(0.5, 1.0);
    }
    return out;
}

PoseSample generate_sample(const DatasetSpec& spec, std::int64_t index) {
    Rng rng = Rng::derive(spec.seed, static_cast<std::uint64_t>(index));

    std::map<AngleName, double> config;
    if (spec.use_postures) {
        const auto& library =
            spec.postures.empty() ? default_posture_library() : spec.postures;
        const auto& posture = library[rng.uniform_index(library.size())];
        for (const auto& [name, value] : posture.angles) {
            const double jittered =
                value + rng.uniform(-spec.posture_jitter, spec.posture_jitter);
            config[name] = std::clamp(jittered, 0.0, 180.0);
        }
    } else {
        static const std::array<AngleName, 7> kOrder = {
            AngleName::EL, AngleName::ER, AngleName::SL, AngleName::SR,
            AngleName::KL, AngleName::KR, AngleName::NF,
        };
        for (AngleName name : kOrder) {
            auto it = spec.angle_limits.ranges.find(name);
            if (it == spec.angle_limits.ranges.end()) continue;
            config[name] = rng.uniform(it->second.first, it->second.second);
        }
    }

    Skeleton3D skeleton = build_skeleton(config, spec.bones);
    apply_pose_variation(skeleton, rng, spec.variation);

    PoseSample sample;
    sample.sample_id = index;
    sample.truth = ground_truth_angles(skeleton);
    sample.camera = spec.cameras.empty()
                        ? CameraSpec::frontal()
                        : spec.cameras[rng.uniform_index(spec.cameras.size())];
    PoseFrame frame = project(skeleton, sample.camera);
    frame.source_id = "synth:" + std::to_string(index);
    frame = apply_jitter(frame, spec.jitter_sigma, rng);
    sample.frame = apply_occlusion(frame, spec.occlusion, rng, sample.occluded);
    return sample;
}

std::vector<PoseSample> generate_dataset(const DatasetSpec& spec) {
    if (spec.count <= 0) throw Error("dataset count must be positive");
    std::vector<PoseSample> samples(static_cast<size_t>(spec.count));
    std::string first_error;
    std::int64_t first_error_index = -1;

#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < spec.count; ++i) {
        try {
            samples[static_cast<size_t>(i)] = generate_sample(spec, i);
        } catch (const std::exception& e) {
#pragma omp critical
            if (first_error_index < 0 || i < first_error_index) {
                first_error_index = i;
                first_error = e.what();
            }
        }
    }
    if (first_error_index >= 0) {
        throw Error("sample " + std::to_string(first_error_index) + ": " +
                    first_error);
    }
    return samples;
}

}  // namespace ergokit
