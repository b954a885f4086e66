#include "ergokit/body25.hpp"

namespace ergokit {

namespace {

constexpr const char* kNames[kNumKeypoints] = {
    "nose",      "neck",       "r_shoulder", "r_elbow",    "r_wrist",
    "l_shoulder","l_elbow",    "l_wrist",    "mid_hip",    "r_hip",
    "r_knee",    "r_ankle",    "l_hip",      "l_knee",     "l_ankle",
    "r_eye",     "l_eye",      "r_ear",      "l_ear",      "l_big_toe",
    "l_small_toe","l_heel",    "r_big_toe",  "r_small_toe","r_heel",
};

struct Chain {
    std::array<int, 6> ids;
    int count;
    const char* name;
};

constexpr Chain kChains[] = {
    {{2, 3, 4, 0, 0, 0}, 3, "right_arm"},
    {{5, 6, 7, 0, 0, 0}, 3, "left_arm"},
    {{9, 10, 11, 22, 23, 24}, 6, "right_leg"},
    {{12, 13, 14, 19, 20, 21}, 6, "left_leg"},
    {{0, 15, 16, 17, 18, 0}, 5, "head"},
};

}  // namespace

const char* keypoint_name(int id) {
    return (id >= 0 && id < kNumKeypoints) ? kNames[id] : "invalid";
}

bool are_adjacent(int a, int b) {
    for (const auto& [u, v] : kSkeletonEdges) {
        if ((u == a && v == b) || (u == b && v == a)) return true;
    }
    return false;
}

const std::array<int, 6>& chain_keypoints(LimbChain chain, int& count) {
    const Chain& c = kChains[static_cast<int>(chain)];
    count = c.count;
    return c.ids;
}

std::string_view chain_name(LimbChain chain) {
    return kChains[static_cast<int>(chain)].name;
}

bool parse_chain_name(std::string_view name, LimbChain& out) {
    for (int i = 0; i < 5; ++i) {
        if (name == kChains[i].name) {
            out = static_cast<LimbChain>(i);
            return true;
        }
    }
    return false;
}

}  // namespace ergokit
