#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <utility>

namespace ergokit {

// OpenPose BODY_25 keypoint vocabulary. Indices are wire format and must
// never change. Side prefixes follow the usual BODY_25 drawing convention;
// the angle table treats side names as opaque labels.
enum KeypointId : int {
    kNose = 0,
    kNeck = 1,
    kRShoulder = 2,
    kRElbow = 3,
    kRWrist = 4,
    kLShoulder = 5,
    kLElbow = 6,
    kLWrist = 7,
    kMidHip = 8,
    kRHip = 9,
    kRKnee = 10,
    kRAnkle = 11,
    kLHip = 12,
    kLKnee = 13,
    kLAnkle = 14,
    kREye = 15,
    kLEye = 16,
    kREar = 17,
    kLEar = 18,
    kLBigToe = 19,
    kLSmallToe = 20,
    kLHeel = 21,
    kRBigToe = 22,
    kRSmallToe = 23,
    kRHeel = 24,
};

constexpr int kNumKeypoints = 25;

const char* keypoint_name(int id);

// The 24 edges of the BODY_25 skeleton tree.
constexpr std::array<std::pair<int, int>, 24> kSkeletonEdges = {{
    {1, 8},  {1, 2},   {1, 5},   {2, 3},   {3, 4},   {5, 6},
    {6, 7},  {8, 9},   {9, 10},  {10, 11}, {8, 12},  {12, 13},
    {13, 14},{1, 0},   {0, 15},  {15, 17}, {0, 16},  {16, 18},
    {14, 19},{19, 20}, {14, 21}, {11, 22}, {22, 23}, {11, 24},
}};

bool are_adjacent(int a, int b);

// Named keypoint chains used by limb occlusion policies.
enum class LimbChain { RightArm, LeftArm, RightLeg, LeftLeg, Head };

// Keypoints belonging to a named chain.
const std::array<int, 6>& chain_keypoints(LimbChain chain, int& count);

std::string_view chain_name(LimbChain chain);
bool parse_chain_name(std::string_view name, LimbChain& out);

}  // namespace ergokit
