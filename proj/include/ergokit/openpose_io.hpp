#pragma once

#include <string>
#include <vector>

#include "ergokit/pose.hpp"

namespace ergokit {

// Parses an OpenPose BODY_25 document: top-level object with a "people"
// array, each person carrying a flat 75-number "pose_keypoints_2d" array.
// Hand/face/foot arrays are ignored. Zero people is a valid empty result.
std::vector<PoseFrame> parse_openpose_json(const std::string& text,
                                           const std::string& source_id = "");

// Emits a document that parse_openpose_json reads back identically;
// used for fixtures and round-trip checks.
std::string serialize_openpose(const std::vector<PoseFrame>& frames);

// The person with the greatest confidence sum; ties break to the lowest
// person index. Throws EmptyPeople on an empty sequence.
PoseFrame select_person(const std::vector<PoseFrame>& frames);

}  // namespace ergokit
