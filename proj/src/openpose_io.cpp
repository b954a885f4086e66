#include "ergokit/openpose_io.hpp"

#include <json.hpp>

#include "ergokit/errors.hpp"

namespace ergokit {

namespace {
using json = nlohmann::ordered_json;
constexpr std::size_t kFlatLength = kNumKeypoints * 3;
}  // namespace

std::vector<PoseFrame> parse_openpose_json(const std::string& text,
                                           const std::string& source_id) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw MalformedJson(e.what());
    }
    if (!doc.is_object()) throw MalformedJson("top level is not an object");
    std::vector<PoseFrame> frames;
    if (!doc.contains("people")) return frames;
    const json& people = doc["people"];
    if (!people.is_array()) throw MalformedJson("\"people\" is not an array");

    int index = 0;
    for (const json& person : people) {
        if (!person.is_object() || !person.contains("pose_keypoints_2d")) {
            throw MalformedJson("person " + std::to_string(index) +
                                " has no pose_keypoints_2d");
        }
        const json& flat = person["pose_keypoints_2d"];
        if (!flat.is_array()) {
            throw MalformedJson("pose_keypoints_2d is not an array");
        }
        if (flat.size() != kFlatLength) {
            throw WrongArrayLength(kFlatLength, flat.size());
        }
        PoseFrame frame;
        frame.source_id = source_id;
        frame.person_index = index;
        for (int i = 0; i < kNumKeypoints; ++i) {
            const std::size_t base = static_cast<std::size_t>(i) * 3;
            if (!flat[base].is_number() || !flat[base + 1].is_number() ||
                !flat[base + 2].is_number()) {
                throw MalformedJson("pose_keypoints_2d holds a non-number");
            }
            frame[i] = {flat[base].get<double>(), flat[base + 1].get<double>(),
                        flat[base + 2].get<double>()};
        }
        frames.push_back(std::move(frame));
        ++index;
    }
    return frames;
}

std::string serialize_openpose(const std::vector<PoseFrame>& frames) {
    json doc;
    doc["version"] = 1.3;
    json people = json::array();
    for (const PoseFrame& frame : frames) {
        std::vector<double> flat;
        flat.reserve(kFlatLength);
        for (const Keypoint& kp : frame.keypoints) {
            flat.push_back(kp.x);
            flat.push_back(kp.y);
            flat.push_back(kp.confidence);
        }
        json person;
        person["person_id"] = json::array({-1});
        person["pose_keypoints_2d"] = std::move(flat);
        people.push_back(std::move(person));
    }
    doc["people"] = std::move(people);
    return doc.dump();
}

PoseFrame select_person(const std::vector<PoseFrame>& frames) {
    if (frames.empty()) throw EmptyPeople("no people detected");
    const PoseFrame* best = &frames.front();
    double best_sum = -1.0;
    for (const PoseFrame& frame : frames) {
        double sum = 0.0;
        for (const Keypoint& kp : frame.keypoints) sum += kp.confidence;
        if (sum > best_sum ||
            (sum == best_sum && frame.person_index < best->person_index)) {
            best = &frame;
            best_sum = sum;
        }
    }
    return *best;
}

}  // namespace ergokit
