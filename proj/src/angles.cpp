#include "ergokit/angles.hpp"

#include "ergokit/skeleton3d.hpp"

namespace ergokit {

namespace {

struct AngleMeta {
    const char* acronym;
    const char* description;
};

constexpr AngleMeta kAngleMeta[kNumAngles] = {
    {"EL", "left elbow"},
    {"ER", "right elbow"},
    {"SL", "left shoulder"},
    {"SR", "right shoulder"},
    {"SL2", "left shoulder 2"},
    {"SR2", "right shoulder 2"},
    {"KL", "left knee"},
    {"KR", "right knee"},
    {"NT", "neck twisting"},
    {"NBL", "neck bending left"},
    {"NBR", "neck bending right"},
    {"NF", "neck flexion"},
    {"TTR", "trunk twisting right"},
    {"TTL", "trunk twisting left"},
    {"TB", "trunk bending"},
    {"TF", "trunk flexion"},
};

std::array<AngleDefinition, kNumAngles> make_definitions() {
    using PS = PointSpec;
    return {{
        {AngleName::EL, PS::kp(4), PS::kp(3), PS::kp(2)},
        {AngleName::ER, PS::kp(5), PS::kp(6), PS::kp(7)},
        {AngleName::SL, PS::kp(3), PS::kp(2), PS::kp(9)},
        {AngleName::SR, PS::kp(6), PS::kp(5), PS::kp(12)},
        {AngleName::SL2, PS::kp(3), PS::kp(2), PS::kp(1)},
        {AngleName::SR2, PS::kp(6), PS::kp(5), PS::kp(1)},
        {AngleName::KL, PS::kp(9), PS::kp(10), PS::kp(11)},
        {AngleName::KR, PS::kp(12), PS::kp(13), PS::kp(14)},
        // Head keypoint 0 replaced by the middle-ear point.
        {AngleName::NT, PS::middle_ear(), PS::kp(1), PS::kp(2)},
        {AngleName::NBL, PS::kp(17), PS::kp(1), PS::kp(2)},
        {AngleName::NBR, PS::kp(18), PS::kp(1), PS::kp(5)},
        {AngleName::NF, PS::kp(0), PS::kp(1), PS::kp(8)},
        {AngleName::TTR, PS::kp(2), PS::kp(8), PS::kp(9)},
        {AngleName::TTL, PS::kp(5), PS::kp(8), PS::kp(12)},
        {AngleName::TB, PS::kp(9), PS::kp(8), PS::kp(1)},
        // Knees 10 and 13 combined into the mid-knee point.
        {AngleName::TF, PS::mid_knee(), PS::kp(8), PS::kp(1)},
    }};
}

template <typename Pose, typename V>
std::optional<V> resolve_spec(const Pose& pose, const PointSpec& spec);

template <typename V, typename Getter>
std::optional<V> resolve_spec_with(const PointSpec& spec, Getter get) {
    switch (spec.kind) {
        case PointSpec::Kind::Keypoint:
            return get(spec.keypoint);
        case PointSpec::Kind::MiddleEar: {
            auto a = get(kREar);
            auto b = get(kLEar);
            if (!a || !b) return std::nullopt;
            return midpoint(*a, *b);
        }
        case PointSpec::Kind::MidKnee: {
            auto a = get(kRKnee);
            auto b = get(kLKnee);
            if (!a || !b) return std::nullopt;
            return midpoint(*a, *b);
        }
    }
    return std::nullopt;
}

}  // namespace

const char* angle_acronym(AngleName name) {
    return kAngleMeta[static_cast<int>(name)].acronym;
}

const char* angle_description(AngleName name) {
    return kAngleMeta[static_cast<int>(name)].description;
}

std::optional<AngleName> parse_angle_acronym(std::string_view acronym) {
    for (int i = 0; i < kNumAngles; ++i) {
        if (acronym == kAngleMeta[i].acronym) return static_cast<AngleName>(i);
    }
    return std::nullopt;
}

std::vector<int> PointSpec::constituents() const {
    switch (kind) {
        case Kind::Keypoint:
            return {keypoint};
        case Kind::MiddleEar:
            return {kREar, kLEar};
        case Kind::MidKnee:
            return {kRKnee, kLKnee};
    }
    return {};
}

std::vector<int> AngleDefinition::required_keypoints() const {
    std::vector<int> out;
    for (const PointSpec* spec : {&point_a, &vertex, &point_c}) {
        for (int id : spec->constituents()) out.push_back(id);
    }
    return out;
}

const std::array<AngleDefinition, kNumAngles>& angle_definitions() {
    static const auto defs = make_definitions();
    return defs;
}

const AngleDefinition& angle_definition(AngleName name) {
    return angle_definitions()[static_cast<size_t>(name)];
}

std::optional<std::array<Vec2, 3>> resolve_points(const PoseFrame& pose,
                                                  const AngleDefinition& def) {
    auto get = [&pose](int id) -> std::optional<Vec2> {
        const Keypoint& kp = pose[id];
        if (!kp.present()) return std::nullopt;
        return kp.position();
    };
    auto a = resolve_spec_with<Vec2>(def.point_a, get);
    auto b = resolve_spec_with<Vec2>(def.vertex, get);
    auto c = resolve_spec_with<Vec2>(def.point_c, get);
    if (!a || !b || !c) return std::nullopt;
    return std::array<Vec2, 3>{*a, *b, *c};
}

std::optional<std::array<Vec3, 3>> resolve_points(const Skeleton3D& skeleton,
                                                  const AngleDefinition& def) {
    auto get = [&skeleton](int id) -> std::optional<Vec3> {
        return skeleton.joints[static_cast<size_t>(id)];
    };
    auto a = resolve_spec_with<Vec3>(def.point_a, get);
    auto b = resolve_spec_with<Vec3>(def.vertex, get);
    auto c = resolve_spec_with<Vec3>(def.point_c, get);
    if (!a || !b || !c) return std::nullopt;
    return std::array<Vec3, 3>{*a, *b, *c};
}

JointAngleSet apparent_angles_2d(
    const PoseFrame& pose,
    std::vector<std::pair<AngleName, std::string>>* diagnostics) {
    JointAngleSet out;
    for (const AngleDefinition& def : angle_definitions()) {
        auto points = resolve_points(pose, def);
        if (!points) continue;
        try {
            out[def.name] = angle_at_vertex((*points)[0], (*points)[1], (*points)[2]);
        } catch (const DegenerateTriple& e) {
            if (diagnostics) diagnostics->emplace_back(def.name, e.what());
        }
    }
    return out;
}

JointAngleSet ground_truth_angles(const Skeleton3D& skeleton) {
    JointAngleSet out;
    for (const AngleDefinition& def : angle_definitions()) {
        auto points = resolve_points(skeleton, def);
        out[def.name] = angle_at_vertex((*points)[0], (*points)[1], (*points)[2]);
    }
    return out;
}

}  // namespace ergokit
