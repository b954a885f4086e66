#include "ergokit/rula.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "ergokit/errors.hpp"
#include "ergokit/io_util.hpp"

namespace ergokit {

namespace {

using json = nlohmann::json;

constexpr int kUpperDim = 6, kLowerDim = 3, kWristDim = 4, kTwistDim = 2;
constexpr int kNeckDim = 6, kTrunkDim = 6, kLegsDim = 2;
constexpr int kGrandRows = 8, kGrandCols = 7;

int checked_score(const json& cell, const char* table) {
    if (!cell.is_number_integer()) {
        throw InvalidBins(std::string(table) + ": non-integer cell");
    }
    const int v = cell.get<int>();
    if (v < 1) throw InvalidBins(std::string(table) + ": cell below 1");
    return v;
}

bool is_limb(AngleName name) {
    return name == AngleName::EL || name == AngleName::ER ||
           name == AngleName::KL || name == AngleName::KR;
}

}  // namespace

RulaBins RulaBins::parse(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw InvalidBins(std::string("bins config is not valid JSON: ") + e.what());
    }
    RulaBins bins;
    try {
        if (doc.at("format_version").get<int>() != 1) {
            throw InvalidBins("unsupported bins format_version");
        }
        for (const auto& [name, g] : doc.at("groups").items()) {
            Group group;
            group.min_score = g.at("score_range").at(0).get<int>();
            group.max_score = g.at("score_range").at(1).get<int>();
            for (const auto& row : g.at("intervals")) {
                group.intervals.push_back({row.at(0).get<double>(),
                                           row.at(1).get<double>(),
                                           row.at(2).get<int>()});
            }
            bins.groups_[name] = std::move(group);
        }
        for (const auto& [acronym, value] : doc.at("neutral_degrees").items()) {
            const auto angle = parse_angle_acronym(acronym);
            if (!angle) throw InvalidBins("neutral_degrees: unknown angle " + acronym);
            bins.neutral_[*angle] = value.get<double>();
        }
        for (const auto& rule : doc.at("flag_rules")) {
            FlagRule r;
            r.name = rule.at("name").get<std::string>();
            r.group = rule.at("group").get<std::string>();
            for (const auto& src : rule.at("sources")) {
                const auto angle = parse_angle_acronym(src.get<std::string>());
                if (!angle) {
                    throw InvalidBins("flag rule " + r.name + ": unknown angle");
                }
                r.sources.push_back(*angle);
            }
            r.band = rule.at("band_degrees").get<double>();
            r.delta = rule.at("delta").get<int>();
            bins.flag_rules_.push_back(std::move(r));
        }

        const json& ta = doc.at("table_a");
        for (int u = 0; u < kUpperDim; ++u)
            for (int l = 0; l < kLowerDim; ++l)
                for (int w = 0; w < kWristDim; ++w)
                    for (int t = 0; t < kTwistDim; ++t)
                        bins.table_a_.push_back(
                            checked_score(ta.at(u).at(l).at(w).at(t), "table_a"));
        const json& tb = doc.at("table_b");
        for (int nk = 0; nk < kNeckDim; ++nk)
            for (int tr = 0; tr < kTrunkDim; ++tr)
                for (int lg = 0; lg < kLegsDim; ++lg)
                    bins.table_b_.push_back(
                        checked_score(tb.at(nk).at(tr).at(lg), "table_b"));
        const json& tc = doc.at("table_c");
        for (int r = 0; r < kGrandRows; ++r)
            for (int c = 0; c < kGrandCols; ++c)
                bins.table_c_.push_back(checked_score(tc.at(r).at(c), "table_c"));

        for (const auto& level : doc.at("action_levels")) {
            bins.action_levels_.push_back({level.at("min").get<int>(),
                                           level.at("max").get<int>(),
                                           level.at("text").get<std::string>()});
        }
    } catch (const json::exception& e) {
        throw InvalidBins(std::string("bins config: ") + e.what());
    }
    bins.validate();
    return bins;
}

RulaBins RulaBins::load_file(const std::filesystem::path& path) {
    return parse(read_file(path));
}

RulaBins RulaBins::load_default() { return parse(default_rula_bins_json()); }

void RulaBins::validate() const {
    for (const char* required : {"upper_arm", "lower_arm", "neck", "trunk"}) {
        if (groups_.find(required) == groups_.end()) {
            throw InvalidBins(std::string("missing group ") + required);
        }
    }
    for (const auto& [name, group] : groups_) {
        if (group.intervals.empty()) {
            throw InvalidBins("group " + name + ": no intervals");
        }
        if (group.intervals.front().lo != 0.0) {
            throw InvalidBins("group " + name + ": intervals must start at 0");
        }
        double cursor = 0.0;
        for (const Interval& iv : group.intervals) {
            if (iv.lo != cursor) {
                throw InvalidBins("group " + name + ": gap or overlap at " +
                                  std::to_string(iv.lo));
            }
            if (iv.hi <= iv.lo) {
                throw InvalidBins("group " + name + ": empty interval");
            }
            if (iv.score < 1) {
                throw InvalidBins("group " + name + ": score below 1");
            }
            cursor = iv.hi;
        }
        if (cursor != 180.0) {
            throw InvalidBins("group " + name + ": intervals must cover [0, 180]");
        }
        if (group.min_score < 1 || group.max_score < group.min_score) {
            throw InvalidBins("group " + name + ": bad score_range");
        }
    }
    if (groups_.at("upper_arm").max_score > kUpperDim ||
        groups_.at("lower_arm").max_score > kLowerDim ||
        groups_.at("neck").max_score > kNeckDim ||
        groups_.at("trunk").max_score > kTrunkDim) {
        throw InvalidBins("group score_range exceeds its table dimension");
    }
    for (const FlagRule& rule : flag_rules_) {
        if (groups_.find(rule.group) == groups_.end()) {
            throw InvalidBins("flag rule " + rule.name + ": unknown group " +
                              rule.group);
        }
        for (AngleName src : rule.sources) {
            if (neutral_.find(src) == neutral_.end()) {
                throw InvalidBins("flag rule " + rule.name + ": no neutral for " +
                                  angle_acronym(src));
            }
        }
    }
    for (int v : table_c_) {
        if (v < 1 || v > 7) throw InvalidBins("table_c: grand scores must be 1..7");
    }
    if (action_levels_.empty()) throw InvalidBins("no action levels");
    for (int grand = 1; grand <= 7; ++grand) {
        action_level(grand);  // throws when uncovered
    }
}

double RulaBins::flexion_from_interior(AngleName name, double interior) const {
    if (interior < 0.0 || interior > 180.0) {
        throw InvalidAngle(std::string(angle_acronym(name)) + " = " +
                           std::to_string(interior) + " outside [0, 180]");
    }
    if (is_limb(name)) return 180.0 - interior;
    const auto it = neutral_.find(name);
    if (it == neutral_.end()) {
        throw InvalidBins(std::string("no neutral reference for ") +
                          angle_acronym(name));
    }
    return std::abs(interior - it->second);
}

int RulaBins::group_score(const std::string& group, double deviation,
                          int flag_delta) const {
    const auto it = groups_.find(group);
    if (it == groups_.end()) throw InvalidBins("unknown group " + group);
    const Group& g = it->second;
    int base = g.intervals.back().score;  // deviation == 180 lands here
    for (const Interval& iv : g.intervals) {
        if (deviation >= iv.lo && deviation < iv.hi) {
            base = iv.score;
            break;
        }
    }
    return std::clamp(base + flag_delta, g.min_score, g.max_score);
}

int RulaBins::table_a(int upper_arm, int lower_arm, int wrist,
                      int wrist_twist) const {
    const int u = std::clamp(upper_arm, 1, kUpperDim) - 1;
    const int l = std::clamp(lower_arm, 1, kLowerDim) - 1;
    const int w = std::clamp(wrist, 1, kWristDim) - 1;
    const int t = std::clamp(wrist_twist, 1, kTwistDim) - 1;
    return table_a_[static_cast<std::size_t>(
        ((u * kLowerDim + l) * kWristDim + w) * kTwistDim + t)];
}

int RulaBins::table_b(int neck, int trunk, int legs) const {
    const int n = std::clamp(neck, 1, kNeckDim) - 1;
    const int t = std::clamp(trunk, 1, kTrunkDim) - 1;
    const int l = std::clamp(legs, 1, kLegsDim) - 1;
    return table_b_[static_cast<std::size_t>((n * kTrunkDim + t) * kLegsDim + l)];
}

int RulaBins::table_c(int wrist_arm, int neck_trunk_legs) const {
    const int r = std::clamp(wrist_arm, 1, kGrandRows) - 1;
    const int c = std::clamp(neck_trunk_legs, 1, kGrandCols) - 1;
    return table_c_[static_cast<std::size_t>(r * kGrandCols + c)];
}

const std::string& RulaBins::action_level(int grand) const {
    for (const ActionLevel& level : action_levels_) {
        if (grand >= level.min && grand <= level.max) return level.text;
    }
    throw InvalidBins("no action level covers grand score " +
                      std::to_string(grand));
}

RulaResult rula_score(const RulaInput& input, const RulaBins& bins) {
    if (input.wrist_score < 1 || input.wrist_score > 4) {
        throw Error("wrist score must be 1..4");
    }
    if (input.wrist_twist_score < 1 || input.wrist_twist_score > 2) {
        throw Error("wrist twist score must be 1..2");
    }
    if (input.muscle_score < 0 || input.muscle_score > 1) {
        throw Error("muscle score must be 0..1");
    }
    if (input.force_score < 0 || input.force_score > 3) {
        throw Error("force score must be 0..3");
    }

    const bool left = input.side == RulaInput::Side::Left;
    const AngleName upper_name = left ? AngleName::SL : AngleName::SR;
    const AngleName lower_name = left ? AngleName::EL : AngleName::ER;

    auto required = [&input](AngleName name) -> double {
        const auto& v = input.angles[name];
        if (!v) {
            throw MissingAngle(std::string("angle ") + angle_acronym(name) +
                               " is required but absent");
        }
        return *v;
    };

    RulaResult result;

    // Flag rules fire when any present source angle leaves its neutral band.
    std::map<std::string, int> flag_delta;
    for (const RulaBins::FlagRule& rule : bins.flag_rules()) {
        bool fired = false;
        for (AngleName src : rule.sources) {
            const auto& v = input.angles[src];
            if (v && std::abs(*v - bins.neutral(src)) > rule.band) {
                fired = true;
                break;
            }
        }
        if (fired) {
            flag_delta[rule.group] += rule.delta;
            result.fired_flags.push_back(rule.name);
        }
    }

    result.upper_arm = bins.group_score(
        "upper_arm", bins.flexion_from_interior(upper_name, required(upper_name)),
        flag_delta["upper_arm"]);
    result.lower_arm = bins.group_score(
        "lower_arm", bins.flexion_from_interior(lower_name, required(lower_name)),
        flag_delta["lower_arm"]);
    result.neck = bins.group_score(
        "neck", bins.flexion_from_interior(AngleName::NF, required(AngleName::NF)),
        flag_delta["neck"]);
    result.trunk = bins.group_score(
        "trunk", bins.flexion_from_interior(AngleName::TF, required(AngleName::TF)),
        flag_delta["trunk"]);
    result.legs = input.legs_supported ? 1 : 2;

    result.score_a = bins.table_a(result.upper_arm, result.lower_arm,
                                  input.wrist_score, input.wrist_twist_score);
    result.score_b = bins.table_b(result.neck, result.trunk, result.legs);

    const int wrist_arm = result.score_a + input.muscle_score + input.force_score;
    const int neck_trunk_legs =
        result.score_b + input.muscle_score + input.force_score;
    result.grand = bins.table_c(wrist_arm, neck_trunk_legs);
    result.action_level = bins.action_level(result.grand);
    return result;
}

}  // namespace ergokit
