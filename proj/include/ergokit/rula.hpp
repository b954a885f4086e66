#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ergokit/angles.hpp"

namespace ergokit {

// All numeric scoring data: per-group deviation bins, neutral references,
// flag rules, and the three lookup tables. Loaded from an editable JSON
// file; validated on load so scoring never sees gaps or overlaps.
class RulaBins {
  public:
    struct Interval {
        double lo = 0.0;  // inclusive
        double hi = 0.0;  // exclusive, except the last interval closes at 180
        int score = 1;
    };
    struct Group {
        std::vector<Interval> intervals;
        int min_score = 1;
        int max_score = 1;
    };
    // Adds `delta` to `group` when any source angle deviates from its
    // neutral reference by more than `band` degrees.
    struct FlagRule {
        std::string name;
        std::string group;
        std::vector<AngleName> sources;
        double band = 0.0;
        int delta = 0;
    };
    struct ActionLevel {
        int min = 0;
        int max = 0;
        std::string text;
    };

    static RulaBins parse(const std::string& json_text);
    static RulaBins load_file(const std::filesystem::path& path);
    static RulaBins load_default();

    // Worksheet deviation from the neutral posture: limb angles unfold
    // (180 - interior), everything else measures against its configured
    // neutral reference.
    double flexion_from_interior(AngleName name, double interior) const;

    // Base score from the interval containing `deviation`, plus
    // `flag_delta`, clamped to the group's score range.
    int group_score(const std::string& group, double deviation,
                    int flag_delta = 0) const;

    bool has_neutral(AngleName name) const { return neutral_.count(name) > 0; }
    double neutral(AngleName name) const { return neutral_.at(name); }
    const std::vector<FlagRule>& flag_rules() const { return flag_rules_; }

    int table_a(int upper_arm, int lower_arm, int wrist, int wrist_twist) const;
    int table_b(int neck, int trunk, int legs) const;
    int table_c(int wrist_arm, int neck_trunk_legs) const;
    const std::string& action_level(int grand) const;

  private:
    void validate() const;

    std::map<std::string, Group> groups_;
    std::map<AngleName, double> neutral_;
    std::vector<FlagRule> flag_rules_;
    std::vector<int> table_a_;  // [upper 6][lower 3][wrist 4][twist 2]
    std::vector<int> table_b_;  // [neck 6][trunk 6][legs 2]
    std::vector<int> table_c_;  // [wrist_arm 8][neck_trunk_legs 7]
    std::vector<ActionLevel> action_levels_;
};

// Returns the raw JSON shipped as the default configuration.
const char* default_rula_bins_json();

struct RulaInput {
    enum class Side { Left, Right };

    JointAngleSet angles;
    int wrist_score = 1;        // 1..4, observed, not estimated
    int wrist_twist_score = 1;  // 1..2
    int muscle_score = 0;       // 0..1
    int force_score = 0;        // 0..3
    bool legs_supported = true;
    Side side = Side::Right;
};

struct RulaResult {
    int upper_arm = 0;
    int lower_arm = 0;
    int neck = 0;
    int trunk = 0;
    int legs = 0;
    int score_a = 0;
    int score_b = 0;
    int grand = 0;
    std::string action_level;
    std::vector<std::string> fired_flags;
};

// Full scoring chain: group scores -> table A (with wrist inputs) and
// table B (with legs) -> muscle and force -> table C grand score.
// Throws MissingAngle when a required angle for the chosen side is absent.
RulaResult rula_score(const RulaInput& input, const RulaBins& bins);

}  // namespace ergokit
