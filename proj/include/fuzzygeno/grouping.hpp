#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "fuzzygeno/classifier.hpp"
#include "fuzzygeno/imaging.hpp"

namespace fuzzygeno {

struct GroupSpec {
    std::vector<int> members;  // sorted, size >= 2
    Rect region;

    bool operator==(const GroupSpec&) const = default;
};

struct GroupingConfig {
    int pair_threshold = 7;          // tau: minimum symmetrized confusion count
    double region_threshold = 0.5;   // theta: disagreement intensity cutoff
    std::map<std::vector<int>, Rect> region_overrides;
    std::vector<GroupSpec> forced_groups;  // bypasses discovery for these members
};

// Connected components of size >= 2 over the graph whose edges are pairs with
// counts[i][j] + counts[j][i] >= tau. Members sorted; groups ordered by first
// member.
std::vector<std::vector<int>> form_groups(const ConfusionMatrix& cm, int pair_threshold);

// Tight bounding box of pixels where some member pair's overlap images differ
// by at least theta. Throws DataError("no confusion region") when none does.
Rect confusion_region(std::span<const OverlapImage> overlaps, double theta);

// The published confusion rectangles for the Bangla digit groups, usable as
// region_overrides defaults.
std::map<std::vector<int>, Rect> paper_regions();

// Groups file: one line per group, "members=a,b,...; region=top,left,bottom,right".
std::vector<GroupSpec> parse_groups_file(const std::string& text);
std::string format_groups_file(const std::vector<GroupSpec>& groups);

}  // namespace fuzzygeno
