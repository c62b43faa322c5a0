#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fuzzygeno/common.hpp"
#include "fuzzygeno/imaging.hpp"

namespace fuzzygeno {

struct CutBounds {
    int min_cuts = 3;
    int max_cuts = 12;
};

// Two-part variable-length chromosome: row cuts and column cuts over a region.
// Endpoints are pinned to the region border; interior cuts are free.
struct Chromosome {
    Rect region;
    std::vector<int> h_cuts;  // strictly increasing row coordinates
    std::vector<int> v_cuts;  // strictly increasing column coordinates

    bool operator==(const Chromosome&) const = default;
};

struct FuzzyParams {
    int ramp_half_width = 2;  // w >= 0; w = 0 means crisp boundaries
};

using FeatureVector = std::vector<double>;

// Returns every violated invariant; empty means the chromosome is valid.
std::vector<std::string> validate(const Chromosome& ch, const CutBounds& bounds);
bool is_valid(const Chromosome& ch, const CutBounds& bounds);

Chromosome random_chromosome(const Rect& region, const CutBounds& bounds, Rng& rng);

// Membership of every strip at one coordinate; sums to 1 over strips.
std::vector<double> strip_memberships(const std::vector<int>& cuts, int w, int coord);

// Precomputed per-axis memberships. weights[k] covers support [lo, hi] of
// strip k, indexed relative to lo.
struct MembershipTable {
    std::vector<std::pair<int, int>> support;      // inclusive coord range per strip
    std::vector<std::vector<double>> weights;
};

MembershipTable membership_table(const std::vector<int>& cuts, int w);

// Fuzzy-weighted mean intensity per (row-strip x column-strip) cell, row-major.
FeatureVector extract_features(const NormImage& img, const Chromosome& ch, const FuzzyParams& fp);

int feature_dim(const Chromosome& ch);

// Textual form "h0,h1,... | v0,v1,..." with an "@ top,left,bottom,right"
// suffix when the region is not the full frame.
std::string chromosome_to_text(const Chromosome& ch);
Chromosome chromosome_from_text(const std::string& text);

}  // namespace fuzzygeno
