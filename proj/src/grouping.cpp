#include "fuzzygeno/grouping.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fuzzygeno {

std::vector<std::vector<int>> form_groups(const ConfusionMatrix& cm, int pair_threshold) {
    std::size_t n = cm.labels.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
        return parent[i] == i ? i : parent[i] = find(parent[i]);
    };

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (cm.counts[i][j] + cm.counts[j][i] >= pair_threshold) parent[find(i)] = find(j);

    std::map<std::size_t, std::vector<int>> components;
    for (std::size_t i = 0; i < n; ++i) components[find(i)].push_back(cm.labels[i]);

    std::vector<std::vector<int>> groups;
    for (auto& [root, members] : components)
        if (members.size() >= 2) {
            std::sort(members.begin(), members.end());
            groups.push_back(std::move(members));
        }
    std::sort(groups.begin(), groups.end());
    return groups;
}

Rect confusion_region(std::span<const OverlapImage> overlaps, double theta) {
    if (overlaps.size() < 2) throw DataError("confusion_region: need at least two overlap images");

    int top = kFrameSize, left = kFrameSize, bottom = -1, right = -1;
    for (int r = 0; r < kFrameSize; ++r)
        for (int c = 0; c < kFrameSize; ++c) {
            double d = 0.0;
            for (std::size_t i = 0; i < overlaps.size(); ++i)
                for (std::size_t j = i + 1; j < overlaps.size(); ++j)
                    d = std::max(d, std::abs(overlaps[i].at(r, c) - overlaps[j].at(r, c)));
            if (d >= theta) {
                top = std::min(top, r);
                bottom = std::max(bottom, r);
                left = std::min(left, c);
                right = std::max(right, c);
            }
        }
    if (bottom < 0) throw DataError("no confusion region");
    return Rect{top, left, bottom, right};
}

std::map<std::vector<int>, Rect> paper_regions() {
    // Published (row, column) rectangles for the Bangla digit groups.
    return {
        {{0, 5}, Rect{0, 15, 31, 31}},
        {{1, 9}, Rect{12, 0, 31, 31}},
        {{3, 6}, Rect{0, 18, 24, 31}},
    };
}

namespace {

std::vector<int> parse_csv_ints(std::string_view s, const std::string& context) {
    std::vector<int> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == ',')) ++i;
        if (i >= s.size()) break;
        int value = 0;
        auto [p, ec] = std::from_chars(s.data() + i, s.data() + s.size(), value);
        if (ec != std::errc{}) throw DataError("malformed groups file: " + context);
        i = static_cast<std::size_t>(p - s.data());
        out.push_back(value);
    }
    return out;
}

}  // namespace

std::vector<GroupSpec> parse_groups_file(const std::string& text) {
    std::vector<GroupSpec> groups;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto members_pos = line.find("members=");
        auto region_pos = line.find("region=");
        auto semi = line.find(';');
        if (members_pos == std::string::npos || region_pos == std::string::npos ||
            semi == std::string::npos || semi < members_pos || region_pos < semi)
            throw DataError("malformed groups file line: " + line);

        GroupSpec g;
        g.members = parse_csv_ints(
            std::string_view(line).substr(members_pos + 8, semi - members_pos - 8), line);
        auto coords = parse_csv_ints(std::string_view(line).substr(region_pos + 7), line);
        if (g.members.size() < 2 || coords.size() != 4)
            throw DataError("malformed groups file line: " + line);
        std::sort(g.members.begin(), g.members.end());
        g.region = Rect{coords[0], coords[1], coords[2], coords[3]};
        check_rect(g.region);
        groups.push_back(std::move(g));
    }
    return groups;
}

std::string format_groups_file(const std::vector<GroupSpec>& groups) {
    std::ostringstream out;
    for (const auto& g : groups) {
        out << "members=";
        for (std::size_t i = 0; i < g.members.size(); ++i) {
            if (i) out << ',';
            out << g.members[i];
        }
        out << "; region=" << g.region.top << ',' << g.region.left << ',' << g.region.bottom << ','
            << g.region.right << '\n';
    }
    return out.str();
}

}  // namespace fuzzygeno
