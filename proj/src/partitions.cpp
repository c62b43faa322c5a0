#include "fuzzygeno/partitions.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace fuzzygeno {

namespace {

void validate_part(const std::vector<int>& cuts, int lo, int hi, const CutBounds& bounds,
                   const char* part, std::vector<std::string>& out) {
    if (static_cast<int>(cuts.size()) < bounds.min_cuts)
        out.push_back(std::string(part) + ": too few cuts");
    if (static_cast<int>(cuts.size()) > bounds.max_cuts)
        out.push_back(std::string(part) + ": too many cuts");
    if (cuts.empty()) return;
    if (cuts.front() != lo) out.push_back(std::string(part) + ": first cut must equal region start");
    if (cuts.back() != hi) out.push_back(std::string(part) + ": last cut must equal region end");
    for (std::size_t i = 1; i < cuts.size(); ++i)
        if (cuts[i] <= cuts[i - 1]) {
            out.push_back(std::string(part) + ": not strictly increasing");
            break;
        }
    for (int c : cuts)
        if (c < lo || c > hi) {
            out.push_back(std::string(part) + ": cut outside region");
            break;
        }
}

}  // namespace

std::vector<std::string> validate(const Chromosome& ch, const CutBounds& bounds) {
    std::vector<std::string> violations;
    if (ch.region.top < 0 || ch.region.left < 0 || ch.region.bottom >= kFrameSize ||
        ch.region.right >= kFrameSize || ch.region.top > ch.region.bottom ||
        ch.region.left > ch.region.right)
        violations.push_back("region: outside frame or inverted");
    validate_part(ch.h_cuts, ch.region.top, ch.region.bottom, bounds, "h_cuts", violations);
    validate_part(ch.v_cuts, ch.region.left, ch.region.right, bounds, "v_cuts", violations);
    return violations;
}

bool is_valid(const Chromosome& ch, const CutBounds& bounds) {
    return validate(ch, bounds).empty();
}

namespace {

std::vector<int> random_cuts(int lo, int hi, const CutBounds& bounds, Rng& rng) {
    int span = hi - lo + 1;
    if (span < bounds.min_cuts)
        throw DataError("region too small for min_cuts");
    int max_here = std::min(bounds.max_cuts, span);
    int n = rng.uniform_int(bounds.min_cuts, max_here);

    // Endpoints are forced; draw n-2 interior coordinates without replacement.
    std::vector<int> interior;
    for (int c = lo + 1; c < hi; ++c) interior.push_back(c);
    for (int i = 0; i < n - 2; ++i) {
        int j = rng.uniform_int(i, static_cast<int>(interior.size()) - 1);
        std::swap(interior[i], interior[j]);
    }
    std::vector<int> cuts(interior.begin(), interior.begin() + (n - 2));
    cuts.push_back(lo);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    return cuts;
}

}  // namespace

Chromosome random_chromosome(const Rect& region, const CutBounds& bounds, Rng& rng) {
    check_rect(region);
    Chromosome ch;
    ch.region = region;
    ch.h_cuts = random_cuts(region.top, region.bottom, bounds, rng);
    ch.v_cuts = random_cuts(region.left, region.right, bounds, rng);
    return ch;
}

namespace {

// "Left of boundary j" value at a coordinate. Boundary 0 is the region start
// (always 0) and boundary n-1 the region end (always 1); interior boundaries
// ramp linearly over [b-e, b+e] with e clamped to half the narrower strip.
double left_of_boundary(const std::vector<int>& cuts, int w, std::size_t j, int coord) {
    if (j == 0) return 0.0;
    if (j == cuts.size() - 1) return 1.0;
    int b = cuts[j];
    int e = std::min({w, (cuts[j] - cuts[j - 1]) / 2, (cuts[j + 1] - cuts[j]) / 2});
    if (e == 0) return coord < b ? 1.0 : 0.0;
    if (coord <= b - e) return 1.0;
    if (coord >= b + e) return 0.0;
    return static_cast<double>(b + e - coord) / (2.0 * e);
}

}  // namespace

std::vector<double> strip_memberships(const std::vector<int>& cuts, int w, int coord) {
    if (cuts.size() < 2) throw DataError("strip_memberships: fewer than two cuts");
    if (coord < cuts.front() || coord > cuts.back())
        throw DataError("strip_memberships: coordinate outside the cut span");
    std::size_t strips = cuts.size() - 1;
    std::vector<double> mu(strips);
    double prev = 0.0;
    for (std::size_t k = 0; k < strips; ++k) {
        double next = left_of_boundary(cuts, w, k + 1, coord);
        mu[k] = next - prev;
        prev = next;
    }
    return mu;
}

MembershipTable membership_table(const std::vector<int>& cuts, int w) {
    std::size_t strips = cuts.size() - 1;
    MembershipTable table;
    table.support.resize(strips);
    table.weights.resize(strips);
    for (std::size_t k = 0; k < strips; ++k) {
        int lo = cuts.front(), hi = cuts.back();
        // Tight support scan; ramps keep it near the strip's own extent.
        int first = -1, last = -1;
        for (int c = lo; c <= hi; ++c) {
            double prev = left_of_boundary(cuts, w, k, c);
            double next = left_of_boundary(cuts, w, k + 1, c);
            if (next - prev > 0.0) {
                if (first < 0) first = c;
                last = c;
            }
        }
        table.support[k] = {first, last};
        table.weights[k].resize(last - first + 1);
        for (int c = first; c <= last; ++c)
            table.weights[k][c - first] =
                left_of_boundary(cuts, w, k + 1, c) - left_of_boundary(cuts, w, k, c);
    }
    return table;
}

FeatureVector extract_features(const NormImage& img, const Chromosome& ch, const FuzzyParams& fp) {
    auto violations = validate(ch, CutBounds{2, kFrameSize});
    if (!violations.empty()) throw DataError("extract_features: invalid chromosome: " + violations.front());

    MembershipTable rows = membership_table(ch.h_cuts, fp.ramp_half_width);
    MembershipTable cols = membership_table(ch.v_cuts, fp.ramp_half_width);

    std::size_t nh = rows.weights.size(), nv = cols.weights.size();
    FeatureVector out(nh * nv);
    for (std::size_t k = 0; k < nh; ++k) {
        auto [r0, r1] = rows.support[k];
        for (std::size_t l = 0; l < nv; ++l) {
            auto [c0, c1] = cols.support[l];
            double num = 0.0, den = 0.0;
            for (int r = r0; r <= r1; ++r) {
                double mr = rows.weights[k][r - r0];
                for (int c = c0; c <= c1; ++c) {
                    double m = mr * cols.weights[l][c - c0];
                    num += img.at(r, c) * m;
                    den += m;
                }
            }
            out[k * nv + l] = num / den;
        }
    }
    return out;
}

int feature_dim(const Chromosome& ch) {
    return static_cast<int>((ch.h_cuts.size() - 1) * (ch.v_cuts.size() - 1));
}

namespace {

std::string join_cuts(const std::vector<int>& cuts) {
    std::string s;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(cuts[i]);
    }
    return s;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == ',')) ++i;
        if (i >= s.size()) break;
        int value = 0;
        auto [p, ec] = std::from_chars(s.data() + i, s.data() + s.size(), value);
        if (ec != std::errc{}) throw DataError("malformed chromosome text: " + s);
        i = static_cast<std::size_t>(p - s.data());
        out.push_back(value);
    }
    return out;
}

}  // namespace

std::string chromosome_to_text(const Chromosome& ch) {
    std::string s = join_cuts(ch.h_cuts) + " | " + join_cuts(ch.v_cuts);
    if (!(ch.region == full_frame())) {
        s += " @ " + std::to_string(ch.region.top) + "," + std::to_string(ch.region.left) + "," +
             std::to_string(ch.region.bottom) + "," + std::to_string(ch.region.right);
    }
    return s;
}

Chromosome chromosome_from_text(const std::string& text) {
    std::string body = text;
    Chromosome ch;
    ch.region = full_frame();

    if (auto at = body.find('@'); at != std::string::npos) {
        auto coords = parse_int_list(body.substr(at + 1));
        if (coords.size() != 4) throw DataError("malformed chromosome region: " + text);
        ch.region = Rect{coords[0], coords[1], coords[2], coords[3]};
        body = body.substr(0, at);
    }

    auto bar = body.find('|');
    if (bar == std::string::npos) throw DataError("malformed chromosome text (missing '|'): " + text);
    ch.h_cuts = parse_int_list(body.substr(0, bar));
    ch.v_cuts = parse_int_list(body.substr(bar + 1));
    if (ch.h_cuts.size() < 2 || ch.v_cuts.size() < 2)
        throw DataError("malformed chromosome text (too few cuts): " + text);
    return ch;
}

}  // namespace fuzzygeno
