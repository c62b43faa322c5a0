#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fuzzygeno/common.hpp"

namespace fuzzygeno {

struct RawImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // row-major, 0..255

    std::uint8_t at(int r, int c) const { return pixels[static_cast<std::size_t>(r) * width + c]; }
};

// 32x32 grayscale frame, intensities in [0,1], ink = 1.
struct NormImage {
    std::array<double, kFrameSize * kFrameSize> pixels{};

    double at(int r, int c) const { return pixels[static_cast<std::size_t>(r) * kFrameSize + c]; }
    double& at(int r, int c) { return pixels[static_cast<std::size_t>(r) * kFrameSize + c]; }
};

struct OverlapImage {
    int class_id = 0;
    std::array<double, kFrameSize * kFrameSize> pixels{};
    int sample_count = 0;

    double at(int r, int c) const { return pixels[static_cast<std::size_t>(r) * kFrameSize + c]; }
};

// Inclusive rectangle inside the 32x32 frame.
struct Rect {
    int top = 0;
    int left = 0;
    int bottom = kFrameSize - 1;
    int right = kFrameSize - 1;

    int rows() const { return bottom - top + 1; }
    int cols() const { return right - left + 1; }
    bool operator==(const Rect&) const = default;
};

inline Rect full_frame() { return Rect{0, 0, kFrameSize - 1, kFrameSize - 1}; }

// Throws DataError if the rect violates its invariants.
void check_rect(const Rect& r);

struct LabeledItem {
    NormImage image;
    int label = 0;
    std::string source;  // file path or IDX record index, for diagnostics
};

struct LabeledSet {
    std::vector<LabeledItem> items;
    std::vector<int> classes;  // sorted distinct labels
};

struct LoaderOptions {
    bool invert = false;
    bool idx = false;                // IDX pair mode instead of directory-of-PGMs
    std::string idx_labels_path;     // label file path when idx is set
};

RawImage read_pgm(const std::string& path);
void write_pgm(const std::string& path, std::span<const double> pixels, int width, int height);

// Crop to the foreground bounding box, bilinear-resample to 32x32, clamp to [0,1].
NormImage normalize(const RawImage& img, bool invert);

OverlapImage overlap_image(std::span<const NormImage> samples, int class_id);

// Row-major window of the region; no resampling.
std::vector<double> crop(const NormImage& img, const Rect& region);

LabeledSet load_dataset(const std::string& path, const LoaderOptions& options);

}  // namespace fuzzygeno
