#include "fuzzygeno/imaging.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace fuzzygeno {

void check_rect(const Rect& r) {
    if (r.top < 0 || r.left < 0 || r.bottom >= kFrameSize || r.right >= kFrameSize ||
        r.top > r.bottom || r.left > r.right) {
        throw DataError("invalid rect: " + std::to_string(r.top) + "," + std::to_string(r.left) +
                        "," + std::to_string(r.bottom) + "," + std::to_string(r.right));
    }
}

namespace {

// Next whitespace/comment-delimited token of a PNM header.
std::string pnm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
        } else if (!std::isspace(c)) {
            tok.push_back(static_cast<char>(c));
            break;
        }
    }
    while ((c = in.get()) != EOF) {
        if (std::isspace(c) || c == '#') {
            in.unget();
            break;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

int pnm_int(std::istream& in, const std::string& path, const char* what) {
    std::string tok = pnm_token(in);
    int value = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || p != tok.data() + tok.size() || value < 0) {
        throw DataError("malformed PGM header (" + std::string(what) + "): " + path);
    }
    return value;
}

std::uint32_t read_be32(std::istream& in, const std::string& path) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) throw DataError("truncated IDX file: " + path);
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) | (std::uint32_t(b[2]) << 8) |
           std::uint32_t(b[3]);
}

}  // namespace

RawImage read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open image: " + path);

    std::string magic = pnm_token(in);
    if (magic != "P2" && magic != "P5") throw DataError("not a PGM (P2/P5) file: " + path);

    RawImage img;
    img.width = pnm_int(in, path, "width");
    img.height = pnm_int(in, path, "height");
    int maxval = pnm_int(in, path, "maxval");
    if (img.width < 1 || img.height < 1) throw DataError("malformed PGM header (size): " + path);
    if (maxval < 1 || maxval > 255) throw DataError("unsupported PGM maxval: " + path);

    std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    img.pixels.resize(n);
    if (magic == "P5") {
        in.get();  // single whitespace byte after maxval
        if (!in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(n)))
            throw DataError("truncated PGM data: " + path);
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            int v = pnm_int(in, path, "pixel");
            if (v > maxval) throw DataError("PGM pixel above maxval: " + path);
            img.pixels[i] = static_cast<std::uint8_t>(v);
        }
    }
    if (maxval != 255) {
        for (auto& p : img.pixels)
            p = static_cast<std::uint8_t>(std::lround(p * 255.0 / maxval));
    }
    return img;
}

void write_pgm(const std::string& path, std::span<const double> pixels, int width, int height) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write image: " + path);
    out << "P5\n" << width << " " << height << "\n255\n";
    for (double v : pixels) {
        double c = std::clamp(v, 0.0, 1.0);
        out.put(static_cast<char>(std::lround(c * 255.0)));
    }
    if (!out) throw DataError("write failed: " + path);
}

NormImage normalize(const RawImage& img, bool invert) {
    if (img.width < 1 || img.height < 1 ||
        img.pixels.size() != static_cast<std::size_t>(img.width) * img.height)
        throw DataError("malformed raw image");

    auto value = [&](int r, int c) -> int {
        int v = img.at(r, c);
        return invert ? 255 - v : v;
    };

    // Foreground bounding box; ink is bright after optional inversion.
    int top = img.height, bottom = -1, left = img.width, right = -1;
    for (int r = 0; r < img.height; ++r)
        for (int c = 0; c < img.width; ++c)
            if (value(r, c) >= 128) {
                top = std::min(top, r);
                bottom = std::max(bottom, r);
                left = std::min(left, c);
                right = std::max(right, c);
            }
    if (bottom < 0) throw DataError("blank sample");

    int h = bottom - top + 1;
    int w = right - left + 1;

    NormImage out;
    for (int r = 0; r < kFrameSize; ++r) {
        double sr = (h == 1) ? 0.0 : static_cast<double>(r) * (h - 1) / (kFrameSize - 1);
        int r0 = static_cast<int>(sr);
        int r1 = std::min(r0 + 1, h - 1);
        double fr = sr - r0;
        for (int c = 0; c < kFrameSize; ++c) {
            double sc = (w == 1) ? 0.0 : static_cast<double>(c) * (w - 1) / (kFrameSize - 1);
            int c0 = static_cast<int>(sc);
            int c1 = std::min(c0 + 1, w - 1);
            double fc = sc - c0;
            double v00 = value(top + r0, left + c0);
            double v01 = value(top + r0, left + c1);
            double v10 = value(top + r1, left + c0);
            double v11 = value(top + r1, left + c1);
            double v = (1 - fr) * ((1 - fc) * v00 + fc * v01) + fr * ((1 - fc) * v10 + fc * v11);
            out.at(r, c) = std::clamp(v / 255.0, 0.0, 1.0);
        }
    }
    return out;
}

OverlapImage overlap_image(std::span<const NormImage> samples, int class_id) {
    if (samples.empty()) throw DataError("overlap_image: empty sample sequence");

    OverlapImage out;
    out.class_id = class_id;
    out.sample_count = static_cast<int>(samples.size());
    for (const NormImage& s : samples)
        for (std::size_t i = 0; i < out.pixels.size(); ++i) out.pixels[i] += s.pixels[i];
    for (double& p : out.pixels) p /= samples.size();

    auto [mn, mx] = std::minmax_element(out.pixels.begin(), out.pixels.end());
    if (*mx > *mn) {
        double lo = *mn, span = *mx - lo;
        for (double& p : out.pixels) p = (p - lo) / span;
    }
    return out;
}

std::vector<double> crop(const NormImage& img, const Rect& region) {
    check_rect(region);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(region.rows()) * region.cols());
    for (int r = region.top; r <= region.bottom; ++r)
        for (int c = region.left; c <= region.right; ++c) out.push_back(img.at(r, c));
    return out;
}

namespace {

LabeledSet load_idx_pair(const std::string& images_path, const std::string& labels_path,
                         bool invert) {
    std::ifstream imgs(images_path, std::ios::binary);
    if (!imgs) throw DataError("cannot open IDX image file: " + images_path);
    std::ifstream lbls(labels_path, std::ios::binary);
    if (!lbls) throw DataError("cannot open IDX label file: " + labels_path);

    if (read_be32(imgs, images_path) != 0x00000803u)
        throw DataError("IDX magic mismatch (expected 0x00000803): " + images_path);
    std::uint32_t n_images = read_be32(imgs, images_path);
    std::uint32_t rows = read_be32(imgs, images_path);
    std::uint32_t cols = read_be32(imgs, images_path);

    if (read_be32(lbls, labels_path) != 0x00000801u)
        throw DataError("IDX magic mismatch (expected 0x00000801): " + labels_path);
    std::uint32_t n_labels = read_be32(lbls, labels_path);
    if (n_images != n_labels)
        throw DataError("IDX image/label count mismatch: " + std::to_string(n_images) + " vs " +
                        std::to_string(n_labels));
    if (rows == 0 || cols == 0) throw DataError("IDX zero image dimensions: " + images_path);

    LabeledSet set;
    std::vector<std::uint8_t> buf(static_cast<std::size_t>(rows) * cols);
    for (std::uint32_t i = 0; i < n_images; ++i) {
        if (!imgs.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size())))
            throw DataError("truncated IDX image data: " + images_path);
        int label = lbls.get();
        if (label == EOF) throw DataError("truncated IDX label data: " + labels_path);

        RawImage raw{static_cast<int>(cols), static_cast<int>(rows), buf};
        LabeledItem item;
        item.image = normalize(raw, invert);
        item.label = label;
        item.source = images_path + "#" + std::to_string(i);
        set.items.push_back(std::move(item));
    }
    for (const auto& it : set.items) set.classes.push_back(it.label);
    std::sort(set.classes.begin(), set.classes.end());
    set.classes.erase(std::unique(set.classes.begin(), set.classes.end()), set.classes.end());
    if (set.classes.empty()) throw DataError("empty dataset: " + images_path);
    return set;
}

}  // namespace

LabeledSet load_dataset(const std::string& path, const LoaderOptions& options) {
    if (options.idx) return load_idx_pair(path, options.idx_labels_path, options.invert);

    std::error_code ec;
    if (!fs::is_directory(path, ec)) throw DataError("dataset directory not found: " + path);

    std::vector<std::pair<int, fs::path>> class_dirs;
    for (const auto& entry : fs::directory_iterator(path)) {
        if (!entry.is_directory()) continue;
        std::string name = entry.path().filename().string();
        int label = 0;
        auto [p, perr] = std::from_chars(name.data(), name.data() + name.size(), label);
        if (perr != std::errc{} || p != name.data() + name.size())
            throw DataError("class directory name is not a decimal label: " + name);
        class_dirs.emplace_back(label, entry.path());
    }
    std::sort(class_dirs.begin(), class_dirs.end());
    if (class_dirs.empty()) throw DataError("no class directories in: " + path);

    LabeledSet set;
    for (const auto& [label, dir] : class_dirs) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".pgm")
                files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) throw DataError("empty class: " + dir.string());
        for (const auto& f : files) {
            LabeledItem item;
            try {
                item.image = normalize(read_pgm(f.string()), options.invert);
            } catch (const DataError& e) {
                throw DataError(std::string(e.what()) + " (" + f.string() + ")");
            }
            item.label = label;
            item.source = f.string();
            set.items.push_back(std::move(item));
        }
        set.classes.push_back(label);
    }
    return set;
}

}  // namespace fuzzygeno
