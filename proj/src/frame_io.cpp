#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <vector>

#include <png.h>

#include "tsr/volume.hpp"

namespace fs = std::filesystem;

namespace tsr {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngImage {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<unsigned char> bytes; // row-major, interleaved
};

PngImage read_png(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) throw input_error("cannot open frame: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw input_error("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw input_error("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw input_error("unreadable frame: " + path);
    }

    png_init_io(png, f.get());
    png_read_info(png, info);

    // Normalize everything to 8-bit gray or RGB.
    png_set_expand(png);
    if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    PngImage img;
    img.width = static_cast<int>(png_get_image_width(png, info));
    img.height = static_cast<int>(png_get_image_height(png, info));
    img.channels = static_cast<int>(png_get_channels(png, info));
    if (img.channels != 1 && img.channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw input_error("unsupported channel count in frame: " + path);
    }

    const std::size_t row_bytes = png_get_rowbytes(png, info);
    img.bytes.resize(row_bytes * img.height);
    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y) rows[y] = img.bytes.data() + row_bytes * y;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void write_png(const std::string& path, int width, int height, int channels,
               const unsigned char* bytes) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw input_error("cannot open frame for writing: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw input_error("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw input_error("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw input_error("frame write failed: " + path);
    }

    png_init_io(png, f.get());
    png_set_IHDR(png, info, width, height, 8,
                 channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    const std::size_t row_bytes = static_cast<std::size_t>(width) * channels;
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y)
        rows[y] = const_cast<png_bytep>(bytes + row_bytes * y);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

bool has_png_extension(const fs::path& p) {
    auto ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png";
}

} // namespace

VideoVolume load_frame_dir(const std::string& dir) {
    if (!fs::is_directory(dir)) throw input_error("frame directory missing: " + dir);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && has_png_extension(e.path())) files.push_back(e.path());
    if (files.empty()) throw input_error("no frames found in: " + dir);
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });

    VideoVolume v;
    for (std::size_t t = 0; t < files.size(); ++t) {
        PngImage img = read_png(files[t].string());
        if (t == 0) {
            v = make_volume(static_cast<int>(files.size()), img.height, img.width,
                            img.channels);
        } else if (img.height != v.height || img.width != v.width ||
                   img.channels != v.channels) {
            throw input_error("frame dimensions differ: " + files[t].filename().string());
        }
        float* dst = &v.data[v.index(static_cast<int>(t), 0, 0, 0)];
        const std::size_t n = static_cast<std::size_t>(v.height) * v.width * v.channels;
        for (std::size_t i = 0; i < n; ++i)
            dst[i] = static_cast<float>(img.bytes[i]) / 255.0f;
    }
    return v;
}

void save_frame_dir(const VideoVolume& v, const std::string& dir) {
    validate_shape(v);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!fs::is_directory(dir)) throw input_error("cannot create frame directory: " + dir);

    const std::size_t n = static_cast<std::size_t>(v.height) * v.width * v.channels;
    std::vector<unsigned char> bytes(n);
    for (int t = 0; t < v.frames; ++t) {
        const float* src = &v.data[v.index(t, 0, 0, 0)];
        for (std::size_t i = 0; i < n; ++i) {
            const float clamped = std::min(1.0f, std::max(0.0f, src[i]));
            bytes[i] = static_cast<unsigned char>(std::lround(clamped * 255.0f));
        }
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%05d.png", t);
        write_png((fs::path(dir) / name).string(), v.width, v.height, v.channels,
                  bytes.data());
    }
}

} // namespace tsr
