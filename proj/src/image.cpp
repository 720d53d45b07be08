#include "stamp/image.hpp"

#include <cstdio>
#include <memory>

#include <png.h>

#include "stamp/error.hpp"

namespace stamp {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

RgbImage read_png(const std::filesystem::path& path) {
    FilePtr file(std::fopen(path.c_str(), "rb"));
    if (!file) throw IoError("cannot open '" + path.string() + "' for reading");

    png_image img{};
    img.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_stdio(&img, file.get())) {
        throw ValidationError(path.string() + ": " + img.message);
    }
    img.format = PNG_FORMAT_RGB;
    RgbImage out(static_cast<int>(img.width), static_cast<int>(img.height));
    if (!png_image_finish_read(&img, nullptr, out.pixels.data(), 0, nullptr)) {
        png_image_free(&img);
        throw ValidationError(path.string() + ": " + img.message);
    }
    return out;
}

void write_png(const std::filesystem::path& path, const RgbImage& image) {
    if (image.pixels.size() != static_cast<std::size_t>(image.width) * image.height * 3) {
        throw ValidationError("RGB buffer size does not match image dimensions");
    }
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    png_image img{};
    img.version = PNG_IMAGE_VERSION;
    img.width = static_cast<png_uint_32>(image.width);
    img.height = static_cast<png_uint_32>(image.height);
    img.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&img, path.c_str(), 0, image.pixels.data(), 0, nullptr)) {
        throw IoError("cannot write '" + path.string() + "': " + img.message);
    }
}

}  // namespace stamp
