#include "stemnoise/imageio.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <png.h>

#include "stemnoise/errors.hpp"

namespace stemnoise {

namespace fs = std::filesystem;

namespace {

std::vector<unsigned char> read_file_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed on " + path.string());
    return bytes;
}

void write_file_bytes_atomic(const fs::path& path, const void* data, std::size_t size) {
    fs::path dir = path.parent_path();
    if (dir.empty()) dir = ".";
    std::random_device rd;
    fs::path tmp = dir / (path.filename().string() + ".tmp" + std::to_string(rd()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot create " + tmp.string());
        out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
        if (!out) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("write failed on " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot replace " + path.string());
    }
}

void require_min_size(const LuminanceImage& img, const fs::path& path) {
    if (img.width < 2 || img.height < 2)
        throw DimensionError("image smaller than 2x2: " + path.string());
}

// keeps size arithmetic on hostile headers far away from overflow
constexpr int kMaxImageSide = 1 << 24;

void check_decoded_dims(int width, int height, const fs::path& path) {
    if (width < 1 || height < 1 || width > kMaxImageSide || height > kMaxImageSide)
        throw IoError("unreasonable image dimensions in " + path.string());
}

// ---- PGM (P2 ascii / P5 binary, maxval <= 255) ----

struct PnmHeaderReader {
    const std::vector<unsigned char>& bytes;
    std::size_t pos = 0;

    // whitespace and '#'-comments separate header tokens
    int next_int(const fs::path& path) {
        for (;;) {
            while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
            if (pos < bytes.size() && bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
                continue;
            }
            break;
        }
        if (pos >= bytes.size() || !std::isdigit(bytes[pos]))
            throw IoError("malformed PGM header in " + path.string());
        int value = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            value = value * 10 + (bytes[pos] - '0');
            if (value > 1 << 28) throw IoError("PGM header value out of range in " + path.string());
            ++pos;
        }
        return value;
    }
};

LuminanceImage decode_pgm(const std::vector<unsigned char>& bytes, const fs::path& path) {
    const bool binary = bytes[1] == '5';
    PnmHeaderReader hdr{bytes, 2};
    const int width = hdr.next_int(path);
    const int height = hdr.next_int(path);
    const int maxval = hdr.next_int(path);
    check_decoded_dims(width, height, path);
    if (maxval < 1 || maxval > 255) throw IoError("unsupported PGM maxval in " + path.string());

    LuminanceImage img;
    img.width = width;
    img.height = height;
    const std::size_t count = static_cast<std::size_t>(width) * height;
    img.data.resize(count);
    if (binary) {
        std::size_t start = hdr.pos + 1; // single whitespace byte after maxval
        if (start + count > bytes.size())
            throw IoError("truncated PGM pixel data in " + path.string());
        for (std::size_t i = 0; i < count; ++i)
            img.data[i] = static_cast<double>(bytes[start + i]);
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            const int v = hdr.next_int(path);
            if (v > maxval) throw IoError("PGM sample above maxval in " + path.string());
            img.data[i] = static_cast<double>(v);
        }
    }
    return img;
}

// ---- BMP (uncompressed 8-bit palette, 24-bit BGR, 32-bit BGRA) ----

std::uint32_t le32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t le16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

LuminanceImage decode_bmp(const std::vector<unsigned char>& bytes, const fs::path& path) {
    if (bytes.size() < 54) throw IoError("truncated BMP header in " + path.string());
    const std::uint32_t pixel_offset = le32(&bytes[10]);
    const std::uint32_t header_size = le32(&bytes[14]);
    if (header_size < 40) throw IoError("unsupported BMP header in " + path.string());
    const std::int32_t width = static_cast<std::int32_t>(le32(&bytes[18]));
    const std::int32_t height_raw = static_cast<std::int32_t>(le32(&bytes[22]));
    const std::uint16_t bpp = le16(&bytes[28]);
    const std::uint32_t compression = le32(&bytes[30]);
    if (compression != 0) throw IoError("compressed BMP not supported: " + path.string());
    if (bpp != 8 && bpp != 24 && bpp != 32)
        throw IoError("unsupported BMP bit depth in " + path.string());
    const bool bottom_up = height_raw > 0;
    const std::int32_t height = bottom_up ? height_raw : -height_raw;
    check_decoded_dims(width, height, path);

    // 8-bit files carry a BGRX palette right after the info header
    std::vector<double> palette;
    if (bpp == 8) {
        std::uint32_t colors = le32(&bytes[46]);
        if (colors == 0) colors = 256;
        if (colors > 256) throw IoError("oversized BMP palette in " + path.string());
        const std::size_t pal_start = 14 + static_cast<std::size_t>(header_size);
        if (pal_start + 4 * static_cast<std::size_t>(colors) > bytes.size())
            throw IoError("truncated BMP palette in " + path.string());
        palette.resize(256, 0.0);
        for (std::size_t i = 0; i < colors; ++i) {
            const unsigned char* e = &bytes[pal_start + 4 * i];
            palette[i] = rgb_to_luminance(e[2], e[1], e[0]);
        }
    }

    const std::size_t bytes_per_px = bpp / 8;
    const std::size_t row_stride = (static_cast<std::size_t>(width) * bytes_per_px + 3) & ~std::size_t{3};
    if (pixel_offset + row_stride * height > bytes.size())
        throw IoError("truncated BMP pixel data in " + path.string());

    LuminanceImage img;
    img.width = width;
    img.height = height;
    img.data.resize(static_cast<std::size_t>(width) * height);
    for (std::int32_t row = 0; row < height; ++row) {
        const std::size_t src_row = bottom_up ? static_cast<std::size_t>(height - 1 - row) : row;
        const unsigned char* src = &bytes[pixel_offset + src_row * row_stride];
        double* dst = &img.data[static_cast<std::size_t>(row) * width];
        for (std::int32_t col = 0; col < width; ++col) {
            const unsigned char* px = src + col * bytes_per_px;
            if (bpp == 8)
                dst[col] = palette[px[0]];
            else // BGR(A)
                dst[col] = rgb_to_luminance(px[2], px[1], px[0]);
        }
    }
    return img;
}

// ---- PNG via libpng's simplified API ----

LuminanceImage decode_png(const fs::path& path) {
    png_image png;
    std::memset(&png, 0, sizeof(png));
    png.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&png, path.string().c_str()))
        throw IoError("PNG decode failed: " + path.string() + ": " + png.message);

    const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
    const bool alpha = (png.format & PNG_FORMAT_FLAG_ALPHA) != 0;
    // gray sources pass through untouched; alpha, if present, is dropped
    png.format = color ? (alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB)
                       : (alpha ? PNG_FORMAT_GA : PNG_FORMAT_GRAY);
    const int channels = (color ? 3 : 1) + (alpha ? 1 : 0);

    std::vector<unsigned char> buffer(PNG_IMAGE_SIZE(png));
    if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) {
        png_image_free(&png);
        throw IoError("PNG decode failed: " + path.string() + ": " + png.message);
    }

    LuminanceImage img;
    img.width = static_cast<int>(png.width);
    img.height = static_cast<int>(png.height);
    img.data.resize(static_cast<std::size_t>(img.width) * img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        const unsigned char* px = &buffer[i * channels];
        img.data[i] = color ? rgb_to_luminance(px[0], px[1], px[2]) : static_cast<double>(px[0]);
    }
    return img;
}

void encode_png(const GrayImage& image, const fs::path& path) {
    png_image png;
    std::memset(&png, 0, sizeof(png));
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(image.width);
    png.height = static_cast<png_uint_32>(image.height);
    png.format = PNG_FORMAT_GRAY;

    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&png, nullptr, &size, 0, image.data.data(), 0, nullptr))
        throw IoError("PNG encode failed: " + path.string() + ": " + png.message);
    std::vector<unsigned char> buffer(size);
    if (!png_image_write_to_memory(&png, buffer.data(), &size, 0, image.data.data(), 0, nullptr))
        throw IoError("PNG encode failed: " + path.string() + ": " + png.message);
    write_file_bytes_atomic(path, buffer.data(), size);
}

void encode_pgm(const GrayImage& image, const fs::path& path) {
    std::string header = "P5\n" + std::to_string(image.width) + " " +
                         std::to_string(image.height) + "\n255\n";
    std::vector<unsigned char> bytes(header.begin(), header.end());
    bytes.insert(bytes.end(), image.data.begin(), image.data.end());
    write_file_bytes_atomic(path, bytes.data(), bytes.size());
}

std::string lower_extension(const fs::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

} // namespace

LuminanceImage load_image(const fs::path& path) {
    const std::vector<unsigned char> bytes = read_file_bytes(path);
    if (bytes.size() < 8) throw IoError("not a recognized image file: " + path.string());

    LuminanceImage img;
    static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    if (std::memcmp(bytes.data(), png_sig, 8) == 0)
        img = decode_png(path);
    else if (bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5'))
        img = decode_pgm(bytes, path);
    else if (bytes[0] == 'B' && bytes[1] == 'M')
        img = decode_bmp(bytes, path);
    else
        throw IoError("not a recognized image file: " + path.string());

    require_min_size(img, path);
    return img;
}

void write_gray(const GrayImage& image, const fs::path& path) {
    if (image.width < 1 || image.height < 1 ||
        image.data.size() != static_cast<std::size_t>(image.width) * image.height)
        throw DimensionError("malformed gray image for " + path.string());
    const std::string ext = lower_extension(path);
    if (ext == ".png")
        encode_png(image, path);
    else if (ext == ".pgm")
        encode_pgm(image, path);
    else
        throw IoError("unsupported output extension (use .png or .pgm): " + path.string());
}

void write_text_file_atomic(const fs::path& path, std::string_view contents) {
    write_file_bytes_atomic(path, contents.data(), contents.size());
}

} // namespace stemnoise
