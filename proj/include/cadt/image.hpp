#pragma once

#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <jpeglib.h>
#include <png.h>

#include "types.hpp"

namespace cadt {

// 8-bit single-channel raster, row-major, origin at the top-left.
class GrayImage {
    static size_t checked_extent(int width, int height) {
        if (width <= 0 || height <= 0)
            throw std::invalid_argument("image dimensions must be positive");
        return size_t(width) * size_t(height);
    }

  public:
    GrayImage() = default;
    GrayImage(int width, int height, std::uint8_t fill = 0)
        : width_(width), height_(height), data_(checked_extent(width, height), fill) {}
    GrayImage(int width, int height, std::vector<std::uint8_t> data)
        : width_(width), height_(height), data_(std::move(data)) {
        if (data_.size() != checked_extent(width, height))
            throw std::invalid_argument("pixel buffer does not match dimensions");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::uint8_t operator()(int x, int y) const {
        return data_[size_t(y) * width_ + x];
    }
    std::uint8_t& operator()(int x, int y) {
        return data_[size_t(y) * width_ + x];
    }
    const std::vector<std::uint8_t>& data() const { return data_; }
    std::vector<std::uint8_t>& data() { return data_; }

    bool operator==(const GrayImage&) const = default;

  private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

// Rec. 601 luma of an sRGB triple, rounded half away from zero.
inline std::uint8_t luminance_rec601(std::uint8_t r, std::uint8_t g,
                                     std::uint8_t b) {
    double y = 0.299 * r + 0.587 * g + 0.114 * b;
    return std::uint8_t(std::floor(y + 0.5));
}

namespace detail {

// Reads one whitespace-delimited PNM header token, skipping '#' comments.
inline std::string pnm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(char(c));
    }
    return tok;
}

inline int pnm_int(std::istream& in, const char* what) {
    std::string tok = pnm_token(in);
    if (tok.empty())
        throw FormatError(std::string("pgm: missing ") + what);
    size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(tok, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != tok.size())
        throw FormatError(std::string("pgm: bad ") + what + " '" + tok + "'");
    return v;
}

inline GrayImage read_pgm(std::istream& in) {
    std::string magic = pnm_token(in);
    if (magic != "P2" && magic != "P5")
        throw FormatError("pgm: expected P2 or P5, got '" + magic + "'");
    int w = pnm_int(in, "width");
    int h = pnm_int(in, "height");
    int maxval = pnm_int(in, "maxval");
    if (w <= 0 || h <= 0)
        throw FormatError("pgm: nonpositive dimensions");
    if (maxval < 1 || maxval > 255)
        throw FormatError("pgm: only 8-bit maxval supported");
    GrayImage img(w, h);
    if (magic == "P5") {
        // header ends with exactly one whitespace byte before the raster
        in.read(reinterpret_cast<char*>(img.data().data()),
                std::streamsize(img.data().size()));
        if (in.gcount() != std::streamsize(img.data().size()))
            throw FormatError("pgm: truncated raster");
    } else {
        for (auto& px : img.data()) {
            int v = pnm_int(in, "sample");
            if (v < 0 || v > maxval)
                throw FormatError("pgm: sample out of range");
            px = std::uint8_t(v);
        }
    }
    return img;
}

inline void write_pgm(std::ostream& out, const GrayImage& img) {
    out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data().data()),
              std::streamsize(img.data().size()));
}

inline GrayImage read_png(const std::filesystem::path& path) {
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&png, path.string().c_str()))
        throw FormatError(std::string("png: ") + png.message);
    png.format = PNG_FORMAT_RGB;
    std::vector<std::uint8_t> rgb(PNG_IMAGE_SIZE(png));
    if (!png_image_finish_read(&png, nullptr, rgb.data(), 0, nullptr)) {
        std::string msg = png.message;
        png_image_free(&png);
        throw FormatError("png: " + msg);
    }
    GrayImage img(int(png.width), int(png.height));
    const std::uint8_t* p = rgb.data();
    for (auto& px : img.data()) {
        px = luminance_rec601(p[0], p[1], p[2]);
        p += 3;
    }
    return img;
}

inline void write_png(const std::filesystem::path& path, const GrayImage& img) {
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    png.width = png_uint_32(img.width());
    png.height = png_uint_32(img.height());
    png.format = PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&png, path.string().c_str(), 0,
                                 img.data().data(), 0, nullptr))
        throw IoError(std::string("png: cannot write ") + path.string() + ": " +
                      png.message);
}

struct JpegErrorTrap {
    jpeg_error_mgr mgr;
    std::jmp_buf env;
    char message[JMSG_LENGTH_MAX];
};

inline void jpeg_error_trap_exit(j_common_ptr cinfo) {
    auto* trap = reinterpret_cast<JpegErrorTrap*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, trap->message);
    std::longjmp(trap->env, 1);
}

}  // namespace detail

// Lossy round trip through an in-memory JPEG at the given quality (1..100).
// Dimensions are preserved; pixel values pick up compression artifacts.
inline GrayImage jpeg_reencode(const GrayImage& img, int quality) {
    if (quality < 1 || quality > 100)
        throw std::invalid_argument("jpeg quality must be in [1, 100]");

    detail::JpegErrorTrap trap;
    unsigned char* buf = nullptr;
    unsigned long buf_size = 0;

    jpeg_compress_struct comp;
    comp.err = jpeg_std_error(&trap.mgr);
    trap.mgr.error_exit = detail::jpeg_error_trap_exit;
    if (setjmp(trap.env)) {
        jpeg_destroy_compress(&comp);
        std::free(buf);
        throw Error(std::string("jpeg encode: ") + trap.message);
    }
    jpeg_create_compress(&comp);
    jpeg_mem_dest(&comp, &buf, &buf_size);
    comp.image_width = JDIMENSION(img.width());
    comp.image_height = JDIMENSION(img.height());
    comp.input_components = 1;
    comp.in_color_space = JCS_GRAYSCALE;
    jpeg_set_defaults(&comp);
    jpeg_set_quality(&comp, quality, TRUE);
    jpeg_start_compress(&comp, TRUE);
    while (comp.next_scanline < comp.image_height) {
        const JSAMPLE* row = img.data().data() +
                             size_t(comp.next_scanline) * size_t(img.width());
        JSAMPROW rows[1] = {const_cast<JSAMPROW>(row)};
        jpeg_write_scanlines(&comp, rows, 1);
    }
    jpeg_finish_compress(&comp);
    jpeg_destroy_compress(&comp);

    jpeg_decompress_struct dec;
    dec.err = jpeg_std_error(&trap.mgr);
    if (setjmp(trap.env)) {
        jpeg_destroy_decompress(&dec);
        std::free(buf);
        throw Error(std::string("jpeg decode: ") + trap.message);
    }
    jpeg_create_decompress(&dec);
    jpeg_mem_src(&dec, buf, buf_size);
    jpeg_read_header(&dec, TRUE);
    dec.out_color_space = JCS_GRAYSCALE;
    jpeg_start_decompress(&dec);
    GrayImage out(int(dec.output_width), int(dec.output_height));
    while (dec.output_scanline < dec.output_height) {
        JSAMPLE* row = out.data().data() +
                       size_t(dec.output_scanline) * size_t(out.width());
        JSAMPROW rows[1] = {row};
        jpeg_read_scanlines(&dec, rows, 1);
    }
    jpeg_finish_decompress(&dec);
    jpeg_destroy_decompress(&dec);
    std::free(buf);
    return out;
}

// Loads a PGM (P2/P5) or PNG image as 8-bit grayscale; color PNG input is
// reduced with Rec. 601 luma. The format is sniffed from the file content.
inline GrayImage load_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (in.gcount() < 2)
        throw FormatError(path.string() + ": too short to identify");
    in.seekg(0);
    if (magic[0] == 'P' && (magic[1] == '2' || magic[1] == '5')) {
        try {
            return detail::read_pgm(in);
        } catch (const FormatError& e) {
            throw FormatError(path.string() + ": " + e.what());
        }
    }
    if (magic[0] == char(0x89) && magic[1] == 'P')
        return detail::read_png(path);
    throw FormatError(path.string() + ": not a PGM or PNG file");
}

// Writes 8-bit grayscale; the format follows the extension (.pgm as binary
// P5, .png as grayscale PNG).
inline void save_image(const GrayImage& img, const std::filesystem::path& path) {
    auto ext = path.extension().string();
    for (auto& c : ext) c = char(std::tolower(static_cast<unsigned char>(c)));
    if (ext == ".pgm") {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw IoError("cannot open " + path.string() + " for writing");
        detail::write_pgm(out, img);
        out.flush();
        if (!out)
            throw IoError("write failed: " + path.string());
        return;
    }
    if (ext == ".png") {
        detail::write_png(path, img);
        return;
    }
    throw FormatError("unsupported output format '" + ext + "' for " +
                      path.string());
}

}  // namespace cadt
