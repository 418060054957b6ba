#include "pyra/imageio.hpp"

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <jpeglib.h>
#include <png.h>

namespace pyra {

namespace {

struct PngReadState {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t offset;
};

void png_read_cb(png_structp png, png_bytep out, png_size_t len) {
    auto* st = static_cast<PngReadState*>(png_get_io_ptr(png));
    if (st->offset + len > st->size) {
        png_error(png, "truncated PNG stream");
    }
    std::memcpy(out, st->data + st->offset, len);
    st->offset += len;
}

void png_write_cb(png_structp png, png_bytep data, png_size_t len) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + len);
}

void png_flush_cb(png_structp) {}

void png_error_cb(png_structp png, png_const_charp msg) {
    auto* err = static_cast<std::string*>(png_get_error_ptr(png));
    *err = msg ? msg : "unknown libpng error";
    longjmp(png_jmpbuf(png), 1);
}

void png_warn_cb(png_structp, png_const_charp) {}

RgbImage decode_png(const std::vector<std::uint8_t>& bytes) {
    std::string err;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, png_error_cb, png_warn_cb);
    if (!png) throw DecodeError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw DecodeError("libpng init failed");
    }

    std::vector<png_byte> raster;
    std::vector<png_bytep> rows;
    PngReadState st{bytes.data(), bytes.size(), 0};

    if (setjmp(png_jmpbuf(png))) {
        std::size_t at = st.offset;
        png_destroy_read_struct(&png, &info, nullptr);
        throw DecodeError("PNG decode failed at offset " + std::to_string(at) + ": " + err);
    }

    png_set_read_fn(png, &st, png_read_cb);
    png_read_info(png, info);

    png_uint_32 w = png_get_image_width(png, info);
    png_uint_32 h = png_get_image_height(png, info);
    int bit_depth = png_get_bit_depth(png, info);
    int color_type = png_get_color_type(png, info);

    if (bit_depth == 16) png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    RgbImage image(static_cast<int>(w), static_cast<int>(h));
    std::size_t rowbytes = png_get_rowbytes(png, info);
    if (rowbytes != static_cast<std::size_t>(w) * 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DecodeError("PNG decode: unexpected row size after transforms");
    }
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = image.pixels.data() + static_cast<std::size_t>(y) * w * 3;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return image;
}

struct JpegErrorMgr {
    jpeg_error_mgr pub;
    jmp_buf jmp;
    std::string message;
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* mgr = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    char buf[JMSG_LENGTH_MAX];
    (*cinfo->err->format_message)(cinfo, buf);
    mgr->message = buf;
    longjmp(mgr->jmp, 1);
}

RgbImage decode_jpeg(const std::vector<std::uint8_t>& bytes) {
    jpeg_decompress_struct cinfo;
    JpegErrorMgr err;
    cinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = jpeg_error_exit;

    if (setjmp(err.jmp)) {
        jpeg_destroy_decompress(&cinfo);
        throw DecodeError("JPEG decode failed: " + err.message);
    }

    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);

    RgbImage image(static_cast<int>(cinfo.output_width), static_cast<int>(cinfo.output_height));
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = image.pixels.data() +
                       static_cast<std::size_t>(cinfo.output_scanline) * cinfo.output_width * 3;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return image;
}

std::vector<std::uint8_t> encode_png_raw(int width, int height, int color_type,
                                         const std::uint8_t* data, int channels) {
    std::string err;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, png_error_cb, png_warn_cb);
    if (!png) throw std::runtime_error("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("libpng init failed");
    }

    std::vector<std::uint8_t> out;
    std::vector<png_bytep> rows(height);

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("PNG encode failed: " + err);
    }

    png_set_write_fn(png, &out, png_write_cb, png_flush_cb);
    png_set_IHDR(png, info, width, height, 8, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < height; ++y) {
        rows[y] = const_cast<png_bytep>(data + static_cast<std::size_t>(y) * width * channels);
    }
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

}  // namespace

RgbImage decode_image(const std::vector<std::uint8_t>& bytes) {
    static const std::uint8_t png_sig[4] = {0x89, 'P', 'N', 'G'};
    static const std::uint8_t jpg_sig[2] = {0xFF, 0xD8};
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), png_sig, 4) == 0) return decode_png(bytes);
    if (bytes.size() >= 2 && std::memcmp(bytes.data(), jpg_sig, 2) == 0) return decode_jpeg(bytes);
    throw DecodeError("unrecognized image signature at offset 0 (expected PNG or JPEG)");
}

std::vector<std::uint8_t> encode_png(const RgbImage& image) {
    return encode_png_raw(image.width, image.height, PNG_COLOR_TYPE_RGB, image.pixels.data(), 3);
}

std::vector<std::uint8_t> encode_png(const GrayMap& map) {
    return encode_png_raw(map.width, map.height, PNG_COLOR_TYPE_GRAY, map.values.data(), 1);
}

RgbImage load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DecodeError("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return decode_image(bytes);
}

namespace {
void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}
}  // namespace

void save_png(const std::string& path, const RgbImage& image) { write_file(path, encode_png(image)); }
void save_png(const std::string& path, const GrayMap& map) { write_file(path, encode_png(map)); }

}  // namespace pyra
