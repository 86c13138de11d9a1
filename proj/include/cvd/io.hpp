#pragma once

// PNG and base64 codecs. Requires linking libpng and OpenSSL::Crypto
// (the cvd::io CMake target does both).

#include <openssl/evp.h>
#include <png.h>

#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

#include "cvd/augment.hpp"
#include "cvd/color.hpp"
#include "cvd/correct.hpp"
#include "cvd/error.hpp"

namespace cvd::io {

using Bytes = std::vector<std::uint8_t>;

inline Bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "unreadable", "cannot open " + path + " for reading", path);
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_file(const std::string& path, const Bytes& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "unwritable", "cannot open " + path + " for writing", path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::io, "unwritable", "short write to " + path, path);
}

namespace detail {

// RAII wrapper over libpng's simplified API.
struct PngImage {
  png_image image{};
  PngImage() {
    image.version = PNG_IMAGE_VERSION;
  }
  ~PngImage() { png_image_free(&image); }
  PngImage(const PngImage&) = delete;
  PngImage& operator=(const PngImage&) = delete;
};

inline Bytes decode_png_raw(const Bytes& bytes, png_uint_32 format, std::size_t channels,
                            std::size_t& width, std::size_t& height) {
  PngImage png;
  if (!png_image_begin_read_from_memory(&png.image, bytes.data(), bytes.size()))
    throw Error(ErrorKind::io, "bad_png", std::string("not a readable PNG: ") + png.image.message,
                "image");
  png.image.format = format;
  width = png.image.width;
  height = png.image.height;
  if (width == 0 || height == 0)
    throw Error(ErrorKind::io, "bad_png", "PNG has zero size", "image");
  Bytes raw(PNG_IMAGE_SIZE(png.image));
  if (!png_image_finish_read(&png.image, nullptr, raw.data(),
                             static_cast<png_int_32>(width * channels), nullptr))
    throw Error(ErrorKind::io, "bad_png", std::string("corrupt PNG: ") + png.image.message, "image");
  return raw;
}

inline Bytes encode_png_raw(const std::uint8_t* data, std::size_t width, std::size_t height,
                            png_uint_32 format, std::size_t channels) {
  PngImage png;
  png.image.width = static_cast<png_uint_32>(width);
  png.image.height = static_cast<png_uint_32>(height);
  png.image.format = format;
  png_alloc_size_t size = 0;
  const auto stride = static_cast<png_int_32>(width * channels);
  if (!png_image_write_to_memory(&png.image, nullptr, &size, 0, data, stride, nullptr))
    throw Error(ErrorKind::internal, "png_encode", std::string("PNG sizing failed: ") + png.image.message);
  Bytes out(size);
  if (!png_image_write_to_memory(&png.image, out.data(), &size, 0, data, stride, nullptr))
    throw Error(ErrorKind::internal, "png_encode", std::string("PNG encode failed: ") + png.image.message);
  out.resize(size);
  return out;
}

}  // namespace detail

/// Decodes any 8-bit PNG to RGB. An alpha channel is dropped, not composited.
inline ImageBuffer decode_png(const Bytes& bytes) {
  std::size_t w = 0, h = 0;
  const Bytes rgba = detail::decode_png_raw(bytes, PNG_FORMAT_RGBA, 4, w, h);
  ImageBuffer img(w, h);
  auto& px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i)
    px[i] = {rgba[4 * i], rgba[4 * i + 1], rgba[4 * i + 2]};
  return img;
}

/// 8-bit RGB PNG, no alpha.
inline Bytes encode_png(const ImageBuffer& img) {
  Bytes rgb(img.size() * 3);
  const auto& px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    rgb[3 * i] = px[i].r;
    rgb[3 * i + 1] = px[i].g;
    rgb[3 * i + 2] = px[i].b;
  }
  return detail::encode_png_raw(rgb.data(), img.width(), img.height(), PNG_FORMAT_RGB, 3);
}

struct GrayImage {
  std::size_t width = 0, height = 0;
  Bytes data;
};

inline GrayImage decode_gray_png(const Bytes& bytes) {
  GrayImage g;
  g.data = detail::decode_png_raw(bytes, PNG_FORMAT_GRAY, 1, g.width, g.height);
  return g;
}

inline Bytes encode_gray_png(const GrayImage& g) {
  return detail::encode_png_raw(g.data.data(), g.width, g.height, PNG_FORMAT_GRAY, 1);
}

inline ImageBuffer read_png(const std::string& path) { return decode_png(read_file(path)); }
inline void write_png(const std::string& path, const ImageBuffer& img) {
  write_file(path, encode_png(img));
}

inline BandImage band_from_png(ConeClass band, const Bytes& bytes) {
  GrayImage g = decode_gray_png(bytes);
  return BandImage(band, g.width, g.height, std::move(g.data));
}

inline Bytes mask_to_png(const RegionMask& mask) {
  GrayImage g{mask.width(), mask.height(), Bytes(mask.width() * mask.height())};
  for (std::size_t i = 0; i < g.data.size(); ++i) g.data[i] = mask.test(i) ? 255 : 0;
  return encode_gray_png(g);
}

// Plate masks travel as one gray PNG: 255 figure dot, 128 ground dot,
// 0 background.
inline Bytes plate_masks_to_png(const RegionMask& figure, const RegionMask& ground) {
  GrayImage g{figure.width(), figure.height(), Bytes(figure.width() * figure.height())};
  for (std::size_t i = 0; i < g.data.size(); ++i)
    g.data[i] = figure.test(i) ? 255 : (ground.test(i) ? 128 : 0);
  return encode_gray_png(g);
}

inline std::pair<RegionMask, RegionMask> plate_masks_from_png(const Bytes& bytes) {
  const GrayImage g = decode_gray_png(bytes);
  RegionMask figure(g.width, g.height), ground(g.width, g.height);
  for (std::size_t i = 0; i < g.data.size(); ++i) {
    if (g.data[i] >= 192)
      figure.set(i);
    else if (g.data[i] >= 64)
      ground.set(i);
  }
  return {std::move(figure), std::move(ground)};
}

// ---------------------------------------------------------------------------
// base64 (RFC 4648, padded, no line breaks)

inline std::string base64_encode(const Bytes& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

inline Bytes base64_decode(std::string_view text, const std::string& field = "image") {
  if (text.size() % 4 != 0)
    throw validation_error("bad_base64", "base64 length must be a multiple of 4", field);
  Bytes out(3 * (text.size() / 4));
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) throw validation_error("bad_base64", "invalid base64 payload", field);
  std::size_t pad = 0;
  if (!text.empty() && text.back() == '=') ++pad;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

}  // namespace cvd::io
