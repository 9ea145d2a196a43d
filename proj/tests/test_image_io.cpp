#include <doctest.h>

#include "image_io.hpp"
#include "rng.hpp"

using namespace fpv;

#ifndef FPV_GOLDEN_DIR
#define FPV_GOLDEN_DIR "tests/golden"
#endif

TEST_CASE("PNG encode/decode round-trips random rasters") {
  Rng rng(11);
  for (int iter = 0; iter < 20; ++iter) {
    int w = rng.uniform_int(1, 100);
    int h = rng.uniform_int(1, 100);
    ClassRaster img(w, h);
    for (uint8_t& v : img.data) v = static_cast<uint8_t>(rng.uniform_int(0, 255));
    ClassRaster back = decode_png_gray(encode_png_gray(img));
    CHECK(back == img);
  }
}

TEST_CASE("PNG encoding is deterministic") {
  ClassRaster img(33, 17);
  for (size_t i = 0; i < img.data.size(); ++i) img.data[i] = static_cast<uint8_t>(i % 251);
  CHECK(encode_png_gray(img) == encode_png_gray(img));
}

TEST_CASE("decoder handles zlib-compressed PNGs with every filter type") {
  ClassRaster img = read_png_gray(std::string(FPV_GOLDEN_DIR) + "/compressed_gradient.png");
  REQUIRE(img.width == 16);
  REQUIRE(img.height == 16);
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) {
      CHECK(img.at(x, y) == static_cast<uint8_t>((x * 13 + y * 7) % 256));
    }
  }
}

TEST_CASE("PNG decoder rejects malformed input without crashing") {
  CHECK_THROWS_AS(decode_png_gray({}), Error);
  CHECK_THROWS_AS(decode_png_gray({1, 2, 3, 4}), Error);
  std::vector<uint8_t> good = encode_png_gray(ClassRaster(4, 4, 7));
  for (size_t i = 8; i < good.size(); i += 7) {
    std::vector<uint8_t> bad = good;
    bad[i] ^= 0xFF;
    CHECK_THROWS_AS(decode_png_gray(bad), Error);  // CRC or structure breaks
  }
  std::vector<uint8_t> truncated(good.begin(), good.begin() + good.size() / 2);
  CHECK_THROWS_AS(decode_png_gray(truncated), Error);
}

TEST_CASE("FPT1 round-trips bit-exactly") {
  Rng rng(23);
  HeatmapStack stack(21, 9, 13);
  for (float& v : stack.data) v = static_cast<float>(rng.uniform_real());
  std::vector<uint8_t> bytes = encode_fpt1(stack);
  HeatmapStack back = decode_fpt1(bytes);
  CHECK(back == stack);
  CHECK(encode_fpt1(back) == bytes);
}

TEST_CASE("FPT1 golden file decodes to the ramp and re-encodes byte-identically") {
  std::string path = std::string(FPV_GOLDEN_DIR) + "/ramp.fpt1";
  std::vector<uint8_t> bytes = read_file_bytes(path);
  HeatmapStack stack = decode_fpt1(bytes);
  REQUIRE(stack.channels == 3);
  REQUIRE(stack.height == 5);
  REQUIRE(stack.width == 7);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < 5; ++y) {
      for (int x = 0; x < 7; ++x) {
        CHECK(stack.at(c, x, y) == static_cast<float>((c * 10000 + y * 100 + x) * 0.001));
      }
    }
  }
  CHECK(encode_fpt1(stack) == bytes);
}

TEST_CASE("FPT1 rejects malformed headers") {
  CHECK_THROWS_AS(decode_fpt1({}), Error);
  CHECK_THROWS_AS(decode_fpt1({'F', 'P', 'T', '2', 0, 0, 0, 0}), Error);
  HeatmapStack s(1, 2, 2);
  std::vector<uint8_t> bytes = encode_fpt1(s);
  bytes.pop_back();
  CHECK_THROWS_AS(decode_fpt1(bytes), Error);
}
