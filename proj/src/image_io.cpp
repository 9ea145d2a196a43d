/* Copyright 2026 the fpvec authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "image_io.hpp"

#include <array>
#include <cstdint>
#include <bit>
#include <cstring>
#include <fstream>

namespace fpv {

namespace {

// ---------------------------------------------------------------------------
// checksums

uint32_t crc32_bytes(const uint8_t* data, size_t len, uint32_t crc = 0) {
  static const auto table = [] {
    std::array<uint32_t, 256> t{};
    for (uint32_t n = 0; n < 256; ++n) {
      uint32_t c = n;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[n] = c;
    }
    return t;
  }();
  crc ^= 0xFFFFFFFFu;
  for (size_t i = 0; i < len; ++i) crc = table[(crc ^ data[i]) & 0xFF] ^ (crc >> 8);
  return crc ^ 0xFFFFFFFFu;
}

uint32_t adler32_bytes(const uint8_t* data, size_t len) {
  uint32_t a = 1, b = 0;
  for (size_t i = 0; i < len; ++i) {
    a = (a + data[i]) % 65521u;
    b = (b + a) % 65521u;
  }
  return (b << 16) | a;
}

// ---------------------------------------------------------------------------
// inflate

class BitReader {
 public:
  BitReader(const uint8_t* data, size_t len) : data_(data), len_(len) {}

  uint32_t bits(int n) {
    while (nbits_ < n) {
      if (pos_ >= len_) raise(Errc::BadFormat, "deflate stream truncated");
      acc_ |= static_cast<uint64_t>(data_[pos_++]) << nbits_;
      nbits_ += 8;
    }
    uint32_t v = static_cast<uint32_t>(acc_ & ((1u << n) - 1));
    acc_ >>= n;
    nbits_ -= n;
    return v;
  }

  void align_byte() {
    acc_ >>= nbits_ % 8;
    nbits_ -= nbits_ % 8;
  }

  const uint8_t* raw(size_t n) {
    if (nbits_ % 8 != 0) raise(Errc::BadFormat, "stored block not byte aligned");
    while (nbits_ > 0) {
      pos_ -= 1;
      nbits_ -= 8;
    }
    if (pos_ + n > len_) raise(Errc::BadFormat, "stored block truncated");
    const uint8_t* p = data_ + pos_;
    pos_ += n;
    acc_ = 0;
    return p;
  }

  size_t pos() const { return pos_; }

 private:
  const uint8_t* data_;
  size_t len_;
  size_t pos_ = 0;
  uint64_t acc_ = 0;
  int nbits_ = 0;
};

struct Huffman {
  std::array<uint16_t, 16> count{};
  std::vector<uint16_t> symbols;

  void build(const uint8_t* lengths, int n) {
    count.fill(0);
    for (int i = 0; i < n; ++i) {
      if (lengths[i] > 15) raise(Errc::BadFormat, "bad code length");
      ++count[lengths[i]];
    }
    count[0] = 0;
    int left = 1;
    for (int len = 1; len <= 15; ++len) {
      left = (left << 1) - count[len];
      if (left < 0) raise(Errc::BadFormat, "over-subscribed huffman code");
    }
    std::array<uint16_t, 16> offs{};
    for (int len = 1; len < 15; ++len) offs[len + 1] = offs[len] + count[len];
    symbols.assign(offs[15] + count[15], 0);
    for (int i = 0; i < n; ++i) {
      if (lengths[i] != 0) symbols[offs[lengths[i]]++] = static_cast<uint16_t>(i);
    }
  }

  int decode(BitReader& br) const {
    int code = 0, first = 0, index = 0;
    for (int len = 1; len <= 15; ++len) {
      code |= static_cast<int>(br.bits(1));
      int cnt = count[len];
      if (code - first < cnt) return symbols[index + code - first];
      index += cnt;
      first = (first + cnt) << 1;
      code <<= 1;
    }
    raise(Errc::BadFormat, "invalid huffman code");
  }
};

constexpr uint16_t kLenBase[29] = {3,  4,  5,  6,  7,  8,  9,  10, 11,  13,  15,  17,  19, 23, 27,
                                   31, 35, 43, 51, 59, 67, 83, 99, 115, 131, 163, 195, 227, 258};
constexpr uint8_t kLenExtra[29] = {0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2,
                                   2, 3, 3, 3, 3, 4, 4, 4, 4, 5, 5, 5, 5, 0};
constexpr uint16_t kDistBase[30] = {1,    2,    3,    4,    5,    7,     9,     13,    17,   25,
                                    33,   49,   65,   97,   129,  193,   257,   385,   513,  769,
                                    1025, 1537, 2049, 3073, 4097, 6145,  8193,  12289, 16385, 24577};
constexpr uint8_t kDistExtra[30] = {0, 0, 0, 0, 1, 1, 2, 2, 3, 3, 4,  4,  5,  5,  6,
                                    6, 7, 7, 8, 8, 9, 9, 10, 10, 11, 11, 12, 12, 13, 13};

void inflate_block(BitReader& br, const Huffman& lit, const Huffman& dist,
                   std::vector<uint8_t>& out) {
  for (;;) {
    int sym = lit.decode(br);
    if (sym < 256) {
      out.push_back(static_cast<uint8_t>(sym));
    } else if (sym == 256) {
      return;
    } else {
      sym -= 257;
      if (sym >= 29) raise(Errc::BadFormat, "invalid length code");
      size_t len = kLenBase[sym] + br.bits(kLenExtra[sym]);
      int dsym = dist.decode(br);
      if (dsym >= 30) raise(Errc::BadFormat, "invalid distance code");
      size_t d = kDistBase[dsym] + br.bits(kDistExtra[dsym]);
      if (d > out.size()) raise(Errc::BadFormat, "distance beyond output");
      size_t start = out.size() - d;
      for (size_t i = 0; i < len; ++i) out.push_back(out[start + i]);
    }
  }
}

std::vector<uint8_t> inflate(const uint8_t* data, size_t len) {
  BitReader br(data, len);
  std::vector<uint8_t> out;
  for (;;) {
    uint32_t final = br.bits(1);
    uint32_t type = br.bits(2);
    if (type == 0) {
      br.align_byte();
      const uint8_t* hdr = br.raw(4);
      uint16_t n = static_cast<uint16_t>(hdr[0] | (hdr[1] << 8));
      uint16_t nn = static_cast<uint16_t>(hdr[2] | (hdr[3] << 8));
      if (static_cast<uint16_t>(~n) != nn) raise(Errc::BadFormat, "stored block length check failed");
      const uint8_t* p = br.raw(n);
      out.insert(out.end(), p, p + n);
    } else if (type == 1) {
      static const auto fixed = [] {
        std::pair<Huffman, Huffman> h;
        std::array<uint8_t, 288> litlen{};
        for (int i = 0; i < 144; ++i) litlen[i] = 8;
        for (int i = 144; i < 256; ++i) litlen[i] = 9;
        for (int i = 256; i < 280; ++i) litlen[i] = 7;
        for (int i = 280; i < 288; ++i) litlen[i] = 8;
        h.first.build(litlen.data(), 288);
        std::array<uint8_t, 30> dlen{};
        dlen.fill(5);
        h.second.build(dlen.data(), 30);
        return h;
      }();
      inflate_block(br, fixed.first, fixed.second, out);
    } else if (type == 2) {
      int hlit = static_cast<int>(br.bits(5)) + 257;
      int hdist = static_cast<int>(br.bits(5)) + 1;
      int hclen = static_cast<int>(br.bits(4)) + 4;
      static constexpr uint8_t kOrder[19] = {16, 17, 18, 0, 8,  7, 9,  6, 10, 5,
                                             11, 4,  12, 3, 13, 2, 14, 1, 15};
      std::array<uint8_t, 19> clen{};
      for (int i = 0; i < hclen; ++i) clen[kOrder[i]] = static_cast<uint8_t>(br.bits(3));
      Huffman cl;
      cl.build(clen.data(), 19);
      std::vector<uint8_t> lengths(hlit + hdist, 0);
      for (int i = 0; i < hlit + hdist;) {
        int sym = cl.decode(br);
        if (sym < 16) {
          lengths[i++] = static_cast<uint8_t>(sym);
        } else if (sym == 16) {
          if (i == 0) raise(Errc::BadFormat, "repeat with no previous length");
          int rep = 3 + static_cast<int>(br.bits(2));
          uint8_t prev = lengths[i - 1];
          while (rep-- > 0 && i < hlit + hdist) lengths[i++] = prev;
        } else if (sym == 17) {
          int rep = 3 + static_cast<int>(br.bits(3));
          while (rep-- > 0 && i < hlit + hdist) lengths[i++] = 0;
        } else {
          int rep = 11 + static_cast<int>(br.bits(7));
          while (rep-- > 0 && i < hlit + hdist) lengths[i++] = 0;
        }
      }
      Huffman lit, dist;
      lit.build(lengths.data(), hlit);
      dist.build(lengths.data() + hlit, hdist);
      inflate_block(br, lit, dist, out);
    } else {
      raise(Errc::BadFormat, "invalid deflate block type");
    }
    if (final) return out;
  }
}

std::vector<uint8_t> zlib_decompress(const uint8_t* data, size_t len) {
  if (len < 6) raise(Errc::BadFormat, "zlib stream too short");
  uint8_t cmf = data[0], flg = data[1];
  if ((cmf & 0x0F) != 8) raise(Errc::BadFormat, "unsupported zlib method");
  if ((cmf * 256 + flg) % 31 != 0) raise(Errc::BadFormat, "zlib header check failed");
  if (flg & 0x20) raise(Errc::BadFormat, "preset dictionaries unsupported");
  std::vector<uint8_t> out = inflate(data + 2, len - 2 - 4);
  uint32_t expect = (static_cast<uint32_t>(data[len - 4]) << 24) |
                    (static_cast<uint32_t>(data[len - 3]) << 16) |
                    (static_cast<uint32_t>(data[len - 2]) << 8) | data[len - 1];
  if (adler32_bytes(out.data(), out.size()) != expect) {
    raise(Errc::BadFormat, "zlib adler32 mismatch");
  }
  return out;
}

std::vector<uint8_t> zlib_compress_stored(const uint8_t* data, size_t len) {
  std::vector<uint8_t> out;
  out.reserve(len + len / 65535 * 5 + 16);
  out.push_back(0x78);
  out.push_back(0x01);
  size_t pos = 0;
  do {
    size_t n = std::min<size_t>(65535, len - pos);
    bool last = pos + n == len;
    out.push_back(last ? 1 : 0);
    out.push_back(static_cast<uint8_t>(n & 0xFF));
    out.push_back(static_cast<uint8_t>(n >> 8));
    out.push_back(static_cast<uint8_t>(~n & 0xFF));
    out.push_back(static_cast<uint8_t>((~n >> 8) & 0xFF));
    out.insert(out.end(), data + pos, data + pos + n);
    pos += n;
  } while (pos < len);
  uint32_t adler = adler32_bytes(data, len);
  out.push_back(static_cast<uint8_t>(adler >> 24));
  out.push_back(static_cast<uint8_t>(adler >> 16));
  out.push_back(static_cast<uint8_t>(adler >> 8));
  out.push_back(static_cast<uint8_t>(adler));
  return out;
}

// ---------------------------------------------------------------------------
// PNG chunk plumbing

constexpr uint8_t kPngSig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};

void put_u32_be(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

uint32_t get_u32_be(const uint8_t* p) {
  return (static_cast<uint32_t>(p[0]) << 24) | (static_cast<uint32_t>(p[1]) << 16) |
         (static_cast<uint32_t>(p[2]) << 8) | p[3];
}

void append_chunk(std::vector<uint8_t>& out, const char type[4], const uint8_t* data, size_t len) {
  put_u32_be(out, static_cast<uint32_t>(len));
  size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data, data + len);
  put_u32_be(out, crc32_bytes(out.data() + start, out.size() - start));
}

uint8_t paeth(int a, int b, int c) {
  int p = a + b - c;
  int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return static_cast<uint8_t>(a);
  if (pb <= pc) return static_cast<uint8_t>(b);
  return static_cast<uint8_t>(c);
}

}  // namespace

std::vector<uint8_t> encode_png_gray(const ClassRaster& img) {
  std::vector<uint8_t> raw;
  raw.reserve(static_cast<size_t>(img.height) * (img.width + 1));
  for (int y = 0; y < img.height; ++y) {
    raw.push_back(0);  // filter: none
    const uint8_t* row = img.data.data() + static_cast<size_t>(y) * img.width;
    raw.insert(raw.end(), row, row + img.width);
  }
  std::vector<uint8_t> idat = zlib_compress_stored(raw.data(), raw.size());

  std::vector<uint8_t> out(kPngSig, kPngSig + 8);
  uint8_t ihdr[13];
  ihdr[0] = static_cast<uint8_t>(static_cast<uint32_t>(img.width) >> 24);
  ihdr[1] = static_cast<uint8_t>(static_cast<uint32_t>(img.width) >> 16);
  ihdr[2] = static_cast<uint8_t>(static_cast<uint32_t>(img.width) >> 8);
  ihdr[3] = static_cast<uint8_t>(img.width);
  ihdr[4] = static_cast<uint8_t>(static_cast<uint32_t>(img.height) >> 24);
  ihdr[5] = static_cast<uint8_t>(static_cast<uint32_t>(img.height) >> 16);
  ihdr[6] = static_cast<uint8_t>(static_cast<uint32_t>(img.height) >> 8);
  ihdr[7] = static_cast<uint8_t>(img.height);
  ihdr[8] = 8;   // bit depth
  ihdr[9] = 0;   // grayscale
  ihdr[10] = 0;  // deflate
  ihdr[11] = 0;  // adaptive filtering
  ihdr[12] = 0;  // no interlace
  append_chunk(out, "IHDR", ihdr, sizeof(ihdr));
  append_chunk(out, "IDAT", idat.data(), idat.size());
  append_chunk(out, "IEND", nullptr, 0);
  return out;
}

ClassRaster decode_png_gray(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kPngSig, 8) != 0) {
    raise(Errc::BadFormat, "not a PNG file");
  }
  size_t pos = 8;
  int width = 0, height = 0;
  bool seen_ihdr = false;
  std::vector<uint8_t> idat;
  while (pos + 8 <= bytes.size()) {
    uint32_t len = get_u32_be(bytes.data() + pos);
    if (pos + 12 + static_cast<size_t>(len) > bytes.size()) {
      raise(Errc::BadFormat, "PNG chunk truncated");
    }
    const uint8_t* type = bytes.data() + pos + 4;
    const uint8_t* data = bytes.data() + pos + 8;
    uint32_t crc = get_u32_be(data + len);
    if (crc32_bytes(type, 4 + len) != crc) raise(Errc::BadFormat, "PNG chunk CRC mismatch");
    if (std::memcmp(type, "IHDR", 4) == 0) {
      if (len != 13) raise(Errc::BadFormat, "bad IHDR length");
      width = static_cast<int>(get_u32_be(data));
      height = static_cast<int>(get_u32_be(data + 4));
      if (width <= 0 || height <= 0 ||
          static_cast<int64_t>(width) * height > (int64_t{1} << 28)) {
        raise(Errc::BadFormat, "bad PNG dimensions");
      }
      if (data[8] != 8 || data[9] != 0) raise(Errc::BadFormat, "only 8-bit grayscale supported");
      if (data[12] != 0) raise(Errc::BadFormat, "interlaced PNG unsupported");
      seen_ihdr = true;
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      idat.insert(idat.end(), data, data + len);
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      break;
    }
    pos += 12 + len;
  }
  if (!seen_ihdr) raise(Errc::BadFormat, "missing IHDR");
  std::vector<uint8_t> raw = zlib_decompress(idat.data(), idat.size());
  size_t stride = static_cast<size_t>(width) + 1;
  if (raw.size() != stride * height) raise(Errc::BadFormat, "decompressed size mismatch");

  ClassRaster img(width, height);
  std::vector<uint8_t> prev(width, 0);
  for (int y = 0; y < height; ++y) {
    const uint8_t* src = raw.data() + static_cast<size_t>(y) * stride;
    uint8_t filter = src[0];
    uint8_t* dst = img.data.data() + static_cast<size_t>(y) * width;
    for (int x = 0; x < width; ++x) {
      uint8_t v = src[x + 1];
      uint8_t left = x > 0 ? dst[x - 1] : 0;
      uint8_t up = prev[x];
      uint8_t ul = x > 0 ? prev[x - 1] : 0;
      switch (filter) {
        case 0: break;
        case 1: v = static_cast<uint8_t>(v + left); break;
        case 2: v = static_cast<uint8_t>(v + up); break;
        case 3: v = static_cast<uint8_t>(v + (left + up) / 2); break;
        case 4: v = static_cast<uint8_t>(v + paeth(left, up, ul)); break;
        default: raise(Errc::BadFormat, "unknown PNG filter");
      }
      dst[x] = v;
    }
    std::memcpy(prev.data(), dst, width);
  }
  return img;
}

std::vector<uint8_t> encode_fpt1(const HeatmapStack& stack) {
  std::vector<uint8_t> out;
  out.reserve(16 + stack.data.size() * 4);
  out.insert(out.end(), {'F', 'P', 'T', '1'});
  for (uint32_t v : {static_cast<uint32_t>(stack.channels), static_cast<uint32_t>(stack.height),
                     static_cast<uint32_t>(stack.width)}) {
    out.push_back(static_cast<uint8_t>(v));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 24));
  }
  for (float f : stack.data) {
    uint32_t v = std::bit_cast<uint32_t>(f);
    out.push_back(static_cast<uint8_t>(v));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 24));
  }
  return out;
}

HeatmapStack decode_fpt1(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), "FPT1", 4) != 0) {
    raise(Errc::BadFormat, "not an FPT1 file");
  }
  auto u32 = [&](size_t off) {
    return static_cast<uint32_t>(bytes[off]) | (static_cast<uint32_t>(bytes[off + 1]) << 8) |
           (static_cast<uint32_t>(bytes[off + 2]) << 16) |
           (static_cast<uint32_t>(bytes[off + 3]) << 24);
  };
  uint32_t c = u32(4), h = u32(8), w = u32(12);
  if (c == 0 || h == 0 || w == 0 ||
      static_cast<uint64_t>(c) * h * w > (uint64_t{1} << 28)) {
    raise(Errc::BadFormat, "bad FPT1 dimensions");
  }
  size_t n = static_cast<size_t>(c) * h * w;
  if (bytes.size() != 16 + n * 4) raise(Errc::BadFormat, "FPT1 size mismatch");
  HeatmapStack stack(static_cast<int>(c), static_cast<int>(h), static_cast<int>(w));
  for (size_t i = 0; i < n; ++i) {
    stack.data[i] = std::bit_cast<float>(u32(16 + i * 4));
  }
  return stack;
}

std::vector<uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::IoError, "cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) raise(Errc::IoError, "read failed: " + path);
  return bytes;
}

void write_file_bytes(const std::string& path, const std::vector<uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(Errc::IoError, "cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) raise(Errc::IoError, "write failed: " + path);
}

void write_png_gray(const std::string& path, const ClassRaster& img) {
  write_file_bytes(path, encode_png_gray(img));
}

ClassRaster read_png_gray(const std::string& path) { return decode_png_gray(read_file_bytes(path)); }

void write_fpt1(const std::string& path, const HeatmapStack& stack) {
  write_file_bytes(path, encode_fpt1(stack));
}

HeatmapStack read_fpt1(const std::string& path) { return decode_fpt1(read_file_bytes(path)); }

}  // namespace fpv
