#pragma once

// Little-endian binary container shared by the classifier (magic LIDF),
// embedder (LIDE), and centroid store (LIDC) files.

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "lidforge/errors.hpp"

namespace lidforge {

class BinaryWriter {
 public:
  explicit BinaryWriter(const std::string& path)
      : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw IoFailure("cannot open for writing: " + path);
  }

  void magic(const char tag[4]) { out_.write(tag, 4); check(); }

  void u8(std::uint8_t v) { raw(&v, 1); }
  void u32(std::uint32_t v) { le(v); }
  void u64(std::uint64_t v) { le(v); }
  void f32(float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    le(bits);
  }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    le(bits);
  }
  void str(const std::string& s) {  // NUL-terminated
    raw(s.data(), s.size());
    u8(0);
  }
  void f32s(const float* data, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) f32(data[i]);
  }

  void close() {
    out_.close();
    if (!out_) throw IoFailure("write failed: " + path_);
  }

 private:
  template <typename T>
  void le(T v) {
    unsigned char buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i)
      buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    raw(buf, sizeof(T));
  }
  void raw(const void* p, std::size_t n) {
    out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    check();
  }
  void check() {
    if (!out_) throw IoFailure("write failed: " + path_);
  }

  std::string path_;
  std::ofstream out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(const std::string& path)
      : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw IoFailure("cannot open for reading: " + path);
  }

  // Reads and validates the 4-byte magic plus a u32 format version.
  std::uint32_t header(const char tag[4], std::uint32_t max_version) {
    char got[4];
    raw(got, 4);
    if (std::memcmp(got, tag, 4) != 0)
      throw BadMagic("bad magic in " + path_);
    std::uint32_t version = u32();
    if (version == 0 || version > max_version)
      throw UnsupportedVersion("unsupported format version " +
                               std::to_string(version) + " in " + path_);
    return version;
  }

  std::uint8_t u8() {
    std::uint8_t v;
    raw(&v, 1);
    return v;
  }
  std::uint32_t u32() { return le<std::uint32_t>(); }
  std::uint64_t u64() { return le<std::uint64_t>(); }
  float f32() {
    std::uint32_t bits = le<std::uint32_t>();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
  double f64() {
    std::uint64_t bits = le<std::uint64_t>();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
  std::string str() {
    std::string s;
    for (;;) {
      int c = in_.get();
      if (c == std::char_traits<char>::eof())
        throw TruncatedFile("unexpected end of file: " + path_);
      if (c == 0) break;
      s.push_back(static_cast<char>(c));
    }
    return s;
  }
  void f32s(float* data, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) data[i] = f32();
  }

 private:
  template <typename T>
  T le() {
    unsigned char buf[sizeof(T)];
    raw(buf, sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
      v |= static_cast<T>(buf[i]) << (8 * i);
    return v;
  }
  void raw(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n)
      throw TruncatedFile("unexpected end of file: " + path_);
  }

  std::string path_;
  std::ifstream in_;
};

}  // namespace lidforge
