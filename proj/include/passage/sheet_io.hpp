// SHT1 binary sheet files.
//
// Layout (bit-exact):
//   offset 0   magic "SHT1" (4 ASCII bytes)
//   offset 4   version   u8, currently 1
//   offset 5   game      u8 (0 = nim3, 1 = chomp3)
//   offset 6   kind      u8 (0 = W, 1 = L, 2 = What, 3 = Lhat, 4 = V, 5 = Wt, 6 = Lt)
//   offset 7   reserved  u8, must be 0
//   offset 8   level     u32 little-endian
//   offset 12  height    u32 little-endian
//   offset 16  width     u32 little-endian
//   offset 20  body: height rows of ceil(width/8) bytes; column z lives in
//              byte z>>3 at bit z&7 (least-significant-bit first). Padding
//              bits past the width in the last byte of a row must be zero.
#ifndef PASSAGE_SHEET_IO_HPP
#define PASSAGE_SHEET_IO_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "passage/errors.hpp"
#include "passage/sheet.hpp"
#include "passage/types.hpp"

namespace passage {

struct SheetMeta {
  Game game = Game::nim3;
  SheetKind kind = SheetKind::winner;
  std::uint32_t level = 0;

  friend bool operator==(const SheetMeta&, const SheetMeta&) = default;
};

namespace detail {

inline void put_u32le(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
  out.push_back(static_cast<char>((v >> 16) & 0xFF));
  out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

inline std::uint32_t get_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace detail

inline size_t sht_row_bytes(std::uint32_t width) { return (static_cast<size_t>(width) + 7) / 8; }

inline std::string encode_sht(const Sheet& s, const SheetMeta& meta) {
  const size_t row_bytes = sht_row_bytes(s.width());
  std::string out;
  out.reserve(20 + row_bytes * s.height());
  out += "SHT1";
  out.push_back(1);  // version
  out.push_back(static_cast<char>(meta.game));
  out.push_back(static_cast<char>(meta.kind));
  out.push_back(0);  // reserved
  detail::put_u32le(out, meta.level);
  detail::put_u32le(out, s.height());
  detail::put_u32le(out, s.width());
  for (std::uint32_t y = 0; y < s.height(); ++y) {
    const std::uint64_t* words = s.row_words(y);
    for (size_t b = 0; b < row_bytes; ++b) {
      out.push_back(static_cast<char>((words[b / 8] >> (8 * (b % 8))) & 0xFF));
    }
  }
  return out;
}

inline void write_sht(const Sheet& s, const SheetMeta& meta, std::ostream& os) {
  const std::string bytes = encode_sht(s, meta);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw FormatError("sheet write failed");
}

inline Sheet read_sht(std::istream& is, SheetMeta* meta_out = nullptr) {
  unsigned char header[20];
  if (!is.read(reinterpret_cast<char*>(header), 20))
    throw FormatError("sheet file truncated: header incomplete");
  if (std::memcmp(header, "SHT1", 4) != 0) throw FormatError("bad magic, not an SHT1 file");
  if (header[4] != 1) throw FormatError("unsupported SHT version " + std::to_string(header[4]));
  if (header[5] > 1) throw FormatError("bad game byte");
  if (header[6] > 6) throw FormatError("bad sheet-kind byte");
  if (header[7] != 0) throw FormatError("reserved byte must be zero");
  const std::uint32_t level = detail::get_u32le(header + 8);
  const std::uint32_t height = detail::get_u32le(header + 12);
  const std::uint32_t width = detail::get_u32le(header + 16);
  if (height == 0 || width == 0) throw FormatError("zero sheet dimension");

  Sheet s(height, width);
  const size_t row_bytes = sht_row_bytes(width);
  std::string row(row_bytes, '\0');
  const unsigned tail_bits = width % 8;
  for (std::uint32_t y = 0; y < height; ++y) {
    if (!is.read(row.data(), static_cast<std::streamsize>(row_bytes)))
      throw FormatError("sheet file truncated in row " + std::to_string(y));
    if (tail_bits != 0) {
      const unsigned char last = static_cast<unsigned char>(row[row_bytes - 1]);
      if (last >> tail_bits)
        throw FormatError("non-canonical sheet: padding bits set in row " + std::to_string(y));
    }
    std::uint64_t* words = s.row_words(y);
    for (size_t b = 0; b < row_bytes; ++b) {
      words[b / 8] |= static_cast<std::uint64_t>(static_cast<unsigned char>(row[b])) << (8 * (b % 8));
    }
  }
  if (meta_out) {
    *meta_out = SheetMeta{static_cast<Game>(header[5]), static_cast<SheetKind>(header[6]), level};
  }
  return s;
}

inline Sheet read_sht_file(const std::filesystem::path& path, SheetMeta* meta_out = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open sheet file " + path.string());
  return read_sht(in, meta_out);
}

// All persistent outputs go through temp-file-plus-rename so that readers
// never observe a partially written file.
inline void write_bytes_atomic(const std::string& bytes, const std::filesystem::path& path) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ConfigError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline void write_sht_file_atomic(const Sheet& s, const SheetMeta& meta,
                                  const std::filesystem::path& path) {
  write_bytes_atomic(encode_sht(s, meta), path);
}

}  // namespace passage

#endif  // PASSAGE_SHEET_IO_HPP
