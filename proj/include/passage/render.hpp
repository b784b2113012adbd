// Sheet rendering to binary PGM (P5, maxval 255). Sheet row 0 is drawn at
// the bottom of the image, columns map to image columns. Background is 255,
// winner cells 128, loser cells 0; losers paint over winners.
#ifndef PASSAGE_RENDER_HPP
#define PASSAGE_RENDER_HPP

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>

#include "passage/errors.hpp"
#include "passage/sheet.hpp"
#include "passage/sheet_io.hpp"

namespace passage {

inline std::string render_pgm(const Sheet* winners, const Sheet* losers) {
  if (!winners && !losers) throw ContractError("render needs at least one sheet");
  if (winners && losers && !winners->same_dims(*losers))
    throw ContractError("composited sheets must share dimensions");
  const Sheet& ref = winners ? *winners : *losers;
  const std::uint32_t h = ref.height();
  const std::uint32_t w = ref.width();
  std::string out = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  out.reserve(out.size() + static_cast<size_t>(h) * w);
  for (std::uint32_t row = 0; row < h; ++row) {
    const std::uint32_t y = h - 1 - row;
    for (std::uint32_t z = 0; z < w; ++z) {
      unsigned char px = 255;
      if (winners && winners->get(y, z)) px = 128;
      if (losers && losers->get(y, z)) px = 0;
      out.push_back(static_cast<char>(px));
    }
  }
  return out;
}

inline void render_pgm(const Sheet* winners, const Sheet* losers, std::ostream& os) {
  const std::string s = render_pgm(winners, losers);
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline void render_pgm_atomic(const Sheet* winners, const Sheet* losers,
                              const std::filesystem::path& path) {
  write_bytes_atomic(render_pgm(winners, losers), path);
}

}  // namespace passage

#endif  // PASSAGE_RENDER_HPP
