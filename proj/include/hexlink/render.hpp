#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "hexlink/placement.hpp"
#include "hexlink/pruning.hpp"

namespace hexlink {

namespace detail {

// Lays cell strings out on the hex lattice: column 2q + r, one text row per
// board row.
inline std::string hex_grid(const BoardMap& b, const std::vector<std::string>& cells) {
  if (b.size() == 0) return {};
  int min_x = 1 << 20, max_x = -(1 << 20), min_r = 1 << 20, max_r = -(1 << 20);
  std::size_t w = 1;
  for (SpotId s = 0; s < b.size(); ++s) {
    HexVec p = b.position(s);
    min_x = std::min(min_x, 2 * p.a + p.b);
    max_x = std::max(max_x, 2 * p.a + p.b);
    min_r = std::min(min_r, p.b);
    max_r = std::max(max_r, p.b);
    w = std::max(w, cells[static_cast<std::size_t>(s)].size());
  }
  std::size_t step = (w + 2) / 2;
  std::vector<std::string> rows(static_cast<std::size_t>(max_r - min_r + 1),
                                std::string(static_cast<std::size_t>(max_x - min_x) * step + w, ' '));
  for (SpotId s = 0; s < b.size(); ++s) {
    HexVec p = b.position(s);
    const std::string& c = cells[static_cast<std::size_t>(s)];
    std::size_t col = static_cast<std::size_t>(2 * p.a + p.b - min_x) * step + (w - c.size());
    rows[static_cast<std::size_t>(p.b - min_r)].replace(col, c.size(), c);
  }
  std::string out;
  for (auto& row : rows) {
    row.erase(row.find_last_not_of(' ') + 1);
    out += row + '\n';
  }
  return out;
}

inline char piece_letter(int piece, bool upper) { return static_cast<char>((upper ? 'A' : 'a') + piece); }

struct SvgPoint {
  double x;
  double y;
};

inline SvgPoint svg_center(const BoardMap& b, SpotId s, int min_x, int min_r) {
  HexVec p = b.position(s);
  return {30.0 + (2 * p.a + p.b - min_x) * 20.0, 30.0 + (p.b - min_r) * 34.0};
}

inline std::string svg_open(const BoardMap& b, int& min_x, int& min_r) {
  min_x = 1 << 20;
  min_r = 1 << 20;
  int max_x = -(1 << 20), max_r = -(1 << 20);
  for (SpotId s = 0; s < b.size(); ++s) {
    HexVec p = b.position(s);
    min_x = std::min(min_x, 2 * p.a + p.b);
    max_x = std::max(max_x, 2 * p.a + p.b);
    min_r = std::min(min_r, p.b);
    max_r = std::max(max_r, p.b);
  }
  if (b.size() == 0) min_x = max_x = min_r = max_r = 0;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << 60 + (max_x - min_x) * 20
     << "\" height=\"" << 60 + (max_r - min_r) * 34 << "\">\n";
  return os.str();
}

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

inline void svg_outline(std::ostringstream& os, SvgPoint c) {
  os << "  <circle cx=\"" << fmt(c.x) << "\" cy=\"" << fmt(c.y)
     << "\" r=\"17\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1\"/>\n";
}

inline void svg_ring(std::ostringstream& os, SvgPoint c, const std::string& color) {
  os << "  <circle cx=\"" << fmt(c.x) << "\" cy=\"" << fmt(c.y) << "\" r=\"13\" fill=\"none\" stroke=\"" << color
     << "\" stroke-width=\"6\"/>\n";
}

inline void svg_disc(std::ostringstream& os, SvgPoint c, const std::string& color) {
  os << "  <circle cx=\"" << fmt(c.x) << "\" cy=\"" << fmt(c.y) << "\" r=\"8\" fill=\"" << color << "\"/>\n";
}

}  // namespace detail

// Blue (t = 0, cold) to red (t = 1, hot) in RGB: (255t, 0, 255(1 - t)).
inline std::string heat_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x00%02x", static_cast<int>(std::lround(255 * t)),
                static_cast<int>(std::lround(255 * (1 - t))));
  return buf;
}

inline constexpr const char* kUncoveredColor = "#dddddd";

// Fill colour for half value h over the positive range [lo, hi]; a constant
// map gets the middle of the ramp.
inline std::string heat_color(int h, int lo, int hi) {
  if (h <= 0) return kUncoveredColor;
  if (hi <= lo) return heat_color(0.5);
  return heat_color(static_cast<double>(h - lo) / (hi - lo));
}

inline const std::vector<std::string>& piece_palette() {
  static const std::vector<std::string> colors{"#c8a2e8", "#98e08a", "#4fd6d0", "#f2d930", "#2f5fd0", "#f4a6c8",
                                               "#c2185b", "#5e2a84", "#f28c28", "#d32f2f", "#1b6e2a", "#0d2a6b"};
  return colors;
}

// Each spot as two characters, inside then outside: '.' when free, the
// piece letter in lower case for a ball, upper case for a ring; a circle
// shows its letter in both.
inline std::string render_ascii(const Occupancy& occ) {
  const BoardMap& b = occ.board();
  std::vector<std::string> cells;
  for (SpotId s = 0; s < b.size(); ++s) {
    const auto& in = occ.inside(s);
    const auto& out = occ.outside(s);
    std::string c = "..";
    if (in.state == Occupancy::Inside::State::ball) c[0] = detail::piece_letter(in.owner, false);
    if (in.state == Occupancy::Inside::State::circle) c[0] = detail::piece_letter(in.owner, true);
    if (out.state != Occupancy::Outside::State::free) c[1] = detail::piece_letter(out.owner, true);
    cells.push_back(c);
  }
  std::string text = detail::hex_grid(b, cells);
  for (const Placement& p : occ.placements())
    text += std::string(1, detail::piece_letter(p.piece, false)) + ' ' + occ.pieces()[p.piece].name + '\n';
  return text;
}

// Each spot as "inside/outside" heat.
inline std::string render_ascii(const BoardMap& b, const HeatMap& h) {
  std::vector<std::string> cells;
  for (SpotId s = 0; s < b.size(); ++s)
    cells.push_back(std::to_string(h.inside[static_cast<std::size_t>(s)]) + "/" +
                    std::to_string(h.outside[static_cast<std::size_t>(s)]));
  return detail::hex_grid(b, cells);
}

// Rings are drawn as thick circles and balls or circle pieces as inner
// discs, coloured by piece.
inline std::string render_svg(const Occupancy& occ) {
  const BoardMap& b = occ.board();
  int min_x = 0, min_r = 0;
  std::ostringstream os;
  os << detail::svg_open(b, min_x, min_r);
  const auto& pal = piece_palette();
  for (SpotId s = 0; s < b.size(); ++s) {
    auto c = detail::svg_center(b, s, min_x, min_r);
    detail::svg_outline(os, c);
    const auto& in = occ.inside(s);
    const auto& out = occ.outside(s);
    if (out.state != Occupancy::Outside::State::free)
      detail::svg_ring(os, c, pal[static_cast<std::size_t>(out.owner) % pal.size()]);
    if (in.state != Occupancy::Inside::State::free)
      detail::svg_disc(os, c, pal[static_cast<std::size_t>(in.owner) % pal.size()]);
  }
  os << "</svg>\n";
  return os.str();
}

// Inside heat as the disc, outside heat as the ring, on the blue-to-red
// ramp over the positive values; uncovered halves are grey.
inline std::string render_svg(const BoardMap& b, const HeatMap& h) {
  int lo = 0, hi = 0;
  bool any = false;
  for (const auto* v : {&h.inside, &h.outside})
    for (int x : *v)
      if (x > 0) {
        lo = any ? std::min(lo, x) : x;
        hi = any ? std::max(hi, x) : x;
        any = true;
      }
  int min_x = 0, min_r = 0;
  std::ostringstream os;
  os << detail::svg_open(b, min_x, min_r);
  for (SpotId s = 0; s < b.size(); ++s) {
    auto c = detail::svg_center(b, s, min_x, min_r);
    detail::svg_outline(os, c);
    detail::svg_ring(os, c, heat_color(h.outside[static_cast<std::size_t>(s)], lo, hi));
    detail::svg_disc(os, c, heat_color(h.inside[static_cast<std::size_t>(s)], lo, hi));
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace hexlink
