#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace godist {

inline constexpr int kBoardSize = 19;
inline constexpr int kBoardPoints = kBoardSize * kBoardSize;  // 361
inline constexpr int kMaxSquaredDistance = 2 * 18 * 18;       // 648, corner to corner

// Raised when a two-letter coordinate code cannot be decoded.
class CoordinateError : public std::runtime_error {
 public:
  explicit CoordinateError(const std::string& msg) : std::runtime_error(msg) {}
};

// A grid intersection. Columns and rows are 0..18; display letters run A..S
// (the traditional skip of 'I' is not used here) and SGF letters a..s.
class Point {
 public:
  constexpr Point() = default;
  Point(int col, int row) {
    if (col < 0 || col >= kBoardSize || row < 0 || row >= kBoardSize)
      throw std::out_of_range("point (" + std::to_string(col) + "," + std::to_string(row) +
                              ") outside the 19x19 board");
    col_ = static_cast<int8_t>(col);
    row_ = static_cast<int8_t>(row);
  }

  int col() const { return col_; }
  int row() const { return row_; }
  int index() const { return col_ * kBoardSize + row_; }  // (col,row)-lexicographic

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;

 private:
  int8_t col_ = 0;
  int8_t row_ = 0;
};

struct SquaredDistance {
  int value = 0;
  friend bool operator==(const SquaredDistance&, const SquaredDistance&) = default;
  friend auto operator<=>(const SquaredDistance&, const SquaredDistance&) = default;
};

namespace detail {

inline int decode_letter(char c, char lo, char hi, std::string_view alphabet_name) {
  if (c < lo || c > hi)
    throw CoordinateError("coordinate letter '" + std::string(1, c) + "' outside " +
                          std::string(alphabet_name));
  return c - lo;
}

}  // namespace detail

// Display code: two letters A..S (case accepted either way), first = column.
inline Point point_from_display(std::string_view code) {
  if (code.size() != 2)
    throw CoordinateError("display coordinate must be two letters, got \"" + std::string(code) + "\"");
  const auto up = [](char c) { return (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c; };
  const int col = detail::decode_letter(up(code[0]), 'A', 'S', "A-S");
  const int row = detail::decode_letter(up(code[1]), 'A', 'S', "A-S");
  return Point(col, row);
}

// SGF move code: two lowercase letters a..s, first = column.
inline Point point_from_sgf(std::string_view code) {
  if (code.size() != 2)
    throw CoordinateError("SGF coordinate must be two letters, got \"" + std::string(code) + "\"");
  const int col = detail::decode_letter(code[0], 'a', 's', "a-s");
  const int row = detail::decode_letter(code[1], 'a', 's', "a-s");
  return Point(col, row);
}

inline SquaredDistance squared_distance(const Point& p, const Point& q) {
  const int dc = p.col() - q.col();
  const int dr = p.row() - q.row();
  return SquaredDistance{dc * dc + dr * dr};
}

// Real-valued distance, for display and bin labels only. All aggregation
// stays on the exact integer d^2.
inline double distance(SquaredDistance sq) {
  return std::sqrt(static_cast<double>(sq.value));
}

namespace detail {

struct DistanceAxis {
  std::vector<int> values;                              // ascending d^2, zero excluded
  std::array<int16_t, kMaxSquaredDistance + 1> index;   // d^2 -> axis position, -1 if unreachable

  DistanceAxis() {
    index.fill(-1);
    std::array<bool, kMaxSquaredDistance + 1> seen{};
    for (int dc = 0; dc < kBoardSize; ++dc)
      for (int dr = 0; dr < kBoardSize; ++dr) seen[dc * dc + dr * dr] = true;
    seen[0] = false;
    for (int d2 = 1; d2 <= kMaxSquaredDistance; ++d2) {
      if (!seen[d2]) continue;
      index[d2] = static_cast<int16_t>(values.size());
      values.push_back(d2);
    }
  }
};

inline const DistanceAxis& distance_axis() {
  static const DistanceAxis axis;
  return axis;
}

}  // namespace detail

// Every squared distance achievable between two distinct grid points,
// ascending. This is the canonical histogram bin axis (164 values).
inline const std::vector<SquaredDistance>& distinct_squared_distances() {
  static const std::vector<SquaredDistance> axis = [] {
    std::vector<SquaredDistance> out;
    for (int d2 : detail::distance_axis().values) out.push_back(SquaredDistance{d2});
    return out;
  }();
  return axis;
}

// Position of d2 on the canonical axis, or -1 when no point pair realizes it.
inline int axis_index_of(int d2) {
  if (d2 < 1 || d2 > kMaxSquaredDistance) return -1;
  return detail::distance_axis().index[d2];
}

inline size_t axis_size() { return detail::distance_axis().values.size(); }

}  // namespace godist
