#pragma once

#include "masep/boundary.hpp"

#include <random>

namespace testing_support {

using masep::QMat;
using masep::Rat;

/// Small random rationals from a plain std::mt19937, independent of the
/// library's own sampler.
class RatSource {
 public:
  explicit RatSource(unsigned seed) : gen_(seed) {}

  Rat any(int span = 9) {
    std::uniform_int_distribution<int> num(-span, span);
    std::uniform_int_distribution<int> den(1, span);
    return Rat(num(gen_), den(gen_));
  }

  Rat positive(int span = 9) {
    std::uniform_int_distribution<int> v(1, span);
    return Rat(v(gen_), v(gen_));
  }

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

  QMat matrix(int rows, int cols, int span = 9) {
    QMat m(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) m(r, c) = any(span);
    }
    return m;
  }

  /// q and rates with a + c + q - 1 > 0 and q != 1.
  struct Draw {
    Rat a, c, q;
  };
  Draw admissible() {
    while (true) {
      Draw d{positive(), positive(), positive()};
      if (d.q != Rat(1) && (d.a + d.c + d.q - Rat(1)).sign() > 0) return d;
    }
  }

 private:
  std::mt19937 gen_;
};

inline masep::BoundarySpec with_rates(masep::BoundarySpec s, const Rat& a, const Rat& c,
                                      masep::Side side = masep::Side::Left) {
  s.rate_a = a;
  s.rate_c = c;
  s.side = side;
  return s;
}

inline QMat mat(std::initializer_list<std::initializer_list<Rat>> rows) {
  QMat m(static_cast<masep::Index>(rows.size()), static_cast<masep::Index>(rows.begin()->size()));
  masep::Index r = 0;
  for (const auto& row : rows) {
    masep::Index c = 0;
    for (const auto& v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

}  // namespace testing_support
