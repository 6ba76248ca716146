#pragma once

#include <vector>

#include "pph/piecewise.hpp"

namespace pph {

/// Letter of a free group word: generator index with exponent +-1.
struct Letter {
  std::size_t index;
  int exponent;

  bool operator==(const Letter& o) const {
    return index == o.index && exponent == o.exponent;
  }
};

/// Freely reduced word in countably many generators.
class FreeWord {
 public:
  FreeWord() = default;
  static FreeWord generator(std::size_t i) { return FreeWord({{i, 1}}); }
  static FreeWord commutator(const FreeWord& x, const FreeWord& y);
  static FreeWord conjugate(const FreeWord& w, const FreeWord& t);  // t w t^-1
  /// Default second-derived test word [[x, y], [x^-1, y^-1]] in
  /// generators 0 and 1.
  static FreeWord second_derived();

  const std::vector<Letter>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }

  FreeWord operator*(const FreeWord& o) const;
  FreeWord inverse() const;
  bool operator==(const FreeWord& o) const { return letters_ == o.letters_; }

  std::string str() const;

 private:
  explicit FreeWord(std::vector<Letter> ls) : letters_(std::move(ls)) {}
  void reduce();
  std::vector<Letter> letters_;
};

/// Evaluate w on the given generator assignment.
PiecewiseMap eval_word(const FreeWord& w,
                       const std::vector<PiecewiseMap>& assignment);

}  // namespace pph
