#include "pph/words.hpp"

#include <sstream>

#include "pph/errors.hpp"

namespace pph {

void FreeWord::reduce() {
  std::vector<Letter> out;
  for (const Letter& l : letters_) {
    if (!out.empty() && out.back().index == l.index &&
        out.back().exponent == -l.exponent)
      out.pop_back();
    else
      out.push_back(l);
  }
  letters_ = std::move(out);
}

FreeWord FreeWord::operator*(const FreeWord& o) const {
  std::vector<Letter> ls = letters_;
  ls.insert(ls.end(), o.letters_.begin(), o.letters_.end());
  FreeWord w(std::move(ls));
  w.reduce();
  return w;
}

FreeWord FreeWord::inverse() const {
  std::vector<Letter> ls;
  ls.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
    ls.push_back({it->index, -it->exponent});
  return FreeWord(std::move(ls));
}

FreeWord FreeWord::commutator(const FreeWord& x, const FreeWord& y) {
  return x * y * x.inverse() * y.inverse();
}

FreeWord FreeWord::conjugate(const FreeWord& w, const FreeWord& t) {
  return t * w * t.inverse();
}

FreeWord FreeWord::second_derived() {
  FreeWord x = generator(0), y = generator(1);
  return commutator(commutator(x, y), commutator(x.inverse(), y.inverse()));
}

std::string FreeWord::str() const {
  if (letters_.empty()) return "1";
  std::ostringstream os;
  for (const Letter& l : letters_) {
    os << 'x' << l.index;
    if (l.exponent < 0) os << "^-1";
    os << ' ';
  }
  std::string s = os.str();
  s.pop_back();
  return s;
}

PiecewiseMap eval_word(const FreeWord& w,
                       const std::vector<PiecewiseMap>& assignment) {
  if (assignment.empty())
    fail(ErrorCode::IndexOutOfRange, "empty generator assignment");
  const BaseRing& ring = assignment[0].ring();
  for (const PiecewiseMap& f : assignment)
    if (f.ring() != ring)
      fail(ErrorCode::RingMismatch, "generators over different rings");
  PiecewiseMap acc = PiecewiseMap::identity(ring);
  for (const Letter& l : w.letters()) {
    if (l.index >= assignment.size())
      fail(ErrorCode::IndexOutOfRange, "generator index out of range");
    const PiecewiseMap& g = assignment[l.index];
    acc = acc * (l.exponent > 0 ? g : g.inverse());
  }
  return acc;
}

}  // namespace pph
