#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace kneading {

// Letters of the alphabet Z. Arbitrary precision so that translations never
// wrap, no matter how far a walk along a Schreier graph drifts.
using Letter = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                            boost::multiprecision::et_off>;

// A vertex of the standard Z-regular tree. letters[0] is the first level;
// the empty word is the root.
using TreeWord = std::vector<Letter>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ResourceLimit : public Error {
 public:
  using Error::Error;
};

// Order used for every deterministic enumeration: increasing absolute value,
// negative before positive on ties (0, -1, 1, -2, 2, ...).
struct LetterOrder {
  bool operator()(const Letter& lhs, const Letter& rhs) const {
    const Letter al = abs(lhs);
    const Letter ar = abs(rhs);
    if (al != ar) return al < ar;
    return lhs < rhs;
  }
};

// Shorter words first, then lexicographic in LetterOrder.
struct TreeWordOrder {
  bool operator()(const TreeWord& lhs, const TreeWord& rhs) const {
    if (lhs.size() != rhs.size()) return lhs.size() < rhs.size();
    LetterOrder less;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      if (less(lhs[i], rhs[i])) return true;
      if (less(rhs[i], lhs[i])) return false;
    }
    return false;
  }
};

inline Letter parse_letter(std::string_view text) {
  std::size_t pos = 0;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
  if (pos == text.size()) {
    throw ParseError("expected an integer letter, got '" + std::string(text) + "'");
  }
  for (std::size_t i = pos; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw ParseError("expected an integer letter, got '" + std::string(text) + "'");
    }
  }
  std::string digits(text);
  if (digits.front() == '+') digits.erase(digits.begin());
  return Letter(digits);
}

// Space- and/or comma-separated decimal integers. Blank input is the root.
inline TreeWord parse_tree_word(std::string_view text) {
  TreeWord word;
  std::string token;
  auto flush = [&] {
    if (!token.empty()) {
      word.push_back(parse_letter(token));
      token.clear();
    }
  };
  for (char ch : text) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      flush();
    } else {
      token.push_back(ch);
    }
  }
  flush();
  return word;
}

inline std::string format_tree_word(const TreeWord& word, std::string_view sep = " ") {
  std::ostringstream out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out << sep;
    out << word[i];
  }
  return out.str();
}

// An eventually periodic end preperiod . period . period . ... of Z^omega.
struct EndSpec {
  TreeWord preperiod;
  TreeWord period;

  EndSpec() = default;
  EndSpec(TreeWord pre, TreeWord per) : preperiod(std::move(pre)), period(std::move(per)) {
    if (period.empty()) throw PreconditionError("end period must be nonempty");
  }

  // Letter at 0-based position i.
  const Letter& at(std::size_t i) const {
    if (i < preperiod.size()) return preperiod[i];
    return period[(i - preperiod.size()) % period.size()];
  }

  TreeWord prefix(std::size_t length) const {
    TreeWord out;
    out.reserve(length);
    for (std::size_t i = 0; i < length; ++i) out.push_back(at(i));
    return out;
  }

  // The end obtained by deleting the first `count` letters.
  EndSpec tail(std::size_t count) const {
    if (count <= preperiod.size()) {
      return EndSpec(TreeWord(preperiod.begin() + static_cast<std::ptrdiff_t>(count), preperiod.end()),
                     period);
    }
    const std::size_t shift = (count - preperiod.size()) % period.size();
    TreeWord rotated(period.begin() + static_cast<std::ptrdiff_t>(shift), period.end());
    rotated.insert(rotated.end(), period.begin(), period.begin() + static_cast<std::ptrdiff_t>(shift));
    return EndSpec({}, std::move(rotated));
  }

  friend bool operator==(const EndSpec&, const EndSpec&) = default;
};

}  // namespace kneading
