#pragma once

#include <cctype>
#include <charconv>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "word.hpp"

namespace coverhunter {

/// Parse failure carrying the byte offset into the input.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string &what, std::size_t offset)
      : std::runtime_error(what + " at byte " + std::to_string(offset)),
        offset_(offset) {}
  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

/// A finite presentation: named generators and freely reduced relators.
struct Presentation {
  std::vector<std::string> generator_names;
  std::vector<Word> relators;

  [[nodiscard]] int generator_count() const noexcept {
    return static_cast<int>(generator_names.size());
  }

  friend bool operator==(const Presentation &, const Presentation &) = default;
};

namespace detail {

class PresentationParser {
public:
  PresentationParser(std::string_view text,
                     const std::vector<std::string> *names = nullptr)
      : text_(text), names_(names) {}

  Presentation parse_presentation() {
    Presentation p;
    expect('<');
    std::unordered_set<std::string> seen;
    do {
      skip_ws();
      std::size_t at = pos_;
      std::string name = ident();
      if (!seen.insert(name).second)
        throw ParseError("duplicate generator '" + name + "'", at);
      p.generator_names.push_back(std::move(name));
    } while (accept(','));
    expect('|');
    names_ = &p.generator_names;
    skip_ws();
    if (peek() != '>') {
      do {
        Word lhs = word();
        Word rel = lhs;
        if (accept('='))
          rel = lhs * word().inverse();
        rel = free_reduce(rel);
        if (!rel.empty())
          p.relators.push_back(std::move(rel));
      } while (accept(','));
    }
    expect('>');
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError("trailing characters after presentation", pos_);
    return p;
  }

  Word parse_word() {
    Word w = word();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError("trailing characters after word", pos_);
    return free_reduce(w);
  }

private:
  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c))
      throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  std::string ident() {
    skip_ws();
    if (pos_ >= text_.size() || !(text_[pos_] >= 'a' && text_[pos_] <= 'z'))
      throw ParseError("expected generator name", pos_);
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           ((text_[pos_] >= 'a' && text_[pos_] <= 'z') ||
            (text_[pos_] >= '0' && text_[pos_] <= '9')))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  long integer() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < text_.size() && text_[pos_] == '-')
      ++pos_;
    while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9')
      ++pos_;
    long value = 0;
    auto [ptr, ec] =
        std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_)
      throw ParseError("expected integer", start);
    if (value == 0)
      throw ParseError("zero exponent", start);
    return value;
  }

  int generator(std::size_t at, const std::string &name) {
    for (std::size_t i = 0; i < names_->size(); ++i)
      if ((*names_)[i] == name)
        return static_cast<int>(i) + 1;
    throw ParseError("unknown generator '" + name + "'", at);
  }

  bool at_term_start() {
    char c = peek();
    return (c >= 'a' && c <= 'z') || c == '(';
  }

  Word word() {
    skip_ws();
    if (peek() == '1') {
      ++pos_;
      return {};
    }
    Word w;
    if (!at_term_start())
      throw ParseError("expected word", pos_);
    while (true) {
      w *= term();
      if (accept('*')) {
        if (!at_term_start())
          throw ParseError("expected term after '*'", pos_);
        continue;
      }
      if (!at_term_start())
        break;
    }
    return w;
  }

  Word term() {
    if (accept('(')) {
      Word inner = word();
      expect(')');
      long e = accept('^') ? integer() : 1;
      return inner.power(e);
    }
    std::size_t at = pos_;
    std::string name = ident();
    Word g{generator(at, name)};
    long e = accept('^') ? integer() : 1;
    return g.power(e);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  const std::vector<std::string> *names_;
};

inline std::string letter_power(const std::vector<std::string> &names,
                                int letter, long count) {
  std::string s = names.at(static_cast<std::size_t>(std::abs(letter)) - 1);
  long e = letter > 0 ? count : -count;
  if (e != 1)
    s += "^" + std::to_string(e);
  return s;
}

inline std::string format_plain(const std::vector<std::string> &names,
                                std::span<const int> l) {
  std::string s;
  for (std::size_t i = 0; i < l.size();) {
    std::size_t j = i;
    while (j < l.size() && l[j] == l[i])
      ++j;
    if (!s.empty())
      s += '*';
    s += letter_power(names, l[i], static_cast<long>(j - i));
    i = j;
  }
  return s;
}

} // namespace detail

/// Parses PRES-v1 text, e.g. `<a,b | a^3, b^4, (a*b^2)^2>`.
inline Presentation parse_presentation(std::string_view text) {
  return detail::PresentationParser(text).parse_presentation();
}

/// Parses a single word over the given generator names.
inline Word parse_word(std::string_view text,
                       const std::vector<std::string> &names) {
  return detail::PresentationParser(text, &names).parse_word();
}

/// Formats a word; proper powers of words with two or more distinct letters
/// are written as `(u)^k`.
inline std::string format_word(const Word &w,
                               const std::vector<std::string> &names) {
  if (w.empty())
    return "1";
  auto l = w.letters();
  std::size_t n = l.size();
  for (std::size_t period = 1; period < n; ++period) {
    if (n % period != 0)
      continue;
    bool periodic = true;
    for (std::size_t i = period; i < n && periodic; ++i)
      periodic = l[i] == l[i - period];
    if (!periodic)
      continue;
    auto unit = l.subspan(0, period);
    bool single_letter = true;
    for (int x : unit)
      single_letter = single_letter && x == unit[0];
    if (single_letter)
      break;
    return "(" + detail::format_plain(names, unit) + ")^" +
           std::to_string(n / period);
  }
  return detail::format_plain(names, l);
}

inline std::string to_string(const Presentation &p) {
  std::string s = "<";
  for (std::size_t i = 0; i < p.generator_names.size(); ++i) {
    if (i)
      s += ',';
    s += p.generator_names[i];
  }
  s += " |";
  for (std::size_t i = 0; i < p.relators.size(); ++i) {
    s += i ? ", " : " ";
    s += format_word(p.relators[i], p.generator_names);
  }
  s += ">";
  return s;
}

/// P with the extra relator gamma^n.
inline Presentation quotient_presentation(const Presentation &p,
                                          const Word &gamma, long n) {
  if (gamma.empty())
    throw std::invalid_argument("quotient_presentation: empty word");
  if (n < 1)
    throw std::invalid_argument("quotient_presentation: n must be positive");
  if (gamma.max_generator() > p.generator_count())
    throw std::invalid_argument(
        "quotient_presentation: word uses unknown generators");
  Presentation q = p;
  Word r = free_reduce(gamma.power(n));
  if (!r.empty())
    q.relators.push_back(std::move(r));
  return q;
}

} // namespace coverhunter
