#include <algorithm>
#include <unordered_set>

#include "errors.hpp"
#include "substitution.hpp"

namespace rauzy {

namespace {

constexpr std::size_t kLanguageCap = 2'000'000;

using WordSet = std::unordered_set<Word, WordHash>;

void add_windows(const Word& w, std::size_t length, WordSet& out) {
  if (w.size() <= length) {
    out.insert(w);
    return;
  }
  for (std::size_t i = 0; i + length <= w.size(); ++i) out.insert(w.subword(i, length));
}

// Calls f on every realisation of s(v).
template <class F>
void for_each_image(const RandomSubstitution& s, const Word& v, std::size_t pos, Word& acc, F&& f) {
  if (pos == v.size()) {
    f(acc);
    return;
  }
  const std::size_t mark = acc.size();
  for (const auto& r : s.rules(v[pos])) {
    Word next = acc.prefix(mark);
    next += r.word;
    for_each_image(s, v, pos + 1, next, f);
  }
}

}  // namespace

// Closure of the single letters under "take the length-l windows of some
// realisation of s(v)". A window of s(w) spans at most l letters of w, so the
// closure holds exactly the windows of realisations of every power s^k(a).
LanguageSlice legal_words(const RandomSubstitution& s, std::size_t length) {
  if (length == 0) throw ValidationError("word length must be positive");
  if (!is_primitive(s)) throw ValidationError("legal words need a primitive substitution");
  WordSet all;
  std::vector<Word> frontier;
  for (std::size_t a = 0; a < s.size(); ++a) {
    Word w{static_cast<Letter>(a)};
    all.insert(w);
    frontier.push_back(w);
  }
  while (!frontier.empty()) {
    WordSet fresh;
    for (const Word& v : frontier) {
      Word acc;
      for_each_image(s, v, 0, acc, [&](const Word& image) { add_windows(image, length, fresh); });
    }
    frontier.clear();
    for (const Word& w : fresh)
      if (all.insert(w).second) frontier.push_back(w);
    if (all.size() > kLanguageCap) throw LimitError("legal word enumeration exceeded the size cap");
  }
  LanguageSlice slice{length, {}};
  for (const Word& w : all)
    if (w.size() == length) slice.words.push_back(w);
  std::sort(slice.words.begin(), slice.words.end());
  return slice;
}

}  // namespace rauzy
