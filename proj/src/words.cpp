#include "ncfock/words.hpp"

#include <algorithm>

#include "ncfock/errors.hpp"

namespace ncfock {

std::size_t words_of_length(int d, int k) {
  std::size_t count = 1;
  for (int i = 0; i < k; ++i) count *= static_cast<std::size_t>(d);
  return count;
}

std::size_t word_count(int d, int n) {
  if (n < 0) return 0;
  std::size_t total = 0;
  std::size_t level = 1;
  for (int k = 0; k <= n; ++k) {
    total += level;
    level *= static_cast<std::size_t>(d);
  }
  return total;
}

std::size_t rank_word(const Word& alpha, int d) {
  if (d < 1) throw InvalidWord("alphabet size must be positive");
  std::size_t within = 0;
  for (int letter : alpha) {
    if (letter < 1 || letter > d) {
      throw InvalidWord("letter " + std::to_string(letter) + " outside [1," +
                        std::to_string(d) + "]");
    }
    within = within * static_cast<std::size_t>(d) +
             static_cast<std::size_t>(letter - 1);
  }
  return word_count(d, static_cast<int>(alpha.size()) - 1) + within;
}

Word unrank_word(std::size_t index, int d) {
  if (d < 1) throw InvalidWord("alphabet size must be positive");
  int length = 0;
  std::size_t level = 1;
  while (index >= level) {
    index -= level;
    level *= static_cast<std::size_t>(d);
    ++length;
  }
  Word alpha(static_cast<std::size_t>(length));
  for (int i = length - 1; i >= 0; --i) {
    alpha[static_cast<std::size_t>(i)] =
        static_cast<int>(index % static_cast<std::size_t>(d)) + 1;
    index /= static_cast<std::size_t>(d);
  }
  return alpha;
}

Word concat_words(const Word& alpha, const Word& beta) {
  Word out;
  out.reserve(alpha.size() + beta.size());
  out.insert(out.end(), alpha.begin(), alpha.end());
  out.insert(out.end(), beta.begin(), beta.end());
  return out;
}

Word reverse_word(const Word& alpha) { return Word(alpha.rbegin(), alpha.rend()); }

Word word_from_string(const std::string& text, int d) {
  Word out;
  if (text.empty() || text == "e" || text == "0") return out;
  for (char c : text) {
    if (c < '1' || c > '9') throw InvalidWord("bad letter '" + std::string(1, c) + "'");
    int letter = c - '0';
    if (letter > d) throw InvalidWord("letter " + std::to_string(letter) + " exceeds d");
    out.push_back(letter);
  }
  return out;
}

std::string word_to_string(const Word& alpha) {
  if (alpha.empty()) return "e";
  std::string out;
  for (int letter : alpha) out += std::to_string(letter);
  return out;
}

bool GradedLess::operator()(const Word& a, const Word& b) const {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<Word> words_up_to(int d, int n) {
  std::size_t count = word_count(d, n);
  std::vector<Word> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(unrank_word(i, d));
  return out;
}

}  // namespace ncfock
