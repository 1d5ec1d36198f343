#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ncfock {

// A word over the alphabet {1,...,d}; the empty vector is the empty word.
using Word = std::vector<int>;

// Number of words of length exactly k over d letters.
std::size_t words_of_length(int d, int k);

// Number of words of length at most n over d letters.
std::size_t word_count(int d, int n);

// Index of alpha in graded lexicographic order (length first, then lex).
std::size_t rank_word(const Word& alpha, int d);

Word unrank_word(std::size_t index, int d);

Word concat_words(const Word& alpha, const Word& beta);

Word reverse_word(const Word& alpha);

// "122" -> {1,2,2}; "" or "0" or "e" -> empty word.
Word word_from_string(const std::string& text, int d);

std::string word_to_string(const Word& alpha);

// Graded-lex comparison usable as an ordered-map comparator.
struct GradedLess {
  bool operator()(const Word& a, const Word& b) const;
};

// All words of length at most n, in rank order.
std::vector<Word> words_up_to(int d, int n);

}  // namespace ncfock
