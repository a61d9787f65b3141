// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <fstream>
#include <set>

#include "doctest.h"
#include "mude/batch.hpp"
#include "mude/corpus.hpp"
#include "mude/vocab.hpp"

using namespace mude;

namespace {

Corpus corpus_from(const std::vector<std::vector<std::string>>& s, const std::string& split = "") {
  return Corpus(s, split);
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents) {
    path = std::string("mude_test_") + std::to_string(reinterpret_cast<uintptr_t>(this)) + ".txt";
    std::ofstream out(path, std::ios::binary);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("vocab construction: frequency order, determinism, coverage") {
  Corpus c = corpus_from({{"a", "b"}, {"a"}}, "train");
  Vocabs v1 = build_vocabs(c);
  Vocabs v2 = build_vocabs(c);
  CHECK(v1.words.size() == WordVocab::kReserved + 2);
  CHECK(v1.words.id("a") < v1.words.id("b"));  // higher frequency first
  CHECK(v1.words.id("a") == v2.words.id("a"));
  CHECK(v1.words.id("b") == v2.words.id("b"));
  CHECK(v1.words.id("zzz") == WordVocab::kUnk);

  Corpus xyz = corpus_from({{"xyz"}});
  Vocabs v3 = build_vocabs(xyz);
  CHECK(v3.chars.size() == CharVocab::kReserved + 3);
  CHECK(v3.chars.contains(U'x'));
  CHECK(v3.chars.contains(U'y'));
  CHECK(v3.chars.contains(U'z'));

  CHECK_THROWS_AS(build_vocabs(Corpus()), DataError);
}

TEST_CASE("encode_word structure and round trip") {
  Vocabs v = build_vocabs(corpus_from({{"cat"}}));
  EncodedWord e = encode_word("cat", v.chars);
  REQUIRE(e.encoder_ids.size() == 4);
  CHECK(e.encoder_ids[0] == CharVocab::kAgg);
  CHECK(e.encoder_ids[1] == v.chars.id(U'c'));
  REQUIRE(e.decoder_ids.size() == 4);
  CHECK(e.decoder_ids.back() == CharVocab::kEow);
  CHECK(e.decoder_ids[0] == e.encoder_ids[1]);  // same char ids, shifted

  // decoding the decoder target reproduces the word plus EOW
  std::string round;
  for (size_t i = 0; i + 1 < e.decoder_ids.size(); ++i)
    round += static_cast<char>(v.chars.at(e.decoder_ids[i]));
  CHECK(round == "cat");

  CHECK_THROWS_AS(encode_word("", v.chars), DataError);

  EncodedWord u = encode_word("caß", v.chars);
  CHECK(u.encoder_ids[3] == CharVocab::kUnk);  // unseen character
}

TEST_CASE("load_corpus parses lines, skips blanks, rejects bad UTF-8") {
  TempFile good("An example .\n\nsecond line here\nthird one .\n");
  Corpus c = load_corpus(good.path);
  REQUIRE(c.size() == 3);
  CHECK(c.sentence(0) == std::vector<std::string>{"An", "example", "."});
  CHECK(c.token_count() == 9);

  TempFile bad(std::string("ok line\nbad \xFF token\n"));
  CHECK_THROWS_AS(load_corpus(bad.path), DataError);
  CHECK_THROWS_AS(load_corpus("does_not_exist_anywhere.txt"), DataError);
}

TEST_CASE("make_batches: sizes, seeds, alignment, padding invariants") {
  std::vector<std::vector<std::string>> sentences;
  for (int i = 0; i < 10; ++i)
    sentences.push_back({"alpha", "beta" + std::to_string(i), "gamma"});
  CorpusPair pair;
  pair.clean = corpus_from(sentences, "train");
  pair.noised = pair.clean;
  Vocabs v = build_vocabs(pair.clean);

  auto batches = make_batches(pair, v, 4, 7);
  REQUIRE(batches.size() == 3);
  CHECK(batches[0].size == 4);
  CHECK(batches[1].size == 4);
  CHECK(batches[2].size == 2);

  auto again = make_batches(pair, v, 4, 7);
  for (size_t b = 0; b < batches.size(); ++b)
    CHECK(batches[b].sentence_ids == again[b].sentence_ids);
  auto other = make_batches(pair, v, 4, 8);
  bool same_order = true;
  for (size_t b = 0; b < batches.size() && same_order; ++b)
    same_order = batches[b].sentence_ids == other[b].sentence_ids;
  CHECK_FALSE(same_order);

  // every slot is either a full (word, chars, target) or full padding
  for (const auto& batch : batches) {
    for (int64_t row = 0; row < batch.size * batch.max_words; ++row) {
      const bool real = batch.word_mask[static_cast<size_t>(row)] > 0.0;
      const int32_t target = batch.word_targets[static_cast<size_t>(row)];
      const double agg_mask = batch.char_mask[static_cast<size_t>(row * batch.max_chars)];
      if (real) {
        CHECK(target != WordVocab::kPad);
        CHECK(agg_mask == 1.0);
        CHECK(batch.char_ids[static_cast<size_t>(row * batch.max_chars)] == CharVocab::kAgg);
      } else {
        CHECK(target == WordVocab::kPad);
        CHECK(agg_mask == 0.0);
      }
    }
  }

  // misaligned pair is rejected
  CorpusPair broken;
  broken.clean = pair.clean;
  broken.noised = corpus_from({{"one", "two"}});
  CHECK_THROWS_AS(make_batches(broken, v, 4, 0), DataError);

  // OOV clean word maps to the UNK-WORD target
  CorpusPair oov;
  oov.clean = corpus_from({{"alpha", "newword"}});
  oov.noised = oov.clean;
  auto ob = make_batches(oov, v, 4, 0, false);
  CHECK(ob[0].word_targets[1] == WordVocab::kUnk);
}

TEST_CASE("vocabulary never leaks words from other splits") {
  Corpus train = corpus_from({{"seen", "words", "only"}}, "train");
  Corpus test = corpus_from({{"unseen", "tokens"}}, "test");
  Vocabs v = build_vocabs(train);
  std::set<std::string> vocab_words(v.words.words().begin(), v.words.words().end());
  for (const auto& s : test.sentences())
    for (const auto& w : s) CHECK(vocab_words.count(w) == 0);
}
