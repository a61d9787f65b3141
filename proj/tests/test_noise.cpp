// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include "doctest.h"
#include "mude/noise.hpp"

using namespace mude;

TEST_CASE("noise kind names round-trip") {
  for (NoiseKind k : all_noise_kinds()) CHECK(parse_noise_kind(noise_kind_name(k)) == k);
  CHECK(parse_noise_kind("w-all") == NoiseKind::W_ALL);
  CHECK_THROWS_AS(parse_noise_kind("typo"), ConfigError);
  CHECK(all_noise_kinds().size() == 8);
}

TEST_CASE("noise_word basics") {
  NoiseConfig cfg;
  Rng rng(5);

  // short words never change, any kind
  for (NoiseKind k : all_noise_kinds()) {
    CHECK(noise_word("an", k, rng, cfg) == "an");
    CHECK(noise_word("the", k, rng, cfg) == "the");
  }

  // internal permutation keeps endpoints and the internal multiset
  for (int trial = 0; trial < 50; ++trial) {
    std::string out = noise_word("noised", NoiseKind::PER, rng, cfg);
    REQUIRE(out.size() == 6);
    CHECK(out.front() == 'n');
    CHECK(out.back() == 'd');
    std::string inner = out.substr(1, 4);
    std::sort(inner.begin(), inner.end());
    CHECK(inner == "eios");
    CHECK(verify_noise(out, "noised", NoiseKind::PER, cfg));
  }

  // deletion shortens by one and preserves endpoints
  for (int trial = 0; trial < 50; ++trial) {
    std::string out = noise_word("example", NoiseKind::DEL, rng, cfg);
    REQUIRE(out.size() == 6);
    CHECK(out.front() == 'e');
    CHECK(out.back() == 'e');
    CHECK(verify_noise(out, "example", NoiseKind::DEL, cfg));
  }

  // fixed seed, fixed output
  Rng a(99), b(99);
  CHECK(noise_word("deterministic", NoiseKind::W_SUB, a, cfg) ==
        noise_word("deterministic", NoiseKind::W_SUB, b, cfg));

  CHECK_THROWS_AS(noise_word("word", NoiseKind::W_ALL, rng, cfg), ConfigError);
}

TEST_CASE("verify_noise pins the structural relations") {
  NoiseConfig cfg;
  CHECK(verify_noise("nsieod", "noised", NoiseKind::PER, cfg));
  CHECK_FALSE(verify_noise("dsieon", "noised", NoiseKind::PER, cfg));   // endpoints moved
  CHECK_FALSE(verify_noise("nsieood", "noised", NoiseKind::PER, cfg));  // wrong length
  CHECK(verify_noise("dsieon", "noised", NoiseKind::W_PER, cfg));

  CHECK_FALSE(verify_noise("noised", "noised", NoiseKind::DEL, cfg));  // must shrink
  CHECK(verify_noise("tet", "text", NoiseKind::DEL, cfg));
  CHECK(verify_noise("examle", "example", NoiseKind::DEL, cfg));
  CHECK_FALSE(verify_noise("xample", "example", NoiseKind::DEL, cfg));  // first char lost
  CHECK(verify_noise("xample", "example", NoiseKind::W_DEL, cfg));

  CHECK(verify_noise("edxample", "example", NoiseKind::INS, cfg));
  CHECK_FALSE(verify_noise("example", "example", NoiseKind::INS, cfg));
  CHECK_FALSE(verify_noise("examplex", "example", NoiseKind::INS, cfg));  // appended after last
  CHECK(verify_noise("examplex", "example", NoiseKind::W_INS, cfg));

  CHECK(verify_noise("npised", "noised", NoiseKind::SUB, cfg));
  CHECK_FALSE(verify_noise("noised", "noised", NoiseKind::SUB, cfg));  // zero differences
  CHECK_FALSE(verify_noise("xoised", "noised", NoiseKind::SUB, cfg));  // first char touched
  CHECK(verify_noise("xoised", "noised", NoiseKind::W_SUB, cfg));
  CHECK_FALSE(verify_noise("xpised", "noised", NoiseKind::W_SUB, cfg));  // two differences

  // short words must be untouched
  CHECK(verify_noise("an", "an", NoiseKind::PER, cfg));
  CHECK_FALSE(verify_noise("na", "an", NoiseKind::PER, cfg));
}

TEST_CASE("noise_corpus: per-token invariants, determinism, W-ALL mixing") {
  std::vector<std::vector<std::string>> sentences;
  const std::vector<std::string> words = {"the",      "quick",   "brown",  "fox",
                                          "jumped",   "over",    "lazy",   "dogs",
                                          "sleeping", "quietly", "behind", "fences"};
  Rng gen(123);
  for (int s = 0; s < 40; ++s) {
    std::vector<std::string> sent;
    for (int w = 0; w < 8; ++w)
      sent.push_back(words[static_cast<size_t>(gen.next_below(words.size()))]);
    sentences.push_back(sent);
  }
  Corpus clean(sentences, "test");

  NoiseConfig cfg;
  cfg.seed = 77;
  for (NoiseKind kind : all_noise_kinds()) {
    CorpusPair pair = noise_corpus(clean, kind, cfg);
    REQUIRE(pair.noised.size() == clean.size());
    for (size_t s = 0; s < clean.size(); ++s) {
      REQUIRE(pair.noised.sentence(s).size() == clean.sentence(s).size());
      for (size_t w = 0; w < clean.sentence(s).size(); ++w)
        CHECK(verify_noise(pair.noised.sentence(s)[w], clean.sentence(s)[w], kind, cfg));
    }
    CorpusPair rerun = noise_corpus(clean, kind, cfg);
    CHECK(rerun.noised.sentences() == pair.noised.sentences());
  }

  // W-ALL: reproducible, and each sentence consistent with one W-* kind
  CorpusPair wall = noise_corpus(clean, NoiseKind::W_ALL, cfg);
  CorpusPair wall2 = noise_corpus(clean, NoiseKind::W_ALL, cfg);
  CHECK(wall.noised.sentences() == wall2.noised.sentences());
  int kinds_seen[4] = {0, 0, 0, 0};
  const NoiseKind mix[4] = {NoiseKind::W_PER, NoiseKind::W_DEL, NoiseKind::W_INS,
                            NoiseKind::W_SUB};
  for (size_t s = 0; s < clean.size(); ++s) {
    bool matched = false;
    for (int k = 0; k < 4 && !matched; ++k) {
      bool all_ok = true;
      for (size_t w = 0; w < clean.sentence(s).size() && all_ok; ++w)
        all_ok = verify_noise(wall.noised.sentence(s)[w], clean.sentence(s)[w], mix[k], cfg);
      if (all_ok) {
        matched = true;
        ++kinds_seen[k];
      }
    }
    CHECK(matched);
  }
  // with 40 sentences every mixture component should appear
  for (int k = 0; k < 4; ++k) CHECK(kinds_seen[k] > 0);

  // corpora of only short words pass through unchanged
  Corpus shorts({{"a", "an", "the"}, {"to", "of", "it"}}, "test");
  CorpusPair same = noise_corpus(shorts, NoiseKind::W_ALL, cfg);
  CHECK(same.noised.sentences() == shorts.sentences());
}

TEST_CASE("length deltas match the kind") {
  NoiseConfig cfg;
  cfg.seed = 3;
  Corpus clean({{"testing", "words", "currently"}}, "");
  auto delta = [&](NoiseKind k) {
    CorpusPair p = noise_corpus(clean, k, cfg);
    std::vector<int64_t> out;
    for (size_t w = 0; w < 3; ++w)
      out.push_back(static_cast<int64_t>(p.noised.sentence(0)[w].size()) -
                    static_cast<int64_t>(clean.sentence(0)[w].size()));
    return out;
  };
  CHECK(delta(NoiseKind::PER) == std::vector<int64_t>{0, 0, 0});
  CHECK(delta(NoiseKind::SUB) == std::vector<int64_t>{0, 0, 0});
  CHECK(delta(NoiseKind::DEL) == std::vector<int64_t>{-1, -1, -1});
  CHECK(delta(NoiseKind::INS) == std::vector<int64_t>{1, 1, 1});
  CHECK(delta(NoiseKind::W_DEL) == std::vector<int64_t>{-1, -1, -1});
  CHECK(delta(NoiseKind::W_INS) == std::vector<int64_t>{1, 1, 1});
}
