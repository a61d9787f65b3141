// SPDX-License-Identifier: Apache-2.0
#include "mude/noise.hpp"

#include <algorithm>
#include <map>

#include "mude/unicode.hpp"

namespace mude {

namespace {

const std::map<std::string, NoiseKind>& kind_names() {
  static const std::map<std::string, NoiseKind> names = {
      {"per", NoiseKind::PER},     {"del", NoiseKind::DEL},     {"ins", NoiseKind::INS},
      {"sub", NoiseKind::SUB},     {"w-per", NoiseKind::W_PER}, {"w-del", NoiseKind::W_DEL},
      {"w-ins", NoiseKind::W_INS}, {"w-sub", NoiseKind::W_SUB}, {"w-all", NoiseKind::W_ALL}};
  return names;
}

bool whole_word(NoiseKind kind) {
  return kind == NoiseKind::W_PER || kind == NoiseKind::W_DEL || kind == NoiseKind::W_INS ||
         kind == NoiseKind::W_SUB;
}

// Fisher-Yates over [begin, end).
void shuffle_range(std::u32string& s, size_t begin, size_t end, Rng& rng) {
  for (size_t i = end - begin; i > 1; --i) {
    size_t j = static_cast<size_t>(rng.next_below(i));
    std::swap(s[begin + i - 1], s[begin + j]);
  }
}

std::u32string noise_codepoints(const std::u32string& w, NoiseKind kind, Rng& rng,
                                const NoiseConfig& cfg) {
  const size_t m = w.size();
  std::u32string out = w;
  switch (kind) {
    case NoiseKind::PER:
      if (m >= 4) shuffle_range(out, 1, m - 1, rng);
      break;
    case NoiseKind::W_PER:
      if (m >= 2) shuffle_range(out, 0, m, rng);
      break;
    case NoiseKind::DEL: {
      if (m < 3) break;  // no internal character to delete
      const size_t pos = 1 + static_cast<size_t>(rng.next_below(m - 2));
      out.erase(pos, 1);
      break;
    }
    case NoiseKind::W_DEL: {
      const size_t pos = static_cast<size_t>(rng.next_below(m));
      out.erase(pos, 1);
      break;
    }
    case NoiseKind::INS: {
      if (m < 2) break;
      const size_t pos = 1 + static_cast<size_t>(rng.next_below(m - 1));
      const char32_t c = cfg.alphabet[static_cast<size_t>(rng.next_below(cfg.alphabet.size()))];
      out.insert(out.begin() + static_cast<long>(pos), c);
      break;
    }
    case NoiseKind::W_INS: {
      const size_t pos = static_cast<size_t>(rng.next_below(m + 1));
      const char32_t c = cfg.alphabet[static_cast<size_t>(rng.next_below(cfg.alphabet.size()))];
      out.insert(out.begin() + static_cast<long>(pos), c);
      break;
    }
    case NoiseKind::SUB:
    case NoiseKind::W_SUB: {
      const bool internal = kind == NoiseKind::SUB;
      if (internal && m < 3) break;
      const size_t lo = internal ? 1 : 0;
      const size_t span = internal ? m - 2 : m;
      const size_t pos = lo + static_cast<size_t>(rng.next_below(span));
      // The replacement must differ from the original (Hamming distance
      // exactly 1). Bail out if the alphabet offers no alternative.
      bool replaceable = false;
      for (char32_t c : cfg.alphabet)
        if (c != out[pos]) {
          replaceable = true;
          break;
        }
      if (!replaceable) break;
      char32_t c;
      do {
        c = cfg.alphabet[static_cast<size_t>(rng.next_below(cfg.alphabet.size()))];
      } while (c == out[pos]);
      out[pos] = c;
      break;
    }
    case NoiseKind::W_ALL:
      throw ConfigError("W-ALL applies to corpora, not single words");
  }
  return out;
}

bool is_one_deletion(const std::u32string& clean, const std::u32string& noised) {
  if (noised.size() + 1 != clean.size()) return false;
  size_t i = 0, j = 0;
  int skips = 0;
  while (i < clean.size() && j < noised.size()) {
    if (clean[i] == noised[j]) {
      ++i;
      ++j;
    } else {
      ++i;
      if (++skips > 1) return false;
    }
  }
  return true;  // any remaining tail of clean is the single skipped char
}

size_t hamming_positions(const std::u32string& a, const std::u32string& b, size_t* first_diff) {
  size_t count = 0;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) {
      if (count == 0 && first_diff) *first_diff = i;
      ++count;
    }
  return count;
}

bool same_multiset(std::u32string a, std::u32string b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace

std::string noise_kind_name(NoiseKind kind) {
  for (const auto& [name, k] : kind_names())
    if (k == kind) return name;
  throw ConfigError("unknown noise kind");
}

NoiseKind parse_noise_kind(const std::string& name) {
  auto it = kind_names().find(name);
  if (it == kind_names().end()) throw ConfigError("unknown noise kind: " + name);
  return it->second;
}

const std::vector<NoiseKind>& all_noise_kinds() {
  static const std::vector<NoiseKind> kinds = {
      NoiseKind::PER, NoiseKind::W_PER, NoiseKind::DEL, NoiseKind::W_DEL,
      NoiseKind::INS, NoiseKind::W_INS, NoiseKind::SUB, NoiseKind::W_SUB};
  return kinds;
}

std::string noise_word(const std::string& word, NoiseKind kind, Rng& rng,
                       const NoiseConfig& cfg) {
  if (kind == NoiseKind::W_ALL) throw ConfigError("W-ALL applies to corpora, not single words");
  if (cfg.alphabet.empty()) throw ConfigError("noise alphabet must be nonempty");
  if (cfg.min_len < 2) throw ConfigError("noise min_len must be >= 2");
  const std::u32string chars = utf8_decode(word);
  if (static_cast<int64_t>(chars.size()) < cfg.min_len) return word;
  return utf8_encode(noise_codepoints(chars, kind, rng, cfg));
}

CorpusPair noise_corpus(const Corpus& corpus, NoiseKind kind, const NoiseConfig& cfg) {
  std::vector<std::vector<std::string>> noised;
  noised.reserve(corpus.size());
  for (size_t si = 0; si < corpus.size(); ++si) {
    Rng rng = Rng::stream(cfg.seed, si);
    NoiseKind sentence_kind = kind;
    if (kind == NoiseKind::W_ALL) {
      static const NoiseKind mix[4] = {NoiseKind::W_PER, NoiseKind::W_DEL, NoiseKind::W_INS,
                                       NoiseKind::W_SUB};
      sentence_kind = mix[rng.next_below(4)];
    }
    std::vector<std::string> sentence;
    sentence.reserve(corpus.sentence(si).size());
    for (const std::string& word : corpus.sentence(si))
      sentence.push_back(noise_word(word, sentence_kind, rng, cfg));
    noised.push_back(std::move(sentence));
  }
  CorpusPair pair;
  pair.noised = Corpus(std::move(noised), corpus.split());
  pair.clean = corpus;
  pair.noise_kind = noise_kind_name(kind);
  pair.seed = cfg.seed;
  return pair;
}

bool verify_noise(const std::string& noised, const std::string& clean, NoiseKind kind,
                  const NoiseConfig& cfg) {
  if (kind == NoiseKind::W_ALL) throw ConfigError("verify_noise: W-ALL is not a word-level kind");
  const std::u32string n = utf8_decode(noised);
  const std::u32string c = utf8_decode(clean);
  const size_t m = c.size();
  if (static_cast<int64_t>(m) < cfg.min_len) return n == c;
  switch (kind) {
    case NoiseKind::PER:
      return n.size() == m && n.front() == c.front() && n.back() == c.back() &&
             same_multiset(n.substr(1, m - 2), c.substr(1, m - 2));
    case NoiseKind::W_PER:
      return same_multiset(n, c);
    case NoiseKind::DEL:
      if (m < 3) return n == c;
      return n.size() == m - 1 && n.front() == c.front() && n.back() == c.back() &&
             is_one_deletion(c, n);
    case NoiseKind::W_DEL:
      return is_one_deletion(c, n);
    case NoiseKind::INS:
      if (m < 2) return n == c;
      return n.size() == m + 1 && n.front() == c.front() && n.back() == c.back() &&
             is_one_deletion(n, c);
    case NoiseKind::W_INS:
      return is_one_deletion(n, c);
    case NoiseKind::SUB: {
      if (m < 3) return n == c;
      if (n.size() != m) return false;
      size_t pos = 0;
      return hamming_positions(n, c, &pos) == 1 && pos >= 1 && pos + 1 < m;
    }
    case NoiseKind::W_SUB:
      return n.size() == m && hamming_positions(n, c, nullptr) == 1;
    case NoiseKind::W_ALL:
      break;
  }
  throw ConfigError("verify_noise: unknown kind");
}

}  // namespace mude
