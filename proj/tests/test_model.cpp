// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "grad_check.hpp"
#include "mude/model.hpp"

using namespace mude;
using mude::testing::check_gradients;

namespace {

ModelConfig tiny_model_config() {
  ModelConfig c;
  c.encoder.d_c = 8;
  c.encoder.heads = 2;
  c.encoder.layers = 1;
  c.encoder.d_ff = 16;
  c.d_h = 6;
  return c;
}

CorpusPair tiny_pair() {
  CorpusPair pair;
  pair.clean = Corpus({{"salt", "near", "the", "trap"}, {"form", "from", "slat"}}, "train");
  pair.noised = Corpus({{"slat", "naer", "the", "tarp"}, {"form", "form", "salt"}}, "train");
  return pair;
}

}  // namespace

TEST_CASE("bag_encode structure") {
  Vocabs v = build_vocabs(Corpus({{"word", "whole", "a"}}, "train"));
  const auto c = static_cast<size_t>(v.chars.size());

  std::vector<double> bag = bag_encode("word", v.chars);
  REQUIRE(bag.size() == 3 * c);
  CHECK(bag[static_cast<size_t>(v.chars.id(U'w'))] == 1.0);
  CHECK(bag[c + static_cast<size_t>(v.chars.id(U'd'))] == 1.0);
  CHECK(bag[2 * c + static_cast<size_t>(v.chars.id(U'o'))] == 1.0);
  CHECK(bag[2 * c + static_cast<size_t>(v.chars.id(U'r'))] == 1.0);
  double first_sum = 0, last_sum = 0, internal_sum = 0;
  for (size_t i = 0; i < c; ++i) {
    first_sum += bag[i];
    last_sum += bag[c + i];
    internal_sum += bag[2 * c + i];
  }
  CHECK(first_sum == 1.0);
  CHECK(last_sum == 1.0);
  CHECK(internal_sum == 2.0);  // m - 2

  std::vector<double> single = bag_encode("a", v.chars);
  CHECK(single[static_cast<size_t>(v.chars.id(U'a'))] == 1.0);
  CHECK(single[c + static_cast<size_t>(v.chars.id(U'a'))] == 1.0);
  double internal = 0;
  for (size_t i = 0; i < c; ++i) internal += single[2 * c + i];
  CHECK(internal == 0.0);

  // internal permutation with fixed endpoints leaves the bag identical;
  // deletion does not
  CHECK(bag_encode("wlohe", v.chars) == bag_encode("whole", v.chars));
  CHECK(bag_encode("whle", v.chars) != bag_encode("whole", v.chars));
  CHECK(bag_encode("whoie", v.chars) != bag_encode("whole", v.chars));
  CHECK_THROWS_AS(bag_encode("", v.chars), DataError);
}

TEST_CASE("scrnn_forward shape and permutation blindness") {
  Rng rng(3);
  Vocabs v = build_vocabs(Corpus({{"whole", "word", "some"}}, "train"));
  const int64_t c3 = 3 * v.chars.size();
  const int64_t d_c = 6, d_h = 4, vocab = v.words.size();
  Tensor proj = mude::testing::random_param({d_c, c3}, rng);
  ContextParams ctx = ContextParams::init(d_h, d_c, vocab, rng);
  Tape tape;

  auto sentence_probs = [&](const std::vector<std::string>& words) {
    Tensor bags({static_cast<int64_t>(words.size()), c3});
    for (size_t w = 0; w < words.size(); ++w) {
      const auto bag = bag_encode(words[w], v.chars);
      std::copy(bag.begin(), bag.end(), bags.data() + static_cast<int64_t>(w) * c3);
    }
    return scrnn_forward(tape, bags, proj, ctx);
  };

  Tensor probs = sentence_probs({"whole", "word"});
  REQUIRE(probs.shape() == Shape{2, vocab});

  // PER-style noise leaves every bag, and hence every prediction, identical
  Tensor noised = sentence_probs({"wlohe", "wrod"});
  for (int64_t i = 0; i < probs.size(); ++i) CHECK(probs.data()[i] == noised.data()[i]);

  // gradient through projection and context
  check_gradients({&proj, &ctx.ww, &ctx.fwd.wi, &ctx.bwd.uo}, [&](Tape& t) {
    Tensor bags({2, c3});
    const auto b0 = bag_encode("whole", v.chars);
    const auto b1 = bag_encode("word", v.chars);
    std::copy(b0.begin(), b0.end(), bags.data());
    std::copy(b1.begin(), b1.end(), bags.data() + c3);
    Tensor p = scrnn_forward(t, bags, proj, ctx);
    return prediction_loss(t, p, {2, 3}, {1, 1});
  });
}

TEST_CASE("model losses and predictions are well-formed for both kinds") {
  CorpusPair pair = tiny_pair();
  Vocabs v = build_vocabs(pair.clean);
  const auto batches = make_batches(pair, v, 2, 0, false);
  REQUIRE(batches.size() == 1);

  for (const std::string kind : {"mude", "scrnn"}) {
    auto model = make_model(kind, tiny_model_config(), v.chars.size(), v.words.size(), 7);
    Tape tape;
    Losses losses = model->losses(tape, batches[0]);
    CHECK(std::isfinite(losses.pred.item()));
    CHECK(losses.pred.item() > 0.0);
    CHECK(losses.has_seq == (kind == "mude"));
    if (losses.has_seq) CHECK(losses.seq.item() > 0.0);

    const auto preds = model->predict(batches[0]);
    CHECK(preds.size() == static_cast<size_t>(batches[0].size * batches[0].max_words));

    ParamSet params;
    model->collect_params(params);
    CHECK(params.size() > 0);
  }
}

TEST_CASE("checkpoint parameter names follow the documented scheme") {
  Vocabs v = build_vocabs(tiny_pair().clean);
  auto mude_model = make_model("mude", tiny_model_config(), v.chars.size(), v.words.size(), 7);
  ParamSet mp;
  mude_model->collect_params(mp);
  std::vector<std::string> names;
  for (auto& it : mp.items()) names.push_back(it.name);
  auto has = [&](const std::string& n) {
    return std::find(names.begin(), names.end(), n) != names.end();
  };
  CHECK(has("encoder.E"));
  CHECK(has("encoder.layer0.head0.Q"));
  CHECK(has("encoder.layer0.head1.V"));
  CHECK(has("encoder.layer0.W1"));
  CHECK(has("decoder.gru.Wz"));
  CHECK(has("decoder.gru.bh"));
  CHECK(has("decoder.Wp"));
  CHECK(has("context.fwd.Wi"));
  CHECK(has("context.bwd.Ug"));
  CHECK(has("context.Ww"));

  auto scrnn_model = make_model("scrnn", tiny_model_config(), v.chars.size(), v.words.size(), 7);
  ParamSet sp;
  scrnn_model->collect_params(sp);
  bool all_baseline = true;
  for (auto& it : sp.items()) all_baseline = all_baseline && it.name.rfind("baseline.", 0) == 0;
  CHECK(all_baseline);
}

TEST_CASE("full-stack gradient check through the mude model") {
  CorpusPair pair = tiny_pair();
  Vocabs v = build_vocabs(pair.clean);
  const auto batches = make_batches(pair, v, 2, 0, false);
  MudeModel model(tiny_model_config(), v.chars.size(), v.words.size(), 11);

  ParamSet params;
  model.collect_params(params);
  // spot-check one tensor from every module of the stack
  std::vector<Tensor*> sample;
  for (auto& it : params.items())
    if (it.name == "encoder.E" || it.name == "encoder.layer0.head0.Q" ||
        it.name == "encoder.layer0.W2" || it.name == "decoder.gru.Uh" ||
        it.name == "decoder.Wp" || it.name == "context.fwd.Wg" || it.name == "context.Ww")
      sample.push_back(it.tensor);
  REQUIRE(sample.size() == 7);

  check_gradients(sample, [&](Tape& t) {
    Losses l = model.losses(t, batches[0]);
    return add(t, l.pred, scale(t, l.seq, 0.5));
  });
}
