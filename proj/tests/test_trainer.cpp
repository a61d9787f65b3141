// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "mude/evaluator.hpp"
#include "mude/trainer.hpp"

using namespace mude;

namespace {

ModelConfig smoke_model_config() {
  ModelConfig c;
  c.encoder.d_c = 16;
  c.encoder.heads = 2;
  c.encoder.layers = 1;
  c.encoder.d_ff = 32;
  c.d_h = 12;
  return c;
}

// A small deterministic clean corpus with repeated structure.
Corpus smoke_corpus(int sentences) {
  const std::vector<std::string> nouns = {"river", "garden", "letter", "bridge", "candle"};
  const std::vector<std::string> verbs = {"opened", "carried", "watched", "mended"};
  std::vector<std::vector<std::string>> out;
  Rng rng(404);
  for (int i = 0; i < sentences; ++i) {
    const auto& n1 = nouns[rng.next_below(nouns.size())];
    const auto& v = verbs[rng.next_below(verbs.size())];
    const auto& n2 = nouns[rng.next_below(nouns.size())];
    out.push_back({"the", n1, v, "the", n2, "."});
  }
  return Corpus(out, "train");
}

}  // namespace

TEST_CASE("joint loss and beta schedule") {
  Tape tape;
  Tensor pred = Tensor::scalar(2.0);
  Tensor seq = Tensor::scalar(3.0);
  CHECK(joint_loss(tape, pred, &seq, 1.0).item() == doctest::Approx(5.0));
  CHECK(joint_loss(tape, pred, &seq, 0.0).item() == doctest::Approx(2.0));
  CHECK(joint_loss(tape, pred, nullptr, 1.0).item() == doctest::Approx(2.0));
  CHECK_THROWS_AS(joint_loss(tape, pred, &seq, -1.0), ConfigError);
  Tensor bad = Tensor::scalar(std::nan(""));
  CHECK_THROWS_AS(joint_loss(tape, pred, &bad, 1.0), NumericError);

  CHECK(beta_at_epoch(1.0, 0.8, 0) == doctest::Approx(1.0));
  CHECK(beta_at_epoch(1.0, 0.8, 2) == doctest::Approx(0.64));
  CHECK(beta_at_epoch(0.5, 1.0, 9) == doctest::Approx(0.5));  // gamma=1: constant
  CHECK_THROWS_AS(beta_at_epoch(1.0, 0.8, -1), ConfigError);

  // beta gradient scaling: d(joint)/d(seq) == beta
  Tensor seq_param = Tensor::scalar(3.0).set_requires_grad(true);
  Tape t2;
  Tensor j = joint_loss(t2, pred, &seq_param, 0.25);
  t2.backward(j);
  CHECK(seq_param.grad()[0] == doctest::Approx(0.25));
}

TEST_CASE("train config validation and JSON round trip") {
  TrainConfig c;
  c.validate();
  TrainConfig parsed = TrainConfig::from_json(c.to_json());
  CHECK(parsed.lr == c.lr);
  CHECK(parsed.epochs == c.epochs);
  CHECK(parsed.model.d_h == c.model.d_h);

  TrainConfig bad = c;
  bad.lr = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.gamma = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.model_kind = "other";
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("zero learning rate leaves parameters bit-identical") {
  Corpus clean = smoke_corpus(8);
  NoiseConfig ncfg;
  ncfg.seed = 5;
  CorpusPair pair = noise_corpus(clean, NoiseKind::PER, ncfg);
  Vocabs v = build_vocabs(clean);
  MudeModel model(smoke_model_config(), v.chars.size(), v.words.size(), 3);

  ParamSet params;
  model.collect_params(params);
  std::vector<std::vector<double>> before;
  for (auto& it : params.items()) before.push_back(it.tensor->values());

  const auto batches = make_batches(pair, v, 4, 0, false);
  RmsProp opt(0.0);
  train_epoch(model, batches, opt, params, 1.0, 5.0);
  for (size_t i = 0; i < params.size(); ++i)
    CHECK(params.items()[i].tensor->values() == before[i]);
}

TEST_CASE("untrained losses sit near the uniform baselines") {
  Corpus clean = smoke_corpus(16);
  NoiseConfig ncfg;
  ncfg.seed = 6;
  CorpusPair pair = noise_corpus(clean, NoiseKind::PER, ncfg);
  Vocabs v = build_vocabs(clean);
  MudeModel model(smoke_model_config(), v.chars.size(), v.words.size(), 3);
  const auto batches = make_batches(pair, v, 8, 0, false);
  Tape tape;
  Losses l = model.losses(tape, batches[0]);
  CHECK(l.pred.item() > 0.0);
  CHECK(l.seq.item() > 0.0);
  // near-uniform softmax at init: within 30% of ln V / ln C
  CHECK(l.pred.item() == doctest::Approx(std::log(static_cast<double>(v.words.size()))).epsilon(0.3));
  CHECK(l.seq.item() == doctest::Approx(std::log(static_cast<double>(v.chars.size()))).epsilon(0.3));
}

TEST_CASE("one small step reduces the batch loss across seeds") {
  Corpus clean = smoke_corpus(8);
  NoiseConfig ncfg;
  ncfg.seed = 7;
  CorpusPair pair = noise_corpus(clean, NoiseKind::PER, ncfg);
  Vocabs v = build_vocabs(clean);
  const auto batches = make_batches(pair, v, 8, 0, false);

  for (uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    MudeModel model(smoke_model_config(), v.chars.size(), v.words.size(), seed);
    ParamSet params;
    model.collect_params(params);
    Tape tape;
    Losses l0 = model.losses(tape, batches[0]);
    Tensor j0 = joint_loss(tape, l0.pred, &l0.seq, 1.0);
    const double before = j0.item();
    tape.backward(j0);
    clip_grad_norm(params, 5.0);
    RmsProp opt(1e-4);
    opt.step(params);

    Tape t2;
    t2.set_recording(false);
    Losses l1 = model.losses(t2, batches[0]);
    const double after = l1.pred.item() + l1.seq.item();
    CHECK(after < before);
  }
}

TEST_CASE("fit bookkeeping, determinism and resume") {
  Corpus clean = smoke_corpus(24);
  Corpus val_clean = smoke_corpus(8);
  NoiseConfig ncfg;
  ncfg.seed = 9;
  CorpusPair train_pair = noise_corpus(clean, NoiseKind::PER, ncfg);
  NoiseConfig vcfg;
  vcfg.seed = 10;
  CorpusPair val_pair = noise_corpus(val_clean, NoiseKind::PER, vcfg);
  Vocabs v = build_vocabs(clean);

  TrainConfig cfg;
  cfg.model = smoke_model_config();
  cfg.epochs = 4;
  cfg.batch_size = 8;
  cfg.lr = 0.003;
  cfg.seed = 21;

  MudeModel model(cfg.model, v.chars.size(), v.words.size(), cfg.seed);
  FitResult r1 = fit(model, train_pair, val_pair, v, cfg);
  REQUIRE(r1.metrics_lines.size() == 4);
  CHECK(r1.best_epoch >= 0);
  CHECK(r1.epochs_run == 4);

  // best accuracy equals the max over the log; beta column non-increasing
  double max_acc = -1.0, prev_beta = 1e9;
  for (const auto& line : r1.metrics_lines) {
    const auto j = nlohmann::json::parse(line);
    max_acc = std::max(max_acc, j.at("val_accuracy").get<double>());
    const double beta = j.at("beta").get<double>();
    CHECK(beta <= prev_beta);
    prev_beta = beta;
  }
  CHECK(r1.best_val_accuracy == doctest::Approx(max_acc));

  // identical config and seed: identical metrics byte for byte
  MudeModel model2(cfg.model, v.chars.size(), v.words.size(), cfg.seed);
  FitResult r2 = fit(model2, train_pair, val_pair, v, cfg);
  CHECK(r1.metrics_lines == r2.metrics_lines);

  // interrupted + resumed run replays the uninterrupted one exactly
  TrainConfig half = cfg;
  half.epochs = 2;
  MudeModel model3(cfg.model, v.chars.size(), v.words.size(), cfg.seed);
  FitResult first_half = fit(model3, train_pair, val_pair, v, half);
  ParamSet p3;
  model3.collect_params(p3);
  for (size_t i = 0; i < p3.size(); ++i)
    p3.items()[i].tensor->values() = first_half.final_params[i];
  RmsProp resumed_opt(cfg.lr, cfg.rho, cfg.eps);
  resumed_opt.state() = first_half.opt_state;
  FitResult second_half = fit(model3, train_pair, val_pair, v, cfg, /*start_epoch=*/2,
                              &resumed_opt);
  std::vector<std::string> joined = first_half.metrics_lines;
  joined.insert(joined.end(), second_half.metrics_lines.begin(),
                second_half.metrics_lines.end());
  CHECK(joined == r1.metrics_lines);
  CHECK(second_half.final_params == r1.final_params);
}

TEST_CASE("training memorizes a tiny corpus (overfit sanity)") {
  Corpus clean = smoke_corpus(12);
  NoiseConfig ncfg;
  ncfg.seed = 11;
  CorpusPair pair = noise_corpus(clean, NoiseKind::PER, ncfg);
  Vocabs v = build_vocabs(clean);

  TrainConfig cfg;
  cfg.model = smoke_model_config();
  cfg.epochs = 40;
  cfg.batch_size = 4;
  cfg.lr = 0.005;
  cfg.seed = 2;

  MudeModel model(cfg.model, v.chars.size(), v.words.size(), cfg.seed);
  fit(model, pair, pair, v, cfg);
  const double acc = evaluate(model, v, pair).accuracy;
  CHECK(acc >= 95.0);
}
