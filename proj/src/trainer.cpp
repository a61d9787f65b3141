// SPDX-License-Identifier: Apache-2.0
#include "mude/trainer.hpp"

#include <cmath>

#include "mude/evaluator.hpp"

namespace mude {

void TrainConfig::validate() const {
  if (lr <= 0.0) throw ConfigError("train config: lr must be > 0");
  if (gamma <= 0.0 || gamma > 1.0) throw ConfigError("train config: need 0 < gamma <= 1");
  if (beta0 < 0.0) throw ConfigError("train config: beta0 must be >= 0");
  if (epochs <= 0 || batch_size <= 0) throw ConfigError("train config: epochs/batch_size must be > 0");
  if (clip_norm <= 0.0) throw ConfigError("train config: clip_norm must be > 0");
  if (model_kind != "mude" && model_kind != "scrnn")
    throw ConfigError("train config: model must be mude or scrnn");
}

nlohmann::json TrainConfig::to_json() const {
  nlohmann::json j = {{"lr", lr},           {"beta0", beta0},
                      {"gamma", gamma},     {"linear_beta", linear_beta},
                      {"epochs", epochs},   {"batch_size", batch_size},
                      {"clip_norm", clip_norm}, {"rho", rho},
                      {"eps", eps},         {"seed", seed},
                      {"model_kind", model_kind}};
  j["model"] = model.to_json();
  return j;
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.lr = j.value("lr", c.lr);
  c.beta0 = j.value("beta0", c.beta0);
  c.gamma = j.value("gamma", c.gamma);
  c.linear_beta = j.value("linear_beta", c.linear_beta);
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.clip_norm = j.value("clip_norm", c.clip_norm);
  c.rho = j.value("rho", c.rho);
  c.eps = j.value("eps", c.eps);
  c.seed = j.value("seed", c.seed);
  c.model_kind = j.value("model_kind", c.model_kind);
  if (j.contains("model")) c.model = ModelConfig::from_json(j.at("model"));
  return c;
}

double beta_at_epoch(double beta0, double gamma, int64_t epoch) {
  if (epoch < 0) throw ConfigError("beta_at_epoch: epoch must be >= 0");
  return beta0 * std::pow(gamma, static_cast<double>(epoch));
}

double beta_at_epoch(const TrainConfig& config, int64_t epoch) {
  if (!config.linear_beta) return beta_at_epoch(config.beta0, config.gamma, epoch);
  if (epoch < 0) throw ConfigError("beta_at_epoch: epoch must be >= 0");
  const double frac =
      config.epochs > 1
          ? 1.0 - static_cast<double>(epoch) / static_cast<double>(config.epochs - 1)
          : 1.0;
  return config.beta0 * std::max(0.0, frac);
}

Tensor joint_loss(Tape& tape, const Tensor& pred, const Tensor* seq, double beta) {
  if (beta < 0.0) throw ConfigError("joint_loss: beta must be >= 0");
  if (!std::isfinite(pred.item()) || (seq && !std::isfinite(seq->item())))
    throw NumericError("joint_loss: non-finite loss component");
  if (!seq) return pred;
  return add(tape, pred, scale(tape, *seq, beta));
}

EpochStats train_epoch(WordModel& model, const std::vector<SentenceBatch>& batches,
                       RmsProp& optimizer, ParamSet& params, double beta, double clip_norm) {
  EpochStats stats;
  if (batches.empty()) throw DataError("train_epoch: no batches");
  Tape tape;
  for (size_t bi = 0; bi < batches.size(); ++bi) {
    tape.reset();
    params.zero_grad();
    Losses losses = model.losses(tape, batches[bi]);
    const double pred_v = losses.pred.item();
    const double seq_v = losses.has_seq ? losses.seq.item() : 0.0;
    if (!std::isfinite(pred_v) || !std::isfinite(seq_v))
      throw NumericError("train_epoch: non-finite loss at batch " + std::to_string(bi) +
                         " (pred=" + std::to_string(pred_v) + ", seq2seq=" + std::to_string(seq_v) +
                         ")");
    Tensor loss = joint_loss(tape, losses.pred, losses.has_seq ? &losses.seq : nullptr, beta);
    tape.backward(loss);
    clip_grad_norm(params, clip_norm);
    optimizer.step(params);
    stats.pred_loss += pred_v;
    stats.seq2seq_loss += seq_v;
  }
  stats.pred_loss /= static_cast<double>(batches.size());
  stats.seq2seq_loss /= static_cast<double>(batches.size());
  return stats;
}

namespace {

// Validation accuracy with the default conservative OOV rule.
double validation_accuracy(const WordModel& model, const Vocabs& vocabs, const CorpusPair& val) {
  return evaluate(model, vocabs, val, {}).accuracy;
}

}  // namespace

FitResult fit(WordModel& model, const CorpusPair& train, const CorpusPair& val,
              const Vocabs& vocabs, const TrainConfig& config, int64_t start_epoch,
              RmsProp* optimizer) {
  config.validate();
  if (train.noised.size() != train.clean.size() || val.noised.size() != val.clean.size())
    throw DataError("fit: corpus pairs misaligned");

  ParamSet params;
  model.collect_params(params);
  RmsProp local_opt(config.lr, config.rho, config.eps);
  RmsProp& opt = optimizer ? *optimizer : local_opt;

  FitResult result;
  std::vector<std::vector<double>> best_params;
  for (int64_t epoch = start_epoch; epoch < config.epochs; ++epoch) {
    const double beta = beta_at_epoch(config, epoch);
    // The epoch shuffle derives from (seed, epoch) alone, so a resumed run
    // replays the exact batch order an uninterrupted run would see.
    const uint64_t shuffle_seed = Rng::stream(config.seed, static_cast<uint64_t>(epoch)).next_u64();
    const auto batches = make_batches(train, vocabs, config.batch_size, shuffle_seed, true);
    const EpochStats stats = train_epoch(model, batches, opt, params, beta, config.clip_norm);
    const double val_acc = validation_accuracy(model, vocabs, val);
    const nlohmann::json line = {{"epoch", epoch},
                                 {"beta", beta},
                                 {"pred_loss", stats.pred_loss},
                                 {"seq2seq_loss", stats.seq2seq_loss},
                                 {"val_accuracy", val_acc}};
    result.metrics_lines.push_back(line.dump());
    if (result.best_epoch < 0 || val_acc > result.best_val_accuracy) {
      result.best_val_accuracy = val_acc;
      result.best_epoch = epoch;
      best_params.clear();
      for (auto& it : params.items()) best_params.push_back(it.tensor->values());
    }
    ++result.epochs_run;
  }

  for (auto& it : params.items()) result.final_params.push_back(it.tensor->values());
  result.opt_state = opt.state();
  if (!best_params.empty())
    for (size_t i = 0; i < params.size(); ++i) params.items()[i].tensor->values() = best_params[i];
  return result;
}

}  // namespace mude
