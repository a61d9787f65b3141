// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "mude/model.hpp"
#include "mude/noise.hpp"

namespace mude {

struct TrainConfig {
  double lr = 0.001;       // paper grid: {0.1, 0.01, 0.001, 0.0001}
  double beta0 = 1.0;      // paper grid: {1, 0.1, 0.001}
  double gamma = 0.8;      // per-epoch multiplicative beta decay; 1 = constant
  bool linear_beta = false;  // alternative: beta0 * (1 - epoch/epochs)
  int64_t epochs = 10;
  int64_t batch_size = 32;
  double clip_norm = 5.0;
  double rho = 0.9;
  double eps = 1e-8;
  uint64_t seed = 1;
  std::string model_kind = "mude";
  ModelConfig model;

  void validate() const;
  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j);
};

// beta0 * gamma^epoch (or the linear ramp when selected); monotone
// non-increasing in the epoch.
double beta_at_epoch(const TrainConfig& config, int64_t epoch);
double beta_at_epoch(double beta0, double gamma, int64_t epoch);

// L = L_pred + beta * L_seq2seq. seq may be null (baseline without decoder).
Tensor joint_loss(Tape& tape, const Tensor& pred, const Tensor* seq, double beta);

struct EpochStats {
  double pred_loss = 0.0;
  double seq2seq_loss = 0.0;
};

// One optimizer step per batch: forward, joint loss, backward, clip, update.
// Returns the epoch means of both loss components. Aborts with NumericError
// (including the batch index) on a non-finite loss.
EpochStats train_epoch(WordModel& model, const std::vector<SentenceBatch>& batches,
                       RmsProp& optimizer, ParamSet& params, double beta, double clip_norm);

struct FitResult {
  std::vector<std::string> metrics_lines;  // one JSON object per epoch
  int64_t best_epoch = -1;
  double best_val_accuracy = 0.0;
  int64_t epochs_run = 0;
  // End-of-run snapshots (parameter order of collect_params): the state a
  // resumed run continues from. The model itself is left at the best epoch.
  std::vector<std::vector<double>> final_params;
  std::vector<std::vector<double>> opt_state;
};

// Trains for config.epochs, evaluates validation word accuracy per epoch and
// leaves the best-accuracy parameters in the model. Deterministic: the
// shuffle of epoch e derives from (seed, e) alone, so a fixed (config, data)
// pair reproduces the metrics log byte for byte.
FitResult fit(WordModel& model, const CorpusPair& train, const CorpusPair& val,
              const Vocabs& vocabs, const TrainConfig& config, int64_t start_epoch = 0,
              RmsProp* optimizer = nullptr);

}  // namespace mude
