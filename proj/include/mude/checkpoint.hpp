// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <string>

#include "mude/model.hpp"

namespace mude {

// Checkpoint layout: `<dir>/manifest.json` describes the model kind, config,
// vocabulary and the name/shape/offset of every parameter; `<dir>/params.bin`
// is the flat little-endian f64 blob. Round-trips are bit-exact.

struct ExtraBlob {
  std::string name;
  std::vector<double> data;
};

void save_checkpoint(const std::string& dir, WordModel& model, const Vocabs& vocabs,
                     const nlohmann::json& train_meta, const std::vector<ExtraBlob>& extras = {});

struct LoadedCheckpoint {
  std::unique_ptr<WordModel> model;
  Vocabs vocabs;
  nlohmann::json manifest;
  std::map<std::string, std::vector<double>> extras;
};

// with_decoder=false skips `decoder.*` blobs and zeroes those parameters;
// the inference path never reads them (test-stage contract).
LoadedCheckpoint load_checkpoint(const std::string& dir, bool with_decoder = true);

}  // namespace mude
