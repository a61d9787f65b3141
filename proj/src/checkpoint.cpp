// SPDX-License-Identifier: Apache-2.0
#include "mude/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>

namespace mude {

namespace {

void write_doubles(std::ofstream& out, const double* data, size_t count) {
  for (size_t i = 0; i < count; ++i) {
    const auto bits = std::bit_cast<uint64_t>(data[i]);
    unsigned char bytes[8];
    for (int b = 0; b < 8; ++b) bytes[b] = static_cast<unsigned char>((bits >> (8 * b)) & 0xFF);
    out.write(reinterpret_cast<const char*>(bytes), 8);
  }
}

void read_doubles(std::ifstream& in, double* data, size_t count) {
  for (size_t i = 0; i < count; ++i) {
    unsigned char bytes[8];
    in.read(reinterpret_cast<char*>(bytes), 8);
    if (!in) throw DataError("checkpoint blob truncated");
    uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<uint64_t>(bytes[b]) << (8 * b);
    data[i] = std::bit_cast<double>(bits);
  }
}

}  // namespace

void save_checkpoint(const std::string& dir, WordModel& model, const Vocabs& vocabs,
                     const nlohmann::json& train_meta, const std::vector<ExtraBlob>& extras) {
  std::filesystem::create_directories(dir);
  ParamSet params;
  model.collect_params(params);

  nlohmann::json manifest;
  manifest["format"] = 1;
  manifest["model"] = model.kind();
  manifest["config"] = model.config().to_json();
  manifest["train"] = train_meta;
  std::vector<int64_t> chars;
  for (char32_t c : vocabs.chars.chars()) chars.push_back(static_cast<int64_t>(c));
  manifest["vocab"] = {{"chars", chars}, {"words", vocabs.words.words()}};

  std::ofstream blob(dir + "/params.bin", std::ios::binary);
  if (!blob) throw DataError("cannot write checkpoint blob in " + dir);
  int64_t offset = 0;
  nlohmann::json plist = nlohmann::json::array();
  for (auto& it : params.items()) {
    const Tensor& t = *it.tensor;
    plist.push_back({{"name", it.name},
                     {"shape", t.shape()},
                     {"offset", offset},
                     {"count", t.size()}});
    write_doubles(blob, t.data(), static_cast<size_t>(t.size()));
    offset += t.size() * 8;
  }
  manifest["params"] = plist;
  nlohmann::json elist = nlohmann::json::array();
  for (const ExtraBlob& e : extras) {
    elist.push_back({{"name", e.name},
                     {"offset", offset},
                     {"count", static_cast<int64_t>(e.data.size())}});
    write_doubles(blob, e.data.data(), e.data.size());
    offset += static_cast<int64_t>(e.data.size()) * 8;
  }
  manifest["extras"] = elist;
  blob.close();

  std::ofstream mf(dir + "/manifest.json", std::ios::binary);
  if (!mf) throw DataError("cannot write checkpoint manifest in " + dir);
  mf << manifest.dump(2) << '\n';
}

LoadedCheckpoint load_checkpoint(const std::string& dir, bool with_decoder) {
  std::ifstream mf(dir + "/manifest.json");
  if (!mf) throw ConfigError("no checkpoint manifest in " + dir);
  LoadedCheckpoint out;
  out.manifest = nlohmann::json::parse(mf);

  std::vector<char32_t> chars;
  for (const auto& c : out.manifest.at("vocab").at("chars"))
    chars.push_back(static_cast<char32_t>(c.get<int64_t>()));
  out.vocabs.chars = CharVocab(std::move(chars));
  out.vocabs.words = WordVocab(out.manifest.at("vocab").at("words").get<std::vector<std::string>>());

  const ModelConfig config = ModelConfig::from_json(out.manifest.at("config"));
  out.model = make_model(out.manifest.at("model").get<std::string>(), config,
                         out.vocabs.chars.size(), out.vocabs.words.size(), /*seed=*/0);

  std::map<std::string, std::pair<int64_t, int64_t>> entries;  // name -> (offset, count)
  for (const auto& p : out.manifest.at("params"))
    entries[p.at("name").get<std::string>()] = {p.at("offset").get<int64_t>(),
                                                p.at("count").get<int64_t>()};

  std::ifstream blob(dir + "/params.bin", std::ios::binary);
  if (!blob) throw ConfigError("no checkpoint blob in " + dir);
  ParamSet params;
  out.model->collect_params(params);
  for (auto& it : params.items()) {
    Tensor& t = *it.tensor;
    const bool is_decoder = it.name.rfind("decoder.", 0) == 0;
    if (is_decoder && !with_decoder) {
      std::fill(t.values().begin(), t.values().end(), 0.0);
      continue;
    }
    auto found = entries.find(it.name);
    if (found == entries.end())
      throw ConfigError("checkpoint is missing parameter " + it.name);
    if (found->second.second != t.size())
      throw ConfigError("checkpoint parameter " + it.name + " has wrong size");
    blob.seekg(found->second.first);
    read_doubles(blob, t.data(), static_cast<size_t>(t.size()));
  }

  if (out.manifest.contains("extras")) {
    for (const auto& e : out.manifest.at("extras")) {
      std::vector<double> data(static_cast<size_t>(e.at("count").get<int64_t>()));
      blob.seekg(e.at("offset").get<int64_t>());
      read_doubles(blob, data.data(), data.size());
      out.extras[e.at("name").get<std::string>()] = std::move(data);
    }
  }
  return out;
}

}  // namespace mude
