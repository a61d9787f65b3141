// SPDX-License-Identifier: Apache-2.0
//
// Operator CLI: corpus noising, training, evaluation, the cross-noise
// generalization matrix, and line-oriented sentence correction.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "mude/checkpoint.hpp"
#include "mude/evaluator.hpp"
#include "mude/kernels.hpp"
#include "mude/trainer.hpp"
#include "mude/unicode.hpp"

namespace {

using namespace mude;

struct NoiseArgs {
  std::string in, kind, out_prefix;
  uint64_t seed = 0;
  int64_t min_len = 4;
  std::string alphabet = "abcdefghijklmnopqrstuvwxyz";
};

struct TrainArgs {
  std::string model = "mude";
  std::string noise;
  std::string config_path;
  std::string out;
  std::string train_path = "data/train.txt";
  std::string val_path = "data/valid.txt";
};

int run_noise(const NoiseArgs& a) {
  Corpus clean = load_corpus(a.in);
  NoiseConfig cfg;
  cfg.seed = a.seed;
  cfg.min_len = a.min_len;
  cfg.alphabet = utf8_decode(a.alphabet);
  CorpusPair pair = noise_corpus(clean, parse_noise_kind(a.kind), cfg);
  save_pair(pair, a.out_prefix);
  std::cout << "wrote " << a.out_prefix << ".noised.txt, .clean.txt, .meta.json (" << pair.clean.size()
            << " sentences)\n";
  return 0;
}

// Flags override config-file values; the file may also carry the data paths.
TrainConfig merge_train_config(const TrainArgs& args, CLI::App* cmd, TrainArgs& paths) {
  TrainConfig cfg;
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) throw ConfigError("cannot open config file: " + args.config_path);
    const nlohmann::json j = nlohmann::json::parse(in);
    cfg = TrainConfig::from_json(j);
    paths.train_path = j.value("train_path", paths.train_path);
    paths.val_path = j.value("val_path", paths.val_path);
    if (j.contains("noise") && paths.noise.empty()) paths.noise = j.at("noise").get<std::string>();
  }
  const auto set_if = [&](const char* flag, auto& slot) {
    if (cmd->count(flag)) slot = cmd->get_option(flag)->as<std::decay_t<decltype(slot)>>();
  };
  set_if("--lr", cfg.lr);
  set_if("--beta0", cfg.beta0);
  set_if("--gamma", cfg.gamma);
  set_if("--epochs", cfg.epochs);
  set_if("--batch-size", cfg.batch_size);
  set_if("--clip-norm", cfg.clip_norm);
  set_if("--seed", cfg.seed);
  set_if("--d-c", cfg.model.encoder.d_c);
  set_if("--heads", cfg.model.encoder.heads);
  set_if("--enc-layers", cfg.model.encoder.layers);
  set_if("--d-ff", cfg.model.encoder.d_ff);
  set_if("--d-h", cfg.model.d_h);
  if (cmd->count("--residual")) cfg.model.encoder.residual = true;
  if (cmd->count("--layer-norm")) cfg.model.encoder.layer_norm = true;
  if (cmd->count("--feed-prev-char")) cfg.model.feed_prev_char = true;
  if (cmd->count("--literal-seq-loss")) cfg.model.literal_seq_loss = true;
  if (cmd->count("--linear-beta")) cfg.linear_beta = true;
  cfg.model_kind = args.model;
  return cfg;
}

int run_train(const TrainArgs& args_in, CLI::App* cmd) {
  TrainArgs args = args_in;
  TrainConfig cfg = merge_train_config(args_in, cmd, args);
  if (args.noise.empty()) throw ConfigError("train: --noise is required (or a config-file value)");
  cfg.validate();
  const NoiseKind kind = parse_noise_kind(args.noise);

  Corpus train_clean = load_corpus(args.train_path, "train");
  Corpus val_clean = load_corpus(args.val_path, "valid");
  Vocabs vocabs = build_vocabs(train_clean);

  NoiseConfig train_noise;
  train_noise.seed = Rng::stream(cfg.seed, 1001).next_u64();
  NoiseConfig val_noise;
  val_noise.seed = Rng::stream(cfg.seed, 1002).next_u64();
  CorpusPair train_pair = noise_corpus(train_clean, kind, train_noise);
  CorpusPair val_pair = noise_corpus(val_clean, kind, val_noise);

  auto model = make_model(cfg.model_kind, cfg.model, vocabs.chars.size(), vocabs.words.size(),
                          cfg.seed);
  FitResult result = fit(*model, train_pair, val_pair, vocabs, cfg);

  std::filesystem::create_directories(args.out);
  std::ofstream metrics(args.out + "/metrics.jsonl", std::ios::binary);
  for (const auto& line : result.metrics_lines) metrics << line << '\n';

  nlohmann::json train_meta = {{"noise", args.noise},
                               {"epoch", result.best_epoch},
                               {"epochs_run", result.epochs_run},
                               {"best_val_accuracy", result.best_val_accuracy},
                               {"config", cfg.to_json()}};
  std::vector<ExtraBlob> extras;
  ParamSet params;
  model->collect_params(params);
  for (size_t i = 0; i < params.size(); ++i) {
    extras.push_back({"resume." + params.items()[i].name, result.final_params[i]});
    extras.push_back({"opt." + params.items()[i].name, result.opt_state[i]});
  }
  save_checkpoint(args.out, *model, vocabs, train_meta, extras);
  std::cout << "best epoch " << result.best_epoch << ", val accuracy " << result.best_val_accuracy
            << "; checkpoint in " << args.out << "\n";
  return 0;
}

int run_eval(const std::string& ckpt, const std::string& test_prefix, const EvalOptions& opts) {
  LoadedCheckpoint loaded = load_checkpoint(ckpt, /*with_decoder=*/false);
  CorpusPair test = load_pair(test_prefix);
  EvalReport report = evaluate(*loaded.model, loaded.vocabs, test, opts);
  std::cout << report.table();
  std::cout << report.to_json().dump() << "\n";
  return 0;
}

int run_matrix(const std::string& ckpt_dir, const std::string& test_dir, const EvalOptions& opts) {
  std::map<std::string, LoadedCheckpoint> models;
  std::map<std::string, CorpusPair> corpora;
  for (NoiseKind k : all_noise_kinds()) {
    const std::string kind = noise_kind_name(k);
    models.emplace(kind, load_checkpoint(ckpt_dir + "/" + kind, /*with_decoder=*/false));
    corpora.emplace(kind, load_pair(test_dir + "/" + kind));
  }
  const Vocabs& vocabs = models.begin()->second.vocabs;
  for (const auto& [kind, ckpt] : models)
    if (ckpt.vocabs.words.words() != vocabs.words.words())
      throw ConfigError("matrix: checkpoint " + kind + " was trained with a different vocabulary");

  GeneralizationMatrix m = cross_noise_matrix(
      [&](const std::string& kind) { return models.at(kind).model.get(); },
      [&](const std::string& kind) -> const CorpusPair& { return corpora.at(kind); }, vocabs,
      opts);
  std::cout << m.table();
  std::cout << m.to_json().dump() << "\n";
  return 0;
}

int run_correct(const std::string& ckpt, bool decoder_diagnostics) {
  LoadedCheckpoint loaded = load_checkpoint(ckpt, /*with_decoder=*/decoder_diagnostics);
  std::string line;
  while (std::getline(std::cin, line)) {
    std::cout << correct_sentence(*loaded.model, loaded.vocabs, line) << "\n";
    if (decoder_diagnostics) {
      auto* model = dynamic_cast<MudeModel*>(loaded.model.get());
      if (!model) throw ConfigError("correct: decoder diagnostics need a mude checkpoint");
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) {
        Tape tape;
        tape.set_recording(false);
        const EncodedWord enc = encode_word(tok, loaded.vocabs.chars);
        const EncoderOut out = encode_word(tape, model->encoder(), enc.encoder_ids);
        const auto ids = decode_greedy(model->decoder(), out.word_vecs, 24,
                                       &model->encoder().embedding);
        std::string greedy;
        for (int32_t id : ids)
          greedy += id >= CharVocab::kReserved ? utf8_encode(loaded.vocabs.chars.at(id)) : "?";
        std::cerr << tok << " -> " << greedy << "\n";
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robust word recognition toolkit (character attention + word BiLSTM)"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "kernel threads (default: MUDE_THREADS or hardware)");

  NoiseArgs noise_args;
  auto* noise_cmd = app.add_subcommand("noise", "noise a clean corpus into an aligned pair");
  noise_cmd->add_option("--in", noise_args.in, "clean corpus file")->required();
  noise_cmd->add_option("--kind", noise_args.kind, "per|del|ins|sub|w-per|w-del|w-ins|w-sub|w-all")
      ->required();
  noise_cmd->add_option("--seed", noise_args.seed, "noise seed");
  noise_cmd->add_option("--out-prefix", noise_args.out_prefix, "output prefix")->required();
  noise_cmd->add_option("--min-len", noise_args.min_len, "shortest alterable word length");
  noise_cmd->add_option("--alphabet", noise_args.alphabet, "insert/substitute alphabet");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "train a model on freshly noised data");
  train_cmd->add_option("--model", train_args.model, "mude|scrnn");
  train_cmd->add_option("--noise", train_args.noise, "training noise kind");
  train_cmd->add_option("--config", train_args.config_path, "JSON config file");
  train_cmd->add_option("--out", train_args.out, "checkpoint directory")->required();
  train_cmd->add_option("--train", train_args.train_path, "clean training corpus");
  train_cmd->add_option("--val", train_args.val_path, "clean validation corpus");
  for (const char* opt : {"--lr", "--beta0", "--gamma", "--clip-norm"})
    train_cmd->add_option(opt)->check(CLI::Number);
  for (const char* opt : {"--epochs", "--batch-size", "--seed", "--d-c", "--heads", "--enc-layers",
                          "--d-ff", "--d-h"})
    train_cmd->add_option(opt)->check(CLI::Number);
  for (const char* flag :
       {"--residual", "--layer-norm", "--feed-prev-char", "--literal-seq-loss", "--linear-beta"})
    train_cmd->add_flag(flag);

  std::string eval_ckpt, eval_test;
  EvalOptions eval_opts;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on a noised test pair");
  eval_cmd->add_option("--ckpt", eval_ckpt, "checkpoint directory")->required();
  eval_cmd->add_option("--test", eval_test, "test pair prefix")->required();
  eval_cmd->add_flag("--noised-only", eval_opts.noised_only, "count altered tokens only");
  eval_cmd->add_flag("--count-unk-as-correct", eval_opts.count_unk_as_correct,
                     "count gold-OOV positions as correct when UNK is predicted");

  std::string matrix_ckpt_dir, matrix_test_dir;
  EvalOptions matrix_opts;
  auto* matrix_cmd = app.add_subcommand("matrix", "8x8 train-noise x test-noise accuracy table");
  matrix_cmd->add_option("--ckpt-dir", matrix_ckpt_dir, "directory of per-kind checkpoints")
      ->required();
  matrix_cmd->add_option("--test-dir", matrix_test_dir, "directory of per-kind test pairs")
      ->required();
  matrix_cmd->add_flag("--noised-only", matrix_opts.noised_only, "count altered tokens only");

  std::string correct_ckpt;
  bool decoder_diag = false;
  auto* correct_cmd = app.add_subcommand("correct", "correct stdin lines to stdout");
  correct_cmd->add_option("--ckpt", correct_ckpt, "checkpoint directory")->required();
  correct_cmd->add_flag("--with-decoder-diagnostics", decoder_diag,
                        "also load the decoder and print greedy decodes to stderr");

  try {
    app.parse(argc, argv);
    if (threads > 0) mude::kernels::set_threads(threads);
    if (noise_cmd->parsed()) return run_noise(noise_args);
    if (train_cmd->parsed()) return run_train(train_args, train_cmd);
    if (eval_cmd->parsed()) return run_eval(eval_ckpt, eval_test, eval_opts);
    if (matrix_cmd->parsed()) return run_matrix(matrix_ckpt_dir, matrix_test_dir, matrix_opts);
    if (correct_cmd->parsed()) return run_correct(correct_ckpt, decoder_diag);
    return 1;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);  // prints usage; 0 for --help
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ShapeError& e) {
    std::cerr << "shape error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
