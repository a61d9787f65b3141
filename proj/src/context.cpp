// SPDX-License-Identifier: Apache-2.0
#include "mude/context.hpp"

namespace mude {

LstmParams LstmParams::init(int64_t d_h, int64_t d_in, Rng& rng) {
  LstmParams p;
  auto gate = [&](Tensor& w, Tensor& u, Tensor& b) {
    w = init_param({d_h, d_in}, rng);
    u = init_param({d_h, d_h}, rng);
    b = init_param({d_h}, rng, d_h);
  };
  gate(p.wi, p.ui, p.bi);
  gate(p.wf, p.uf, p.bf);
  gate(p.wo, p.uo, p.bo);
  gate(p.wg, p.ug, p.bg);
  return p;
}

void LstmParams::collect(const std::string& prefix, ParamSet& out) {
  out.add(prefix + "Wi", wi);
  out.add(prefix + "Ui", ui);
  out.add(prefix + "bi", bi);
  out.add(prefix + "Wf", wf);
  out.add(prefix + "Uf", uf);
  out.add(prefix + "bf", bf);
  out.add(prefix + "Wo", wo);
  out.add(prefix + "Uo", uo);
  out.add(prefix + "bo", bo);
  out.add(prefix + "Wg", wg);
  out.add(prefix + "Ug", ug);
  out.add(prefix + "bg", bg);
}

ContextParams ContextParams::init(int64_t d_h, int64_t d_in, int64_t word_vocab, Rng& rng) {
  if (d_h <= 0 || d_in <= 0 || word_vocab <= 0) throw ConfigError("context init: bad dimensions");
  ContextParams p;
  p.fwd = LstmParams::init(d_h, d_in, rng);
  p.bwd = LstmParams::init(d_h, d_in, rng);
  p.ww = init_param({word_vocab, 2 * d_h}, rng);
  return p;
}

void ContextParams::collect(const std::string& prefix, ParamSet& out) {
  fwd.collect(prefix + "fwd.", out);
  bwd.collect(prefix + "bwd.", out);
  out.add(prefix + "Ww", ww);
}

std::pair<Tensor, Tensor> lstm_cell(Tape& tape, const LstmParams& params, const Tensor& h_prev,
                                    const Tensor& c_prev, const Tensor& x) {
  auto gate_pre = [&](const Tensor& w, const Tensor& u, const Tensor& b) {
    return add_bias(tape,
                    add(tape, matmul(tape, x, transpose(tape, w)),
                        matmul(tape, h_prev, transpose(tape, u))),
                    b);
  };
  Tensor i = sigmoid(tape, gate_pre(params.wi, params.ui, params.bi));
  Tensor f = sigmoid(tape, gate_pre(params.wf, params.uf, params.bf));
  Tensor o = sigmoid(tape, gate_pre(params.wo, params.uo, params.bo));
  Tensor g = tanh(tape, gate_pre(params.wg, params.ug, params.bg));
  Tensor c = add(tape, mul(tape, f, c_prev), mul(tape, i, g));
  Tensor h = mul(tape, o, tanh(tape, c));
  return {h, c};
}

namespace {

// Runs one direction with frozen-state carry across padded slots: a padded
// step leaves (h, c) untouched, so batched and unbatched runs agree bitwise.
std::vector<Tensor> run_direction(Tape& tape, const LstmParams& params, const Tensor& seq,
                                  const std::vector<double>& word_mask, bool backward) {
  const int64_t b = seq.dim(0), n = seq.dim(1);
  const int64_t d_h = params.ui.dim(0);
  Tensor h({b, d_h});
  Tensor c({b, d_h});
  std::vector<Tensor> outputs(static_cast<size_t>(n));
  for (int64_t step = 0; step < n; ++step) {
    const int64_t t = backward ? n - 1 - step : step;
    Tensor x = select_step(tape, seq, t);
    auto [h_new, c_new] = lstm_cell(tape, params, h, c, x);
    std::vector<double> m(static_cast<size_t>(b)), inv(static_cast<size_t>(b));
    for (int64_t i = 0; i < b; ++i) {
      m[static_cast<size_t>(i)] = word_mask[static_cast<size_t>(i * n + t)];
      inv[static_cast<size_t>(i)] = 1.0 - m[static_cast<size_t>(i)];
    }
    Tensor keep({b}, std::move(m));
    Tensor carry({b}, std::move(inv));
    h = add(tape, scale_rows(tape, h_new, keep), scale_rows(tape, h, carry));
    c = add(tape, scale_rows(tape, c_new, keep), scale_rows(tape, c, carry));
    outputs[static_cast<size_t>(t)] = h;
  }
  return outputs;
}

}  // namespace

Tensor bilstm(Tape& tape, const ContextParams& params, const Tensor& seq,
              const std::vector<double>& word_mask) {
  if (seq.ndim() != 3) throw ShapeError("bilstm: expected [B x N x d]");
  const int64_t b = seq.dim(0), n = seq.dim(1);
  if (static_cast<int64_t>(word_mask.size()) != b * n)
    throw ShapeError("bilstm: word mask size mismatch");
  std::vector<Tensor> fwd = run_direction(tape, params.fwd, seq, word_mask, false);
  std::vector<Tensor> bwd = run_direction(tape, params.bwd, seq, word_mask, true);
  Tensor hf = stack_steps(tape, fwd);
  Tensor hb = stack_steps(tape, bwd);
  const int64_t d2 = 2 * params.hidden();
  Tensor out = concat_cols(tape, {hf, hb}).reshaped({b * n, d2});
  // Padded slots carry the frozen state; zero them in the output.
  Tensor mask_col({b * n}, std::vector<double>(word_mask));
  return scale_rows(tape, out, mask_col).reshaped({b, n, d2});
}

Tensor predict_words(Tape& tape, const Tensor& reps, const Tensor& ww) {
  const int64_t d = reps.shape().back();
  if (d != ww.dim(1)) throw ShapeError("predict_words: rep width does not match W^w");
  const int64_t rows = reps.size() / d;
  Tensor flat = reps.reshaped({rows, d});
  Tensor logits = matmul(tape, flat, transpose(tape, ww));
  Shape out_shape = reps.shape();
  out_shape.back() = ww.dim(0);
  return softmax(tape, logits).reshaped(std::move(out_shape));
}

Tensor prediction_loss(Tape& tape, const Tensor& probs, const std::vector<int32_t>& targets,
                       const std::vector<double>& mask, bool literal) {
  const int64_t v = probs.shape().back();
  const int64_t rows = probs.size() / v;
  if (static_cast<int64_t>(targets.size()) != rows || mask.size() != targets.size())
    throw ShapeError("prediction_loss: targets/mask must match probability rows");
  double live = 0.0;
  for (double m : mask) live += m;
  if (live <= 0.0) throw DataError("prediction_loss: all positions masked");
  std::vector<int64_t> tgt(targets.begin(), targets.end());
  std::vector<double> weights(mask.size());
  for (size_t i = 0; i < mask.size(); ++i) weights[i] = mask[i] / live;
  Tensor flat = probs.reshaped({rows, v});
  return literal ? neg_prob_loss(tape, flat, std::move(tgt), std::move(weights))
                 : nll_loss(tape, flat, std::move(tgt), std::move(weights));
}

}  // namespace mude
