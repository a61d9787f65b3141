// SPDX-License-Identifier: Apache-2.0
#include "mude/ops.hpp"

#include <cmath>
#include <cstring>

#include "mude/kernels.hpp"

namespace mude {

namespace {

void check_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape())
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_str(a.shape()) + " vs " +
                     shape_str(b.shape()));
}

int64_t last_dim(const Tensor& t) { return t.shape().back(); }

int64_t lead_rows(const Tensor& t) { return t.size() / t.shape().back(); }

// Elementwise unary op with pointwise derivative dy/dx = dfn(y, x).
template <typename Fwd, typename Bwd>
Tensor unary_op(Tape& tape, const char* kind, const Tensor& x, Fwd fwd, Bwd bwd) {
  Tensor y(x.shape());
  const double* xp = x.data();
  double* yp = y.data();
  const int64_t n = x.size();
  for (int64_t i = 0; i < n; ++i) yp[i] = fwd(xp[i]);
  if (tape.wants({&x})) {
    tape.record(kind, {&x}, y, [x, y, bwd]() mutable {
      const double* gy = y.grad();
      double* gx = x.grad();
      const double* xp = x.data();
      const double* yp = y.data();
      const int64_t n = x.size();
      for (int64_t i = 0; i < n; ++i) gx[i] += gy[i] * bwd(yp[i], xp[i]);
    });
  }
  return y;
}

}  // namespace

Tensor add(Tape& tape, const Tensor& a, const Tensor& b) {
  check_same_shape("add", a, b);
  Tensor y(a.shape());
  const int64_t n = a.size();
  const double *ap = a.data(), *bp = b.data();
  double* yp = y.data();
  for (int64_t i = 0; i < n; ++i) yp[i] = ap[i] + bp[i];
  if (tape.wants({&a, &b})) {
    tape.record("add", {&a, &b}, y, [a, b, y]() mutable {
      const double* gy = y.grad();
      const int64_t n = y.size();
      if (a.requires_grad()) {
        double* ga = a.grad();
        for (int64_t i = 0; i < n; ++i) ga[i] += gy[i];
      }
      if (b.requires_grad()) {
        double* gb = b.grad();
        for (int64_t i = 0; i < n; ++i) gb[i] += gy[i];
      }
    });
  }
  return y;
}

Tensor sub(Tape& tape, const Tensor& a, const Tensor& b) {
  check_same_shape("sub", a, b);
  Tensor y(a.shape());
  const int64_t n = a.size();
  const double *ap = a.data(), *bp = b.data();
  double* yp = y.data();
  for (int64_t i = 0; i < n; ++i) yp[i] = ap[i] - bp[i];
  if (tape.wants({&a, &b})) {
    tape.record("sub", {&a, &b}, y, [a, b, y]() mutable {
      const double* gy = y.grad();
      const int64_t n = y.size();
      if (a.requires_grad()) {
        double* ga = a.grad();
        for (int64_t i = 0; i < n; ++i) ga[i] += gy[i];
      }
      if (b.requires_grad()) {
        double* gb = b.grad();
        for (int64_t i = 0; i < n; ++i) gb[i] -= gy[i];
      }
    });
  }
  return y;
}

Tensor mul(Tape& tape, const Tensor& a, const Tensor& b) {
  check_same_shape("mul", a, b);
  Tensor y(a.shape());
  const int64_t n = a.size();
  const double *ap = a.data(), *bp = b.data();
  double* yp = y.data();
  for (int64_t i = 0; i < n; ++i) yp[i] = ap[i] * bp[i];
  if (tape.wants({&a, &b})) {
    tape.record("mul", {&a, &b}, y, [a, b, y]() mutable {
      const double* gy = y.grad();
      const int64_t n = y.size();
      if (a.requires_grad()) {
        double* ga = a.grad();
        const double* bp = b.data();
        for (int64_t i = 0; i < n; ++i) ga[i] += gy[i] * bp[i];
      }
      if (b.requires_grad()) {
        double* gb = b.grad();
        const double* ap = a.data();
        for (int64_t i = 0; i < n; ++i) gb[i] += gy[i] * ap[i];
      }
    });
  }
  return y;
}

Tensor scale(Tape& tape, const Tensor& a, double c) {
  Tensor y(a.shape());
  const int64_t n = a.size();
  const double* ap = a.data();
  double* yp = y.data();
  for (int64_t i = 0; i < n; ++i) yp[i] = ap[i] * c;
  if (tape.wants({&a})) {
    tape.record("scale", {&a}, y, [a, y, c]() mutable {
      const double* gy = y.grad();
      double* ga = a.grad();
      const int64_t n = y.size();
      for (int64_t i = 0; i < n; ++i) ga[i] += gy[i] * c;
    });
  }
  return y;
}

Tensor add_scalar(Tape& tape, const Tensor& a, double c) {
  Tensor y(a.shape());
  const int64_t n = a.size();
  const double* ap = a.data();
  double* yp = y.data();
  for (int64_t i = 0; i < n; ++i) yp[i] = ap[i] + c;
  if (tape.wants({&a})) {
    tape.record("add_scalar", {&a}, y, [a, y]() mutable {
      const double* gy = y.grad();
      double* ga = a.grad();
      const int64_t n = y.size();
      for (int64_t i = 0; i < n; ++i) ga[i] += gy[i];
    });
  }
  return y;
}

Tensor add_bias(Tape& tape, const Tensor& x, const Tensor& bias) {
  if (bias.ndim() != 1 || last_dim(x) != bias.size())
    throw ShapeError("add_bias: bias " + shape_str(bias.shape()) + " does not match " +
                     shape_str(x.shape()));
  Tensor y(x.shape());
  const int64_t rows = lead_rows(x), d = last_dim(x);
  const double *xp = x.data(), *bp = bias.data();
  double* yp = y.data();
  for (int64_t r = 0; r < rows; ++r)
    for (int64_t j = 0; j < d; ++j) yp[r * d + j] = xp[r * d + j] + bp[j];
  if (tape.wants({&x, &bias})) {
    tape.record("add_bias", {&x, &bias}, y, [x, bias, y, rows, d]() mutable {
      const double* gy = y.grad();
      if (x.requires_grad()) {
        double* gx = x.grad();
        const int64_t n = x.size();
        for (int64_t i = 0; i < n; ++i) gx[i] += gy[i];
      }
      if (bias.requires_grad()) {
        double* gb = bias.grad();
        for (int64_t r = 0; r < rows; ++r)
          for (int64_t j = 0; j < d; ++j) gb[j] += gy[r * d + j];
      }
    });
  }
  return y;
}

Tensor scale_rows(Tape& tape, const Tensor& x, const Tensor& s) {
  if (x.ndim() != 2 || s.ndim() != 1 || x.dim(0) != s.size())
    throw ShapeError("scale_rows: incompatible " + shape_str(x.shape()) + " and " +
                     shape_str(s.shape()));
  const int64_t rows = x.dim(0), d = x.dim(1);
  Tensor y(x.shape());
  const double *xp = x.data(), *sp = s.data();
  double* yp = y.data();
  for (int64_t r = 0; r < rows; ++r)
    for (int64_t j = 0; j < d; ++j) yp[r * d + j] = xp[r * d + j] * sp[r];
  if (tape.wants({&x, &s})) {
    tape.record("scale_rows", {&x, &s}, y, [x, s, y, rows, d]() mutable {
      const double* gy = y.grad();
      if (x.requires_grad()) {
        double* gx = x.grad();
        const double* sp = s.data();
        for (int64_t r = 0; r < rows; ++r)
          for (int64_t j = 0; j < d; ++j) gx[r * d + j] += gy[r * d + j] * sp[r];
      }
      if (s.requires_grad()) {
        double* gs = s.grad();
        const double* xp = x.data();
        for (int64_t r = 0; r < rows; ++r) {
          double acc = 0.0;
          for (int64_t j = 0; j < d; ++j) acc += gy[r * d + j] * xp[r * d + j];
          gs[r] += acc;
        }
      }
    });
  }
  return y;
}

Tensor relu(Tape& tape, const Tensor& x) {
  return unary_op(
      tape, "relu", x, [](double v) { return v > 0.0 ? v : 0.0; },
      [](double, double xv) { return xv > 0.0 ? 1.0 : 0.0; });
}

Tensor sigmoid(Tape& tape, const Tensor& x) {
  return unary_op(
      tape, "sigmoid", x,
      [](double v) { return v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v)); },
      [](double yv, double) { return yv * (1.0 - yv); });
}

Tensor tanh(Tape& tape, const Tensor& x) {
  return unary_op(
      tape, "tanh", x, [](double v) { return std::tanh(v); },
      [](double yv, double) { return 1.0 - yv * yv; });
}

Tensor matmul(Tape& tape, const Tensor& a, const Tensor& b) {
  if (a.ndim() != 2 || b.ndim() != 2)
    throw ShapeError("matmul: expected 2-d operands, got " + shape_str(a.shape()) + " and " +
                     shape_str(b.shape()));
  if (a.dim(1) != b.dim(0))
    throw ShapeError("matmul: inner dimensions disagree, " + shape_str(a.shape()) + " x " +
                     shape_str(b.shape()));
  const int64_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  Tensor y({m, n});
  kernels::matmul(a.data(), b.data(), y.data(), m, k, n, false);
  if (tape.wants({&a, &b})) {
    tape.record("matmul", {&a, &b}, y, [a, b, y, m, k, n]() mutable {
      const double* gy = y.grad();
      if (a.requires_grad()) {
        // dA += dY * B^T
        std::vector<double> bt(static_cast<size_t>(k * n));
        kernels::transpose(b.data(), bt.data(), k, n);
        kernels::matmul(gy, bt.data(), a.grad(), m, n, k, true);
      }
      if (b.requires_grad()) {
        // dB += A^T * dY
        std::vector<double> at(static_cast<size_t>(m * k));
        kernels::transpose(a.data(), at.data(), m, k);
        kernels::matmul(at.data(), gy, b.grad(), k, m, n, true);
      }
    });
  }
  return y;
}

Tensor bmm(Tape& tape, const Tensor& a, const Tensor& b) {
  if (a.ndim() != 3 || b.ndim() != 3 || a.dim(0) != b.dim(0) || a.dim(2) != b.dim(1))
    throw ShapeError("bmm: incompatible " + shape_str(a.shape()) + " and " +
                     shape_str(b.shape()));
  const int64_t bs = a.dim(0), m = a.dim(1), k = a.dim(2), n = b.dim(2);
  Tensor y({bs, m, n});
  kernels::bmm(a.data(), b.data(), y.data(), bs, m, k, n, false);
  if (tape.wants({&a, &b})) {
    tape.record("bmm", {&a, &b}, y, [a, b, y, bs, m, k, n]() mutable {
      const double* gy = y.grad();
      if (a.requires_grad()) {
        std::vector<double> bt(static_cast<size_t>(bs * k * n));
        for (int64_t i = 0; i < bs; ++i)
          kernels::transpose(b.data() + i * k * n, bt.data() + i * n * k, k, n);
        kernels::bmm(gy, bt.data(), a.grad(), bs, m, n, k, true);
      }
      if (b.requires_grad()) {
        std::vector<double> at(static_cast<size_t>(bs * m * k));
        for (int64_t i = 0; i < bs; ++i)
          kernels::transpose(a.data() + i * m * k, at.data() + i * k * m, m, k);
        kernels::bmm(at.data(), gy, b.grad(), bs, k, m, n, true);
      }
    });
  }
  return y;
}

Tensor transpose(Tape& tape, const Tensor& x) {
  if (x.ndim() < 2) throw ShapeError("transpose: needs at least 2 axes");
  Shape out_shape = x.shape();
  std::swap(out_shape[out_shape.size() - 1], out_shape[out_shape.size() - 2]);
  const int64_t m = x.dim(x.ndim() - 2), n = x.dim(x.ndim() - 1);
  const int64_t batch = x.size() / (m * n);
  Tensor y(out_shape);
  for (int64_t i = 0; i < batch; ++i)
    kernels::transpose(x.data() + i * m * n, y.data() + i * m * n, m, n);
  if (tape.wants({&x})) {
    tape.record("transpose", {&x}, y, [x, y, batch, m, n]() mutable {
      double* gx = x.grad();
      const double* gy = y.grad();
      for (int64_t i = 0; i < batch; ++i) {
        const double* g = gy + i * m * n;
        double* o = gx + i * m * n;
        for (int64_t r = 0; r < n; ++r)
          for (int64_t c = 0; c < m; ++c) o[c * n + r] += g[r * m + c];
      }
    });
  }
  return y;
}

Tensor softmax(Tape& tape, const Tensor& x) {
  const int64_t cols = last_dim(x), rows = lead_rows(x);
  const double* xp = x.data();
  for (int64_t i = 0; i < x.size(); ++i)
    if (std::isnan(xp[i])) throw NumericError("softmax: NaN in input logits");
  Tensor y(x.shape());
  kernels::softmax_rows(xp, y.data(), rows, cols);
  if (tape.wants({&x})) {
    tape.record("softmax", {&x}, y, [x, y, rows, cols]() mutable {
      double* gx = x.grad();
      const double* gy = y.grad();
      const double* yp = y.data();
      for (int64_t r = 0; r < rows; ++r) {
        const double* yr = yp + r * cols;
        const double* gr = gy + r * cols;
        double dot = 0.0;
        for (int64_t j = 0; j < cols; ++j) dot += gr[j] * yr[j];
        double* gxr = gx + r * cols;
        for (int64_t j = 0; j < cols; ++j) gxr[j] += yr[j] * (gr[j] - dot);
      }
    });
  }
  return y;
}

Tensor layer_norm(Tape& tape, const Tensor& x, double eps) {
  const int64_t cols = last_dim(x), rows = lead_rows(x);
  Tensor y(x.shape());
  std::vector<double> inv_std(static_cast<size_t>(rows));
  const double* xp = x.data();
  double* yp = y.data();
  for (int64_t r = 0; r < rows; ++r) {
    const double* xr = xp + r * cols;
    double mean = 0.0;
    for (int64_t j = 0; j < cols; ++j) mean += xr[j];
    mean /= static_cast<double>(cols);
    double var = 0.0;
    for (int64_t j = 0; j < cols; ++j) var += (xr[j] - mean) * (xr[j] - mean);
    var /= static_cast<double>(cols);
    const double inv = 1.0 / std::sqrt(var + eps);
    inv_std[static_cast<size_t>(r)] = inv;
    double* yr = yp + r * cols;
    for (int64_t j = 0; j < cols; ++j) yr[j] = (xr[j] - mean) * inv;
  }
  if (tape.wants({&x})) {
    tape.record("layer_norm", {&x}, y, [x, y, inv_std = std::move(inv_std), rows, cols]() mutable {
      double* gx = x.grad();
      const double* gy = y.grad();
      const double* yp = y.data();
      for (int64_t r = 0; r < rows; ++r) {
        const double* yr = yp + r * cols;
        const double* gr = gy + r * cols;
        double mean_g = 0.0, mean_gy = 0.0;
        for (int64_t j = 0; j < cols; ++j) {
          mean_g += gr[j];
          mean_gy += gr[j] * yr[j];
        }
        mean_g /= static_cast<double>(cols);
        mean_gy /= static_cast<double>(cols);
        const double inv = inv_std[static_cast<size_t>(r)];
        double* gxr = gx + r * cols;
        for (int64_t j = 0; j < cols; ++j)
          gxr[j] += inv * (gr[j] - mean_g - yr[j] * mean_gy);
      }
    });
  }
  return y;
}

Tensor concat_cols(Tape& tape, const std::vector<Tensor>& parts) {
  if (parts.empty()) throw ShapeError("concat_cols: no parts");
  Shape lead = parts[0].shape();
  lead.pop_back();
  int64_t total = 0;
  for (const Tensor& p : parts) {
    Shape pl = p.shape();
    pl.pop_back();
    if (pl != lead) throw ShapeError("concat_cols: leading dims disagree");
    total += last_dim(p);
  }
  Shape out_shape = lead;
  out_shape.push_back(total);
  Tensor y(out_shape);
  const int64_t rows = lead_rows(y);
  double* yp = y.data();
  int64_t off = 0;
  for (const Tensor& p : parts) {
    const int64_t d = last_dim(p);
    const double* pp = p.data();
    for (int64_t r = 0; r < rows; ++r)
      std::memcpy(yp + r * total + off, pp + r * d, static_cast<size_t>(d) * sizeof(double));
    off += d;
  }
  bool want = false;
  for (const Tensor& p : parts)
    if (p.requires_grad()) want = true;
  if (tape.recording() && want) {
    std::vector<const Tensor*> ins;
    for (const Tensor& p : parts) ins.push_back(&p);
    // record() takes an initializer_list; register with the first input for
    // the id trail and keep the full list in the closure.
    tape.record("concat_cols", {ins[0]}, y, [parts, y, rows, total]() mutable {
      const double* gy = y.grad();
      int64_t off = 0;
      for (Tensor p : parts) {
        const int64_t d = last_dim(p);
        if (p.requires_grad()) {
          double* gp = p.grad();
          for (int64_t r = 0; r < rows; ++r)
            for (int64_t j = 0; j < d; ++j) gp[r * d + j] += gy[r * total + off + j];
        }
        off += d;
      }
    });
  }
  return y;
}

Tensor select_step(Tape& tape, const Tensor& x, int64_t t) {
  if (x.ndim() != 3) throw ShapeError("select_step: expected [b, n, d]");
  const int64_t b = x.dim(0), n = x.dim(1), d = x.dim(2);
  if (t < 0 || t >= n) throw ShapeError("select_step: index out of range");
  Tensor y({b, d});
  const double* xp = x.data();
  double* yp = y.data();
  for (int64_t i = 0; i < b; ++i)
    std::memcpy(yp + i * d, xp + (i * n + t) * d, static_cast<size_t>(d) * sizeof(double));
  if (tape.wants({&x})) {
    tape.record("select_step", {&x}, y, [x, y, b, n, d, t]() mutable {
      double* gx = x.grad();
      const double* gy = y.grad();
      for (int64_t i = 0; i < b; ++i)
        for (int64_t j = 0; j < d; ++j) gx[(i * n + t) * d + j] += gy[i * d + j];
    });
  }
  return y;
}

Tensor stack_steps(Tape& tape, const std::vector<Tensor>& steps) {
  if (steps.empty()) throw ShapeError("stack_steps: no steps");
  const int64_t b = steps[0].dim(0), d = steps[0].dim(1);
  const int64_t n = static_cast<int64_t>(steps.size());
  for (const Tensor& s : steps)
    if (s.ndim() != 2 || s.dim(0) != b || s.dim(1) != d)
      throw ShapeError("stack_steps: step shapes disagree");
  Tensor y({b, n, d});
  double* yp = y.data();
  for (int64_t t = 0; t < n; ++t) {
    const double* sp = steps[static_cast<size_t>(t)].data();
    for (int64_t i = 0; i < b; ++i)
      std::memcpy(yp + (i * n + t) * d, sp + i * d, static_cast<size_t>(d) * sizeof(double));
  }
  bool want = false;
  for (const Tensor& s : steps)
    if (s.requires_grad()) want = true;
  if (tape.recording() && want) {
    tape.record("stack_steps", {&steps[0]}, y, [steps, y, b, n, d]() mutable {
      const double* gy = y.grad();
      for (int64_t t = 0; t < n; ++t) {
        Tensor s = steps[static_cast<size_t>(t)];
        if (!s.requires_grad()) continue;
        double* gs = s.grad();
        for (int64_t i = 0; i < b; ++i)
          for (int64_t j = 0; j < d; ++j) gs[i * d + j] += gy[(i * n + t) * d + j];
      }
    });
  }
  return y;
}

Tensor gather_rows(Tape& tape, const Tensor& x, std::vector<int64_t> idx) {
  if (x.ndim() != 2) throw ShapeError("gather_rows: expected [r, d]");
  const int64_t rows = x.dim(0), d = x.dim(1);
  for (int64_t i : idx)
    if (i < 0 || i >= rows)
      throw ShapeError("gather_rows: row id " + std::to_string(i) + " out of range [0," +
                       std::to_string(rows) + ")");
  const int64_t m = static_cast<int64_t>(idx.size());
  Tensor y({m, d});
  const double* xp = x.data();
  double* yp = y.data();
  for (int64_t i = 0; i < m; ++i)
    std::memcpy(yp + i * d, xp + idx[static_cast<size_t>(i)] * d,
                static_cast<size_t>(d) * sizeof(double));
  if (tape.wants({&x})) {
    tape.record("gather_rows", {&x}, y, [x, y, idx = std::move(idx), m, d]() mutable {
      // Scatter-add; ids may repeat, so this stays serial for determinism.
      double* gx = x.grad();
      const double* gy = y.grad();
      for (int64_t i = 0; i < m; ++i) {
        double* dst = gx + idx[static_cast<size_t>(i)] * d;
        const double* src = gy + i * d;
        for (int64_t j = 0; j < d; ++j) dst[j] += src[j];
      }
    });
  }
  return y;
}

Tensor scatter_rows(Tape& tape, const Tensor& x, std::vector<int64_t> rows, int64_t out_rows) {
  if (x.ndim() != 2 || static_cast<int64_t>(rows.size()) != x.dim(0))
    throw ShapeError("scatter_rows: row list must match input rows");
  const int64_t w = x.dim(0), d = x.dim(1);
  for (int64_t r : rows)
    if (r < 0 || r >= out_rows) throw ShapeError("scatter_rows: target row out of range");
  Tensor y({out_rows, d});
  const double* xp = x.data();
  double* yp = y.data();
  for (int64_t i = 0; i < w; ++i)
    std::memcpy(yp + rows[static_cast<size_t>(i)] * d, xp + i * d,
                static_cast<size_t>(d) * sizeof(double));
  if (tape.wants({&x})) {
    tape.record("scatter_rows", {&x}, y, [x, y, rows = std::move(rows), w, d]() mutable {
      double* gx = x.grad();
      const double* gy = y.grad();
      for (int64_t i = 0; i < w; ++i) {
        const double* src = gy + rows[static_cast<size_t>(i)] * d;
        double* dst = gx + i * d;
        for (int64_t j = 0; j < d; ++j) dst[j] += src[j];
      }
    });
  }
  return y;
}

Tensor sum(Tape& tape, const Tensor& x) {
  double total = 0.0;
  const double* xp = x.data();
  const int64_t n = x.size();
  for (int64_t i = 0; i < n; ++i) total += xp[i];
  Tensor y = Tensor::scalar(total);
  if (tape.wants({&x})) {
    tape.record("sum", {&x}, y, [x, y]() mutable {
      const double g = y.grad()[0];
      double* gx = x.grad();
      const int64_t n = x.size();
      for (int64_t i = 0; i < n; ++i) gx[i] += g;
    });
  }
  return y;
}

namespace {

constexpr double kProbFloor = 1e-12;

Tensor picked_prob_loss(Tape& tape, const char* kind, const Tensor& probs,
                        std::vector<int64_t> targets, std::vector<double> weights, bool log_form) {
  if (probs.ndim() != 2) throw ShapeError("loss: expected probs [r, c]");
  const int64_t rows = probs.dim(0), cols = probs.dim(1);
  if (static_cast<int64_t>(targets.size()) != rows || static_cast<int64_t>(weights.size()) != rows)
    throw ShapeError("loss: targets/weights must have one entry per row");
  for (int64_t t : targets)
    if (t < 0 || t >= cols) throw ShapeError("loss: target id out of range");
  const double* pp = probs.data();
  double total = 0.0;
  for (int64_t r = 0; r < rows; ++r) {
    const double p = pp[r * cols + targets[static_cast<size_t>(r)]];
    total += weights[static_cast<size_t>(r)] * (log_form ? -std::log(std::max(p, kProbFloor)) : -p);
  }
  Tensor y = Tensor::scalar(total);
  if (tape.wants({&probs})) {
    tape.record(kind, {&probs}, y,
                [probs, y, targets = std::move(targets), weights = std::move(weights), rows, cols,
                 log_form]() mutable {
                  const double g = y.grad()[0];
                  double* gp = probs.grad();
                  const double* pp = probs.data();
                  for (int64_t r = 0; r < rows; ++r) {
                    const double w = weights[static_cast<size_t>(r)];
                    if (w == 0.0) continue;
                    const int64_t t = targets[static_cast<size_t>(r)];
                    if (log_form) {
                      const double p = pp[r * cols + t];
                      if (p > kProbFloor) gp[r * cols + t] -= g * w / p;
                    } else {
                      gp[r * cols + t] -= g * w;
                    }
                  }
                });
  }
  return y;
}

}  // namespace

Tensor nll_loss(Tape& tape, const Tensor& probs, std::vector<int64_t> targets,
                std::vector<double> weights) {
  return picked_prob_loss(tape, "nll_loss", probs, std::move(targets), std::move(weights), true);
}

Tensor neg_prob_loss(Tape& tape, const Tensor& probs, std::vector<int64_t> targets,
                     std::vector<double> weights) {
  return picked_prob_loss(tape, "neg_prob_loss", probs, std::move(targets), std::move(weights),
                          false);
}

std::vector<int64_t> argmax_rows(const Tensor& x) {
  const int64_t cols = x.shape().back(), rows = x.size() / cols;
  std::vector<int64_t> out(static_cast<size_t>(rows));
  const double* xp = x.data();
  for (int64_t r = 0; r < rows; ++r) {
    const double* xr = xp + r * cols;
    int64_t best = 0;
    for (int64_t j = 1; j < cols; ++j)
      if (xr[j] > xr[best]) best = j;
    out[static_cast<size_t>(r)] = best;
  }
  return out;
}

}  // namespace mude
