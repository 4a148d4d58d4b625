#include "dagsched/nn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dagsched/kernels.hpp"

namespace dagsched {

Param& ParamStore::add(const std::string& name, Tensor2 value) {
  if (index_.count(name)) throw std::invalid_argument("duplicate parameter: " + name);
  auto p = std::make_unique<Param>();
  p->name = name;
  p->grad = Tensor2(value.rows(), value.cols());
  p->value = std::move(value);
  index_[name] = int(params_.size());
  params_.push_back(std::move(p));
  return *params_.back();
}

Param& ParamStore::get(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw std::invalid_argument("unknown parameter: " + name);
  return *params_[it->second];
}

const Param& ParamStore::get(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw std::invalid_argument("unknown parameter: " + name);
  return *params_[it->second];
}

void ParamStore::zero_grads() {
  for (auto& p : params_) p->grad.zero();
}

bool ParamStore::all_finite() const {
  for (const auto& p : params_)
    if (!p->value.all_finite()) return false;
  return true;
}

std::size_t ParamStore::total_values() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p->value.size();
  return n;
}

void sgd_step(ParamStore& store, double alpha) {
  for (int i = 0; i < store.count(); ++i) {
    Param& p = store.at(i);
    kernels::axpy(alpha, p.grad.data(), p.value.data(), p.value.size());
    p.grad.zero();
  }
}

Tensor2 uniform_init(int rows, int cols, int fan_in, Rng& rng) {
  const double bound = 1.0 / std::sqrt(double(std::max(1, fan_in)));
  Tensor2 t(rows, cols);
  for (std::size_t i = 0; i < t.size(); ++i)
    t.data()[i] = rng.uniform_in(-bound, bound);
  return t;
}

std::vector<double> masked_softmax(std::span<const double> scores,
                                   std::span<const std::uint8_t> allowed) {
  if (scores.size() != allowed.size())
    throw std::invalid_argument("masked_softmax: mask length mismatch");
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (allowed[i] && scores[i] > mx) mx = scores[i];
  if (!std::isfinite(mx)) throw NoActionError("masked_softmax: all entries masked");

  std::vector<double> out(scores.size(), 0.0);
  double z = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (allowed[i]) {
      out[i] = std::exp(scores[i] - mx);
      z += out[i];
    }
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (allowed[i]) out[i] /= z;
  return out;
}

Tensor2& Tape::grad_of(int i) {
  Node& n = nodes_[i];
  if (!n.grad_live) {
    n.grad = Tensor2(n.value.rows(), n.value.cols());
    n.grad_live = true;
  }
  return n.grad;
}

Tape::Ref Tape::push(Tensor2 value, std::function<void(Tape&, int)> back, Param* p) {
  Node n;
  n.value = std::move(value);
  n.back = std::move(back);
  n.param = p;
  nodes_.push_back(std::move(n));
  return int(nodes_.size()) - 1;
}

Tape::Ref Tape::input(Tensor2 v) { return push(std::move(v), nullptr); }

Tape::Ref Tape::param(Param& p) { return push(p.value, nullptr, &p); }

double Tape::scalar(Ref r) const {
  const Tensor2& v = value(r);
  if (v.rows() != 1 || v.cols() != 1) throw std::invalid_argument("scalar: not 1x1");
  return v.at(0, 0);
}

Tape::Ref Tape::dense(Ref x, Ref w, Ref b, Activation act) {
  const Tensor2& xv = value(x);
  const Tensor2& wv = value(w);
  const Tensor2& bv = value(b);
  if (xv.cols() != wv.rows())
    throw std::invalid_argument("dense: input width " + std::to_string(xv.cols()) +
                                " does not match weight rows " + std::to_string(wv.rows()));
  if (bv.rows() != 1 || bv.cols() != wv.cols())
    throw std::invalid_argument("dense: bias shape mismatch");

  Tensor2 y = matmul(xv, wv);
  for (int r = 0; r < y.rows(); ++r)
    kernels::vadd(y.row(r), bv.row(0), y.row(r), std::size_t(y.cols()));
  if (act == Activation::Relu) kernels::relu(y.data(), y.data(), y.size());

  return push(std::move(y), [x, w, b, act](Tape& t, int self) {
    const Tensor2& dy = t.nodes_[self].grad;
    const Tensor2& yv = t.nodes_[self].value;
    Tensor2 dpre;
    const Tensor2* dp = &dy;
    if (act == Activation::Relu) {
      dpre = Tensor2(dy.rows(), dy.cols());
      kernels::relu_grad(yv.data(), dy.data(), dpre.data(), dy.size());
      dp = &dpre;
    }
    add_matmul_bt(*dp, t.value(w), t.grad_of(x));
    add_matmul_at(t.value(x), *dp, t.grad_of(w));
    add_colsum(*dp, t.grad_of(b));
  });
}

Tape::Ref Tape::concat_cols(const std::vector<Ref>& parts) {
  if (parts.empty()) throw std::invalid_argument("concat_cols: no parts");
  const int rows = value(parts[0]).rows();
  int cols = 0;
  for (Ref p : parts) {
    if (value(p).rows() != rows)
      throw std::invalid_argument("concat_cols: row counts disagree");
    cols += value(p).cols();
  }
  Tensor2 y(rows, cols);
  int off = 0;
  for (Ref p : parts) {
    const Tensor2& pv = value(p);
    for (int r = 0; r < rows; ++r)
      std::copy(pv.row(r), pv.row(r) + pv.cols(), y.row(r) + off);
    off += pv.cols();
  }
  return push(std::move(y), [parts](Tape& t, int self) {
    const Tensor2& dy = t.nodes_[self].grad;
    int off = 0;
    for (Ref p : parts) {
      Tensor2& dp = t.grad_of(p);
      for (int r = 0; r < dp.rows(); ++r)
        kernels::vadd(dp.row(r), dy.row(r) + off, dp.row(r), std::size_t(dp.cols()));
      off += dp.cols();
    }
  });
}

Tape::Ref Tape::gather_rows(Ref x, std::vector<int> rows) {
  const Tensor2& xv = value(x);
  Tensor2 y(int(rows.size()), xv.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= xv.rows())
      throw std::invalid_argument("gather_rows: index out of range");
    std::copy(xv.row(rows[i]), xv.row(rows[i]) + xv.cols(), y.row(int(i)));
  }
  return push(std::move(y), [x, rows = std::move(rows)](Tape& t, int self) {
    const Tensor2& dy = t.nodes_[self].grad;
    Tensor2& dx = t.grad_of(x);
    for (std::size_t i = 0; i < rows.size(); ++i)
      kernels::vadd(dx.row(rows[i]), dy.row(int(i)), dx.row(rows[i]),
                    std::size_t(dx.cols()));
  });
}

Tape::Ref Tape::group_rowsum(Ref x, std::vector<std::vector<int>> groups) {
  const Tensor2& xv = value(x);
  Tensor2 y(int(groups.size()), xv.cols());
  for (std::size_t i = 0; i < groups.size(); ++i)
    for (int j : groups[i]) {
      if (j < 0 || j >= xv.rows())
        throw std::invalid_argument("group_rowsum: index out of range");
      kernels::vadd(y.row(int(i)), xv.row(j), y.row(int(i)), std::size_t(xv.cols()));
    }
  return push(std::move(y), [x, groups = std::move(groups)](Tape& t, int self) {
    const Tensor2& dy = t.nodes_[self].grad;
    Tensor2& dx = t.grad_of(x);
    for (std::size_t i = 0; i < groups.size(); ++i)
      for (int j : groups[i])
        kernels::vadd(dx.row(j), dy.row(int(i)), dx.row(j), std::size_t(dx.cols()));
  });
}

Tape::Ref Tape::mean_rows(Ref x) {
  const Tensor2& xv = value(x);
  if (xv.rows() == 0) throw std::invalid_argument("mean_rows: empty input");
  Tensor2 y = colsum(xv);
  kernels::vscale(1.0 / xv.rows(), y.data(), y.size());
  return push(std::move(y), [x](Tape& t, int self) {
    const Tensor2& dy = t.nodes_[self].grad;
    Tensor2& dx = t.grad_of(x);
    const double inv = 1.0 / dx.rows();
    for (int r = 0; r < dx.rows(); ++r)
      kernels::axpy(inv, dy.row(0), dx.row(r), std::size_t(dx.cols()));
  });
}

Tape::Ref Tape::repeat_row(Ref v, int times) {
  const Tensor2& vv = value(v);
  if (vv.rows() != 1) throw std::invalid_argument("repeat_row: input must be 1 x d");
  Tensor2 y(times, vv.cols());
  for (int r = 0; r < times; ++r)
    std::copy(vv.row(0), vv.row(0) + vv.cols(), y.row(r));
  return push(std::move(y), [v](Tape& t, int self) {
    add_colsum(t.nodes_[self].grad, t.grad_of(v));
  });
}

Tape::Ref Tape::add(Ref a, Ref b) {
  const Tensor2& av = value(a);
  const Tensor2& bv = value(b);
  if (!av.same_shape(bv)) throw std::invalid_argument("add: shape mismatch");
  Tensor2 y(av.rows(), av.cols());
  kernels::vadd(av.data(), bv.data(), y.data(), y.size());
  return push(std::move(y), [a, b](Tape& t, int self) {
    const Tensor2& dy = t.nodes_[self].grad;
    Tensor2& da = t.grad_of(a);
    Tensor2& db = t.grad_of(b);
    kernels::vadd(da.data(), dy.data(), da.data(), dy.size());
    kernels::vadd(db.data(), dy.data(), db.data(), dy.size());
  });
}

Tape::Ref Tape::pick_log_softmax(Ref scores, std::vector<std::uint8_t> allowed, int pick) {
  const Tensor2& sv = value(scores);
  if (sv.cols() != 1) throw std::invalid_argument("pick_log_softmax: scores must be n x 1");
  if (int(allowed.size()) != sv.rows())
    throw std::invalid_argument("pick_log_softmax: mask length mismatch");
  if (pick < 0 || pick >= sv.rows() || !allowed[pick])
    throw std::invalid_argument("pick_log_softmax: picked index is masked");

  double mx = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < sv.rows(); ++i)
    if (allowed[i]) mx = std::max(mx, sv.at(i, 0));
  double z = 0.0;
  std::vector<double> probs(sv.rows(), 0.0);
  for (int i = 0; i < sv.rows(); ++i)
    if (allowed[i]) {
      probs[i] = std::exp(sv.at(i, 0) - mx);
      z += probs[i];
    }
  for (double& p : probs) p /= z;
  Tensor2 y(1, 1);
  y.at(0, 0) = sv.at(pick, 0) - mx - std::log(z);

  return push(std::move(y),
              [scores, allowed = std::move(allowed), probs = std::move(probs),
               pick](Tape& t, int self) {
                const double g = t.nodes_[self].grad.at(0, 0);
                Tensor2& ds = t.grad_of(scores);
                for (int i = 0; i < ds.rows(); ++i)
                  if (allowed[i]) ds.at(i, 0) += g * ((i == pick ? 1.0 : 0.0) - probs[i]);
              });
}

void Tape::backward(Ref out, double seed) {
  if (backward_done_) throw std::logic_error("Tape::backward called twice");
  backward_done_ = true;
  if (out < 0 || out >= size()) throw std::invalid_argument("backward: bad ref");
  if (value(out).rows() != 1 || value(out).cols() != 1)
    throw std::invalid_argument("backward: output must be 1 x 1");
  grad_of(out).at(0, 0) = seed;
  for (int i = out; i >= 0; --i) {
    Node& n = nodes_[i];
    if (!n.grad_live) continue;
    if (n.back) n.back(*this, i);
    if (n.param)
      kernels::vadd(n.param->grad.data(), n.grad.data(), n.param->grad.data(),
                    n.grad.size());
  }
}

Tape::Ref residual_block(Tape& t, Tape::Ref x, Tape::Ref w1, Tape::Ref b1,
                         Tape::Ref w2, Tape::Ref b2) {
  Tape::Ref h = t.dense(x, w1, b1, Activation::Relu);
  Tape::Ref f = t.dense(h, w2, b2, Activation::Linear);
  return t.add(x, f);
}

}  // namespace dagsched
