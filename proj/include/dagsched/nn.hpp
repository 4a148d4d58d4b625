#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dagsched/rng.hpp"
#include "dagsched/tensor.hpp"

namespace dagsched {

struct NoActionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Activation { Linear, Relu };

// A named trainable tensor with its gradient accumulator.
struct Param {
  std::string name;
  Tensor2 value;
  Tensor2 grad;
};

// Ordered collection of parameters with stable addresses (Tape nodes hold
// Param pointers across insertions).
class ParamStore {
 public:
  Param& add(const std::string& name, Tensor2 value);
  Param& get(const std::string& name);
  const Param& get(const std::string& name) const;
  bool has(const std::string& name) const { return index_.count(name) > 0; }

  int count() const { return int(params_.size()); }
  Param& at(int i) { return *params_[i]; }
  const Param& at(int i) const { return *params_[i]; }

  void zero_grads();
  bool all_finite() const;
  std::size_t total_values() const;

 private:
  std::vector<std::unique_ptr<Param>> params_;
  std::unordered_map<std::string, int> index_;
};

// Ascent step: value += alpha * grad for every parameter, then gradients are
// zeroed. A step with untouched (all-zero) gradients leaves values unchanged.
void sgd_step(ParamStore& store, double alpha);

// Seeded uniform init in [-1/sqrt(fan_in), +1/sqrt(fan_in)].
Tensor2 uniform_init(int rows, int cols, int fan_in, Rng& rng);

// Probabilities with masked entries exactly 0 and the rest positive, summing
// to 1; computed with max-subtraction. allowed[i] != 0 marks a live entry.
// Throws NoActionError when everything is masked.
std::vector<double> masked_softmax(std::span<const double> scores,
                                   std::span<const std::uint8_t> allowed);

// Reverse-mode tape over Tensor2 values. Operations append nodes; backward()
// walks them once in reverse and accumulates into Param::grad. Build a fresh
// tape per forward pass; backward may be called once per tape.
class Tape {
 public:
  using Ref = int;

  Ref input(Tensor2 v);
  Ref param(Param& p);

  // activation(x * W + b); b is 1 x cols(W)
  Ref dense(Ref x, Ref w, Ref b, Activation act);
  Ref concat_cols(const std::vector<Ref>& parts);
  Ref gather_rows(Ref x, std::vector<int> rows);
  // out.row(i) = sum of x rows listed in groups[i]; empty groups give zero rows
  Ref group_rowsum(Ref x, std::vector<std::vector<int>> groups);
  Ref mean_rows(Ref x);
  Ref repeat_row(Ref v, int times);
  Ref add(Ref a, Ref b);
  // log softmax over the unmasked entries of an n x 1 score column, evaluated
  // at index pick (which must be unmasked); yields a 1 x 1 scalar
  Ref pick_log_softmax(Ref scores, std::vector<std::uint8_t> allowed, int pick);

  const Tensor2& value(Ref r) const { return nodes_.at(r).value; }
  double scalar(Ref r) const;
  int size() const { return int(nodes_.size()); }

  // Seeds d(out)/d(out) = seed and propagates; out must be 1 x 1.
  void backward(Ref out, double seed = 1.0);

 private:
  struct Node {
    Tensor2 value;
    Tensor2 grad;
    bool grad_live = false;
    std::function<void(Tape&, int)> back;
    Param* param = nullptr;
  };

  Tensor2& grad_of(int i);
  Ref push(Tensor2 value, std::function<void(Tape&, int)> back, Param* p = nullptr);

  std::vector<Node> nodes_;
  bool backward_done_ = false;
};

// y = x + dense(relu(dense(x, w1, b1)), w2, b2); all widths equal.
Tape::Ref residual_block(Tape& t, Tape::Ref x, Tape::Ref w1, Tape::Ref b1,
                         Tape::Ref w2, Tape::Ref b2);

}  // namespace dagsched
