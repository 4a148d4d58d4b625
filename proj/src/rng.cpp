#include "dagsched/rng.hpp"

namespace dagsched {

int sample_discrete(const std::vector<double>& weights, double u) {
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("sample_discrete: negative weight");
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("sample_discrete: zero total weight");
  double target = u * total;
  double acc = 0.0;
  int last = -1;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last = int(i);
    if (target < acc) return last;
  }
  return last;  // u rounded onto the boundary: last live entry
}

}  // namespace dagsched
