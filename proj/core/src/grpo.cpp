#include "synthrl/grpo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "synthrl/errors.hpp"

namespace synthrl::grpo {

std::vector<double> group_advantages(std::span<const double> rewards, double epsilon) {
  if (rewards.empty()) throw std::invalid_argument("reward group is empty");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  double sum = 0.0;
  for (double r : rewards) {
    if (!std::isfinite(r)) throw std::invalid_argument("reward is not finite");
    sum += r;
  }
  const double n = static_cast<double>(rewards.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (double r : rewards) ss += (r - mean) * (r - mean);
  const double stddev = std::sqrt(ss / n);

  std::vector<double> out(rewards.size(), 0.0);
  const bool all_equal = std::all_of(rewards.begin(), rewards.end(), [&](double r) { return r == rewards.front(); });
  if (all_equal) return out;
  for (std::size_t i = 0; i < rewards.size(); ++i) out[i] = (rewards[i] - mean) / (stddev + epsilon);
  return out;
}

double grpo_surrogate(std::span<const TokenRatioSeq> seqs, double clip_eps) {
  if (seqs.empty()) throw std::invalid_argument("no sequences");
  if (!(clip_eps > 0.0 && clip_eps < 1.0)) throw std::invalid_argument("clip_eps must lie in (0, 1)");
  double total = 0.0;
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    const auto& s = seqs[i];
    if (s.old_logprobs.size() != s.new_logprobs.size()) {
      throw LengthMismatch("sequence " + std::to_string(i) + ": old and new logprobs differ in length");
    }
    if (s.old_logprobs.empty()) throw std::invalid_argument("sequence " + std::to_string(i) + " has no tokens");
    double seq_sum = 0.0;
    for (std::size_t t = 0; t < s.old_logprobs.size(); ++t) {
      const double ratio = std::exp(s.new_logprobs[t] - s.old_logprobs[t]);
      const double clipped = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps);
      seq_sum += std::min(ratio * s.advantage, clipped * s.advantage);
    }
    total += seq_sum / static_cast<double>(s.old_logprobs.size());
  }
  return total / static_cast<double>(seqs.size());
}

}  // namespace synthrl::grpo
