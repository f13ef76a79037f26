#pragma once

#include <span>
#include <vector>

// Group-relative advantage and clipped token surrogate, as pure functions.
namespace synthrl::grpo {

inline constexpr double kDefaultEpsilon = 1e-8;

// (R_i - mean) / (population stddev + epsilon); all zeros when every reward
// is equal. Throws std::invalid_argument on an empty group, non-finite reward,
// or epsilon <= 0.
std::vector<double> group_advantages(std::span<const double> rewards, double epsilon = kDefaultEpsilon);

struct TokenRatioSeq {
  std::vector<double> old_logprobs;
  std::vector<double> new_logprobs;
  double advantage = 0.0;
};

// Mean over sequences of the per-token mean of
// min(r * A, clip(r, 1 - eps, 1 + eps) * A), r = exp(new - old). KL term is
// omitted (beta = 0). Throws LengthMismatch or std::invalid_argument.
double grpo_surrogate(std::span<const TokenRatioSeq> seqs, double clip_eps);

}  // namespace synthrl::grpo
