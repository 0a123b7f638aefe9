#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qif/dist.hpp"

namespace qif {

// Entropies and leakages are reported in bits.
using Bits = double;

// H(d) = -sum p log2 p, with 0*log 0 = 0 by the usual continuity convention
// (zero entries are never stored anyway).
Bits shannon_entropy(const SecretDist& d);

// -log2 of the maximum probability: the uncertainty under a one-try guess.
Bits min_entropy(const SecretDist& d);

// Secret -> observable channel. Outcomes are opaque comparable tokens: a
// final public value rendered in decimal, or a comma-joined value sequence.
struct Channel {
  SecretDist prior;
  // outcome -> secret -> p(outcome | secret), exact.
  std::map<std::string, std::map<std::uint64_t, Rational>> rows;

  // Every supported secret's row must sum to exactly 1.
  void validate() const;
};

// sum_y p(y) * H(X | Y=y).
Bits conditional_shannon(const Channel& ch);

// -log2 sum_y p(y) * max_x p(x|y); the inner sum stays rational.
Bits conditional_min_smith(const Channel& ch);

// sum_i w_i * min_entropy(d_i). Weights must sum to exactly 1.
Bits expected_min_entropy(
    const std::vector<std::pair<Rational, SecretDist>>& weighted);

}  // namespace qif
