#include "qif/measures.hpp"

#include "qif/errors.hpp"

namespace qif {

namespace {

// -log2(1) would otherwise print as -0.000000.
Bits drop_negative_zero(Bits value) {
  return value == 0 ? 0.0 : value;
}

}  // namespace

Bits shannon_entropy(const SecretDist& d) {
  Bits h = 0;
  for (const auto& [value, p] : d.entries()) {
    h -= to_double(p) * log2_rational(p);
  }
  return drop_negative_zero(h);
}

Bits min_entropy(const SecretDist& d) {
  return drop_negative_zero(-log2_rational(d.max_prob()));
}

void Channel::validate() const {
  for (const auto& [secret, p] : prior.entries()) {
    Rational total = 0;
    for (const auto& [outcome, row] : rows) {
      const auto it = row.find(secret);
      if (it != row.end()) {
        total += it->second;
      }
    }
    if (total != 1) {
      throw DomainError("channel row for secret " + std::to_string(secret) +
                        " sums to " + frac_string(total));
    }
  }
}

Bits conditional_shannon(const Channel& ch) {
  Bits result = 0;
  for (const auto& [outcome, row] : ch.rows) {
    // joint(s) = prior(s) * p(outcome | s); p(outcome) is its total.
    Rational p_outcome = 0;
    std::vector<Rational> joint;
    joint.reserve(row.size());
    for (const auto& [secret, p_cond] : row) {
      const Rational j = ch.prior.prob(secret) * p_cond;
      if (j > 0) {
        joint.push_back(j);
        p_outcome += j;
      }
    }
    if (p_outcome == 0) {
      continue;
    }
    Bits h_given = 0;
    for (const Rational& j : joint) {
      const Rational posterior = j / p_outcome;
      h_given -= to_double(posterior) * log2_rational(posterior);
    }
    result += to_double(p_outcome) * h_given;
  }
  return result;
}

Bits conditional_min_smith(const Channel& ch) {
  // sum_y p(y) max_x p(x|y) = sum_y max_x joint(x, y); exact until the log.
  Rational vulnerability = 0;
  for (const auto& [outcome, row] : ch.rows) {
    Rational best = 0;
    for (const auto& [secret, p_cond] : row) {
      const Rational j = ch.prior.prob(secret) * p_cond;
      if (j > best) {
        best = j;
      }
    }
    vulnerability += best;
  }
  return drop_negative_zero(-log2_rational(vulnerability));
}

Bits expected_min_entropy(
    const std::vector<std::pair<Rational, SecretDist>>& weighted) {
  Rational total = 0;
  for (const auto& [weight, d] : weighted) {
    total += weight;
  }
  if (total != 1) {
    throw DomainError("weights sum to " + frac_string(total) +
                      ", expected exactly 1");
  }
  Bits result = 0;
  for (const auto& [weight, d] : weighted) {
    result += to_double(weight) * min_entropy(d);
  }
  return result;
}

}  // namespace qif
