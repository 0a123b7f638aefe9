#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qif/rational.hpp"

namespace qif {

// The attacker's belief about the secret: an exact finite distribution.
// Stored entries are strictly positive and sum to exactly 1; zero-probability
// values are dropped eagerly.
class SecretDist {
 public:
  using Map = std::map<std::uint64_t, Rational>;

  explicit SecretDist(Map entries);

  static SecretDist uniform(const std::vector<std::uint64_t>& domain);
  static SecretDist point(std::uint64_t value);

  const Map& entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }
  bool contains(std::uint64_t value) const;

  // 0 for values outside the support.
  Rational prob(std::uint64_t value) const;

  Rational max_prob() const;

  // Bayesian restriction to the values satisfying `keep`: returns the
  // renormalized distribution and the kept mass (the probability of the
  // observation that induced the restriction). Throws DomainError when no
  // supported value satisfies the predicate.
  std::pair<SecretDist, Rational> condition(
      const std::function<bool(std::uint64_t)>& keep) const;

  bool operator==(const SecretDist& other) const {
    return entries_ == other.entries_;
  }

  std::string to_string() const;

 private:
  Map entries_;
};

// {"3": "1/2", "7": "1/2"} — values as exact fraction strings, never floats.
nlohmann::ordered_json dist_to_json(const SecretDist& d);
SecretDist dist_from_json(const nlohmann::json& j);

}  // namespace qif
