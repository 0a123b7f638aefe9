#include "qif/dist.hpp"

#include <sstream>

#include "qif/errors.hpp"

namespace qif {

SecretDist::SecretDist(Map entries) : entries_(std::move(entries)) {
  if (entries_.empty()) {
    throw DomainError("a distribution needs a non-empty support");
  }
  Rational total = 0;
  for (const auto& [value, p] : entries_) {
    if (p <= 0) {
      throw DomainError("probability of " + std::to_string(value) +
                        " must be strictly positive");
    }
    total += p;
  }
  if (total != 1) {
    throw DomainError("probabilities sum to " + frac_string(total) +
                      ", expected exactly 1");
  }
}

SecretDist SecretDist::uniform(const std::vector<std::uint64_t>& domain) {
  if (domain.empty()) {
    throw DomainError("uniform distribution over an empty domain");
  }
  const Rational share(1, static_cast<std::uint64_t>(domain.size()));
  Map entries;
  for (const std::uint64_t value : domain) {
    if (!entries.emplace(value, share).second) {
      throw DomainError("duplicate value " + std::to_string(value) +
                        " in domain");
    }
  }
  return SecretDist(std::move(entries));
}

SecretDist SecretDist::point(std::uint64_t value) {
  return SecretDist(Map{{value, Rational(1)}});
}

bool SecretDist::contains(std::uint64_t value) const {
  return entries_.count(value) != 0;
}

Rational SecretDist::prob(std::uint64_t value) const {
  const auto it = entries_.find(value);
  return it == entries_.end() ? Rational(0) : it->second;
}

Rational SecretDist::max_prob() const {
  Rational best = 0;
  for (const auto& [value, p] : entries_) {
    if (p > best) {
      best = p;
    }
  }
  return best;
}

std::pair<SecretDist, Rational> SecretDist::condition(
    const std::function<bool(std::uint64_t)>& keep) const {
  Map kept;
  Rational mass = 0;
  for (const auto& [value, p] : entries_) {
    if (keep(value)) {
      kept.emplace(value, p);
      mass += p;
    }
  }
  if (mass == 0) {
    throw DomainError("conditioning on a zero-mass event");
  }
  for (auto& [value, p] : kept) {
    p /= mass;
  }
  return {SecretDist(std::move(kept)), mass};
}

std::string SecretDist::to_string() const {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (const auto& [value, p] : entries_) {
    if (!first) {
      out << ", ";
    }
    first = false;
    out << value << ":" << frac_string(p);
  }
  out << "}";
  return out.str();
}

nlohmann::ordered_json dist_to_json(const SecretDist& d) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [value, p] : d.entries()) {
    j[std::to_string(value)] = frac_string(p);
  }
  return j;
}

SecretDist dist_from_json(const nlohmann::json& j) {
  SecretDist::Map entries;
  for (const auto& [key, value] : j.items()) {
    entries.emplace(std::stoull(key), parse_frac(value.get<std::string>()));
  }
  return SecretDist(std::move(entries));
}

}  // namespace qif
