#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qif/ast.hpp"
#include "qif/leakage.hpp"
#include "qif/pks.hpp"
#include "qif/sched.hpp"

namespace qif {

// One concrete execution: a fixed secret and a fixed resolution of every
// scheduler choice. The run probability is the product of the scheduler
// decision weights alone (branch outcomes are deterministic given the
// secret).
struct ConcreteRun {
  std::uint64_t secret = 0;
  std::vector<int> scheduler_choices;
  std::vector<std::uint64_t> o_sequence;  // initial value included
  Rational probability_given_secret;
  std::string path_key;  // step labels joined with "; "
};

// Brute-force reference: runs the program concretely for every supported
// secret and every positive-weight scheduler resolution. No distributions
// are transformed; probabilities and posteriors come out of counting and
// weighting afterwards. Embarrassingly parallel over secrets.
std::vector<ConcreteRun> oracle_enumerate(const ProgramDecl& prog,
                                          const Scheduler& policy,
                                          const SecretDist& prior,
                                          int budget = kDefaultBudget,
                                          Exec mode = Exec::Parallel);

std::vector<ConcreteRun> oracle_enumerate_serial(const ProgramDecl& prog,
                                                 const Scheduler& policy,
                                                 const SecretDist& prior,
                                                 int budget = kDefaultBudget);

enum class ObsKey { Path, ValueSequence };

// Posterior over secrets given an observation, by Bayes over the runs:
// posterior(s) ∝ prior(s) * sum of matching run probabilities.
// Throws DomainError when the observation has zero mass.
SecretDist oracle_posterior(const std::vector<ConcreteRun>& runs,
                            const SecretDist& prior, const std::string& key,
                            ObsKey kind);

// Channel p(observable | secret) assembled directly from the runs.
Channel oracle_channel(const std::vector<ConcreteRun>& runs,
                       const SecretDist& prior, ObsKind kind);

// Exact comparison of the pipeline's traces against the oracle runs grouped
// by path key: probabilities and final posteriors must match as rationals.
// Returns std::nullopt on agreement, otherwise a human-readable diff.
std::optional<std::string> compare_with_oracle(
    const Pks& pks, const std::vector<Trace>& traces,
    const std::vector<ConcreteRun>& runs);

}  // namespace qif
