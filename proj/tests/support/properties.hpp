#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace expanse::testing {

struct PropertyResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;  // case description of the first failure

  bool passed() const { return failures == 0 && cases > 0; }
};

// Each suite draws `cases` random cases from a generator seeded with `seed`.
PropertyResult prop_reduction_idempotent(std::size_t cases, std::uint64_t seed);
PropertyResult prop_ball_nesting(std::size_t cases, std::uint64_t seed);
PropertyResult prop_cocycle(std::size_t cases, std::uint64_t seed);
PropertyResult prop_inverse_round_trip(std::size_t cases, std::uint64_t seed);
PropertyResult prop_separated_count_monotone(std::size_t cases, std::uint64_t seed);
PropertyResult prop_d0_pseudometric(std::size_t cases, std::uint64_t seed);
PropertyResult prop_conjugacy_invariance(std::size_t cases, std::uint64_t seed);
PropertyResult prop_pg_associativity(std::size_t cases, std::uint64_t seed);

std::vector<PropertyResult> run_all_properties(std::size_t cases, std::uint64_t seed);

}  // namespace expanse::testing
