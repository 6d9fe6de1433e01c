#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "expanse/action_zoo.hpp"
#include "expanse/group_words.hpp"
#include "expanse/separation_entropy.hpp"

namespace expanse {

// Commutation defects above this are treated as genuine non-commutation.
inline constexpr double kCommutationTolerance = 1e-9;

// Max over generators and samples of d(phi_g x, psi_g x). A sampled stand-in
// for the sup over the whole space. Throws ParameterError on mismatched
// group or space.
double d0(const Action& phi, const Action& psi, std::span<const Point> samples);

// Max over generator pairs (g of phi, h of psi) and samples of
// d(phi_g psi_h x, psi_h phi_g x). Forward generators only.
double commutation_defect(const Action& phi, const Action& psi,
                          std::span<const Point> samples);

// generator i acts as phi applied along sigma[i]. For abelian groups (or any
// sigma induced by an endomorphism commuting with phi) the result commutes
// with phi.
Action endomorphism_action(const Action& phi, std::span<const Word> sigma);

// Every group element acts as the identity.
Action trivial_action(const GroupSpec& group, const Space& space);

enum class WitnessStatus { witness, identical_on_samples, no_witness };

struct DiscretenessResult {
  WitnessStatus status = WitnessStatus::no_witness;
  double defect_psi = 0.0;
  double defect_psi_prime = 0.0;
  double d0 = 0.0;
  // Populated for status == witness.
  std::size_t sample_index = 0;
  int generator = 0;
  Point x;
  Word h;
  double distance = 0.0;
  // Number of (sample, generator) pairs where psi and psi' differ, among the
  // samples examined before the search stopped.
  std::size_t differing_pairs = 0;
};

struct WitnessOptions {
  int threads = 1;
  SearchLimits limits{};
};

// For the first (sample, generator) pair, in that order, where psi_g x and
// psi'_g x differ and some h in K_n_max of phi pushes them more than e apart,
// returns (g, x, h). Both candidates must commute with phi within
// kCommutationTolerance, otherwise ParameterError.
DiscretenessResult discreteness_witness(const Action& phi, const Action& psi,
                                        const Action& psi_prime, double e,
                                        int n_max,
                                        std::span<const Point> samples,
                                        const WitnessOptions& options = {});

}  // namespace expanse
