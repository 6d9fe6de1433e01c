#include "expanse/centralizer_lab.hpp"

#include <algorithm>
#include <string>

#include "expanse/errors.hpp"
#include "parallel.hpp"

namespace expanse {

namespace {

void require_compatible(const Action& a, const Action& b) {
  if (!(a.group() == b.group())) {
    throw ParameterError("actions " + a.name() + " and " + b.name() +
                         " have different groups");
  }
  if (!(a.space() == b.space())) {
    throw ParameterError("actions " + a.name() + " and " + b.name() +
                         " act on different spaces");
  }
}

}  // namespace

double d0(const Action& phi, const Action& psi, std::span<const Point> samples) {
  require_compatible(phi, psi);
  double best = 0.0;
  for (int g = 0; g < phi.rank(); ++g) {
    const Letter l{static_cast<std::uint8_t>(g), 1};
    for (const Point& x : samples) {
      best = std::max(best, distance(phi.space(), phi.apply(l, x), psi.apply(l, x)));
    }
  }
  return best;
}

double commutation_defect(const Action& phi, const Action& psi,
                          std::span<const Point> samples) {
  require_compatible(phi, psi);
  double best = 0.0;
  for (int g = 0; g < phi.rank(); ++g) {
    const Letter lg{static_cast<std::uint8_t>(g), 1};
    for (int h = 0; h < psi.rank(); ++h) {
      const Letter lh{static_cast<std::uint8_t>(h), 1};
      for (const Point& x : samples) {
        const Point a = phi.apply(lg, psi.apply(lh, x));
        const Point b = psi.apply(lh, phi.apply(lg, x));
        best = std::max(best, distance(phi.space(), a, b));
      }
    }
  }
  return best;
}

Action endomorphism_action(const Action& phi, std::span<const Word> sigma) {
  if (static_cast<int>(sigma.size()) != phi.rank()) {
    throw ParameterError("endomorphism needs one word per generator");
  }
  std::vector<Homeomorphism> gens;
  std::string name = phi.name() + " o [";
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const Word w = sigma[i];
    const Word w_inv = inverse(phi.group(), w);
    if (i > 0) name += ", ";
    name += w.to_string();
    gens.emplace_back(
        w.to_string(),
        [phi, w](const Point& x) { return apply_word(phi, w, x); },
        [phi, w_inv](const Point& x) { return apply_word(phi, w_inv, x); });
  }
  name += "]";
  return Action(name, phi.group(), phi.space(), std::move(gens));
}

Action trivial_action(const GroupSpec& group, const Space& space) {
  std::vector<Homeomorphism> gens(static_cast<std::size_t>(group.rank),
                                  Homeomorphism::identity());
  return Action("trivial", group, space, std::move(gens));
}

DiscretenessResult discreteness_witness(const Action& phi, const Action& psi,
                                        const Action& psi_prime, double e,
                                        int n_max,
                                        std::span<const Point> samples,
                                        const WitnessOptions& options) {
  if (!(e > 0.0)) throw ParameterError("e must be positive");
  require_compatible(phi, psi);
  require_compatible(phi, psi_prime);
  DiscretenessResult r;
  r.defect_psi = commutation_defect(phi, psi, samples);
  r.defect_psi_prime = commutation_defect(phi, psi_prime, samples);
  if (r.defect_psi > kCommutationTolerance ||
      r.defect_psi_prime > kCommutationTolerance) {
    throw ParameterError("candidate does not commute with " + phi.name() +
                         " (defects " + std::to_string(r.defect_psi) + ", " +
                         std::to_string(r.defect_psi_prime) + ")");
  }
  r.d0 = d0(psi, psi_prime, samples);

  const Space& space = phi.space();
  const int rank = phi.rank();
  // Per-sample outcome: the lowest generator with a witness, if any.
  struct Found {
    int generator = -1;
    SeparationWitness witness;
    std::size_t differing = 0;
  };
  // Samples are processed in blocks so an early witness ends the search
  // while the selected witness stays independent of the thread count.
  const std::size_t block = std::max<std::size_t>(64, 16 * static_cast<std::size_t>(std::max(1, options.threads)));
  for (std::size_t begin = 0; begin < samples.size(); begin += block) {
    const std::size_t end = std::min(samples.size(), begin + block);
    std::vector<Found> found(end - begin);
    detail::parallel_for(end - begin, options.threads, [&](std::size_t b, std::size_t f) {
      for (std::size_t k = b; k < f; ++k) {
        const Point& x = samples[begin + k];
        for (int g = 0; g < rank; ++g) {
          const Letter l{static_cast<std::uint8_t>(g), 1};
          const Point p = psi.apply(l, x);
          const Point q = psi_prime.apply(l, x);
          if (!(distance(space, p, q) > 0.0)) continue;
          ++found[k].differing;
          if (found[k].generator >= 0) continue;
          if (auto w = find_separating_word(phi, p, q, e, n_max, options.limits)) {
            found[k].generator = g;
            found[k].witness = std::move(*w);
          }
        }
      }
    });
    for (std::size_t k = 0; k < found.size(); ++k) {
      r.differing_pairs += found[k].differing;
      if (r.status != WitnessStatus::witness && found[k].generator >= 0) {
        r.status = WitnessStatus::witness;
        r.sample_index = begin + k;
        r.generator = found[k].generator;
        r.x = samples[begin + k];
        r.h = found[k].witness.word;
        r.distance = found[k].witness.distance;
      }
    }
    if (r.status == WitnessStatus::witness) return r;
  }
  r.status = r.differing_pairs == 0 ? WitnessStatus::identical_on_samples
                                    : WitnessStatus::no_witness;
  return r;
}

}  // namespace expanse
