#pragma once

#include <span>
#include <string>

#include "expanse/centralizer_lab.hpp"
#include "expanse/expansivity.hpp"
#include "expanse/separation_entropy.hpp"
#include "json.hpp"

namespace expanse::app {

// Shortest round-trip decimal text, as CSV cells use it.
std::string format_real(double v);

nlohmann::json point_json(const Space& space, const Point& p);

nlohmann::json entropy_json(const EntropyReport& r);
// Columns epsilon,n,count.
std::string entropy_csv(const EntropyReport& r);
// log S(n, eps) against n, one polyline per epsilon.
std::string entropy_svg(const EntropyReport& r, const std::string& title);

nlohmann::json scan_json(const ScanReport& r, const Space& space);
// Columns index,distance,radius (radius empty when no witness).
std::string scan_csv(const ScanReport& r, std::span<const PointPair> pairs,
                     const Space& space);

// dim 0 writes parameters only (transversal points).
nlohmann::json family_json(const SeparatedFamily& f, int dim);
// Columns index,parameter,x,y,trail.
std::string family_csv(const SeparatedFamily& f);

nlohmann::json discreteness_json(const DiscretenessResult& r, const Space& space);
std::string discreteness_csv(const DiscretenessResult& r);

}  // namespace expanse::app
