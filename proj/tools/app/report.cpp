#include "report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace expanse::app {

using nlohmann::json;

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json point_json(const Space& space, const Point& p) {
  if (space.dim() == 1) return json::array({p.x()});
  return json::array({p.x(), p.y()});
}

json entropy_json(const EntropyReport& r) {
  json j;
  j["epsilons"] = r.epsilons;
  j["n_max"] = r.n_max;
  j["tail_window"] = r.tail_window;
  j["sample_count"] = r.sample_count;
  j["counts"] = r.counts;
  j["raw_counts"] = r.raw_counts;
  j["slopes"] = r.slopes;
  std::vector<bool> sat(r.saturated_by_eps.begin(), r.saturated_by_eps.end());
  j["saturated_by_eps"] = sat;
  j["saturated"] = r.saturated;
  j["estimate"] = r.estimate;
  return j;
}

std::string entropy_csv(const EntropyReport& r) {
  std::string out = "epsilon,n,count\n";
  for (std::size_t k = 0; k < r.epsilons.size(); ++k) {
    for (std::size_t n = 0; n < r.counts[k].size(); ++n) {
      out += format_real(r.epsilons[k]) + "," + std::to_string(n) + "," +
             std::to_string(r.counts[k][n]) + "\n";
    }
  }
  return out;
}

std::string entropy_svg(const EntropyReport& r, const std::string& title) {
  constexpr double W = 640, H = 400, M = 50;
  double top = 0.0;
  for (const auto& row : r.counts) {
    for (std::size_t c : row) top = std::max(top, std::log(static_cast<double>(std::max<std::size_t>(c, 1))));
  }
  if (top <= 0.0) top = 1.0;
  const double nx = std::max(1, r.n_max);
  auto px = [&](double n) { return M + (W - 2 * M) * n / nx; };
  auto py = [&](double v) { return H - M - (H - 2 * M) * v / top; };
  static const char* const colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                       "#ff7f0e", "#8c564b", "#17becf"};
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\">\n";
  s << "<text x=\"" << M << "\" y=\"20\" font-size=\"14\">" << title << "</text>\n";
  s << "<line x1=\"" << M << "\" y1=\"" << H - M << "\" x2=\"" << W - M << "\" y2=\""
    << H - M << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << M << "\" y1=\"" << M << "\" x2=\"" << M << "\" y2=\"" << H - M
    << "\" stroke=\"black\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" font-size=\"12\">n</text>\n";
  s << "<text x=\"8\" y=\"" << H / 2 << "\" font-size=\"12\">log S</text>\n";
  for (std::size_t k = 0; k < r.counts.size(); ++k) {
    const char* color = colors[k % std::size(colors)];
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (std::size_t n = 0; n < r.counts[k].size(); ++n) {
      const double v = std::log(static_cast<double>(std::max<std::size_t>(r.counts[k][n], 1)));
      s << format_real(px(static_cast<double>(n))) << "," << format_real(py(v)) << " ";
    }
    s << "\"/>\n";
    s << "<text x=\"" << W - M + 4 << "\" y=\"" << M + 16 * static_cast<double>(k)
      << "\" font-size=\"11\" fill=\"" << color << "\">eps=" << format_real(r.epsilons[k])
      << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

json scan_json(const ScanReport& r, const Space& space) {
  json j;
  j["e"] = r.e;
  j["delta"] = r.delta;
  j["n_max"] = r.n_max;
  j["pairs_tested"] = r.pairs_tested;
  j["pairs_separated"] = r.pairs_separated;
  j["separated_fraction"] = r.separated_fraction;
  j["N_observed"] = r.n_observed ? json(*r.n_observed) : json("unbounded within n_max");
  if (r.worst_pair) {
    j["worst_pair"] = {{"index", *r.worst_index},
                       {"x", point_json(space, r.worst_pair->x)},
                       {"y", point_json(space, r.worst_pair->y)},
                       {"radius", r.worst_radius ? json(*r.worst_radius) : json("none")}};
  } else {
    j["worst_pair"] = nullptr;
  }
  return j;
}

std::string scan_csv(const ScanReport& r, std::span<const PointPair> pairs,
                     const Space& space) {
  std::string out = "index,distance,radius\n";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out += std::to_string(i) + "," + format_real(distance(space, pairs[i].x, pairs[i].y)) +
           "," + (r.radii[i] ? std::to_string(*r.radii[i]) : std::string()) + "\n";
  }
  return out;
}

json family_json(const SeparatedFamily& f, int dim) {
  json j;
  j["depth"] = f.depth;
  j["e"] = f.e;
  j["N"] = f.N;
  j["threshold"] = f.threshold;
  j["radius"] = f.radius;
  j["point_count"] = f.points.size();
  json pts = json::array();
  for (const Point& p : f.points) {
    if (dim == 2) pts.push_back({p.x(), p.y()});
    else pts.push_back({p.x()});
  }
  j["points"] = pts;
  j["parameters"] = f.parameters;
  j["trails"] = f.trails;
  j["pairs_checked"] = f.pairs_checked;
  j["pairs_verified"] = f.pairs_verified;
  j["verification"] = f.verified() ? "passed" : "failed";
  j["entropy_lower_bound"] = f.N > 0 ? std::log(2.0) / f.N : 0.0;
  return j;
}

std::string family_csv(const SeparatedFamily& f) {
  std::string out = "index,parameter,x,y,trail\n";
  for (std::size_t i = 0; i < f.points.size(); ++i) {
    std::string trail;
    for (const std::string& t : f.trails[i]) {
      if (!trail.empty()) trail += " | ";
      trail += t;
    }
    out += std::to_string(i) + "," + format_real(f.parameters[i]) + "," +
           format_real(f.points[i].x()) + "," + format_real(f.points[i].y()) + ",\"" +
           trail + "\"\n";
  }
  return out;
}

json discreteness_json(const DiscretenessResult& r, const Space& space) {
  json j;
  j["d0"] = r.d0;
  j["defect"] = std::max(r.defect_psi, r.defect_psi_prime);
  j["defect_psi"] = r.defect_psi;
  j["defect_psi_prime"] = r.defect_psi_prime;
  j["differing_pairs"] = r.differing_pairs;
  switch (r.status) {
    case WitnessStatus::witness:
      j["status"] = "witness";
      j["witness"] = {{"g", r.generator},
                      {"sample_index", r.sample_index},
                      {"x", point_json(space, r.x)},
                      {"h", r.h.to_string()},
                      {"distance", r.distance}};
      break;
    case WitnessStatus::identical_on_samples:
      j["status"] = "identical on samples";
      j["witness"] = nullptr;
      break;
    case WitnessStatus::no_witness:
      j["status"] = "no witness within n_max";
      j["witness"] = nullptr;
      break;
  }
  return j;
}

std::string discreteness_csv(const DiscretenessResult& r) {
  std::string out = "quantity,value\n";
  out += "d0," + format_real(r.d0) + "\n";
  out += "defect_psi," + format_real(r.defect_psi) + "\n";
  out += "defect_psi_prime," + format_real(r.defect_psi_prime) + "\n";
  out += "differing_pairs," + std::to_string(r.differing_pairs) + "\n";
  if (r.status == WitnessStatus::witness) {
    out += "witness_generator," + std::to_string(r.generator) + "\n";
    out += "witness_sample," + std::to_string(r.sample_index) + "\n";
    out += "witness_length," + std::to_string(r.h.length()) + "\n";
    out += "witness_distance," + format_real(r.distance) + "\n";
  }
  return out;
}

}  // namespace expanse::app
