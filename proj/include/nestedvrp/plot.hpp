#pragma once

#include <algorithm>
#include <limits>
#include <sstream>
#include <string>

#include "nestedvrp/core.hpp"

namespace nvrp {

// SVG of a solution: dashed drone route, solid truck bridges, shipment arcs
// in a heavier stroke, swap stops colored by side of the observation.
inline std::string render_svg(const Instance& inst, const Solution& s, int size = 800) {
  constexpr double margin = 40.0;
  double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
  double xmax = -xmin, ymax = -xmin;
  for (const auto& l : inst.locations) {
    xmin = std::min(xmin, l.x);
    xmax = std::max(xmax, l.x);
    ymin = std::min(ymin, l.y);
    ymax = std::max(ymax, l.y);
  }
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-9});
  const double scale = (size - 2 * margin) / span;
  auto px = [&](int id) { return margin + (inst.locations[static_cast<std::size_t>(id)].x - xmin) * scale; };
  auto py = [&](int id) { return size - margin - (inst.locations[static_cast<std::size_t>(id)].y - ymin) * scale; };

  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size + 60 << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  os << "<g stroke=\"#1f77b4\" stroke-width=\"1.2\" stroke-dasharray=\"5,4\" fill=\"none\">\n";
  for (std::size_t k = 1; k < s.route.size(); ++k)
    os << "<line x1=\"" << px(s.route[k - 1]) << "\" y1=\"" << py(s.route[k - 1]) << "\" x2=\"" << px(s.route[k])
       << "\" y2=\"" << py(s.route[k]) << "\"/>\n";
  os << "</g>\n";

  os << "<g fill=\"none\">\n";
  for (const auto& u : s.units) {
    const int a = boundary_location(s.route, u.begin);
    const int b = boundary_location(s.route, u.end);
    if (a == b) continue;
    const bool ship = u.kind == UnitKind::Shipment;
    os << "<line x1=\"" << px(a) << "\" y1=\"" << py(a) << "\" x2=\"" << px(b) << "\" y2=\"" << py(b)
       << "\" stroke=\"" << (ship ? "#d62728" : "#333333") << "\" stroke-width=\"" << (ship ? 3.5 : 1.8) << "\"/>\n";
  }
  os << "</g>\n";

  for (const auto& l : inst.locations)
    os << "<circle cx=\"" << px(l.id) << "\" cy=\"" << py(l.id) << "\" r=\"" << (l.id == 0 ? 6 : 3.5)
       << "\" fill=\"" << (l.id == 0 ? "black" : "#999999") << "\"/>\n";
  for (const auto& stop : swap_stops(s)) {
    os << "<circle cx=\"" << px(stop.location) << "\" cy=\"" << py(stop.location) << "\" r=\"7\" fill=\"none\""
       << " stroke=\"" << (stop.before_observation ? "#2ca02c" : "#ff7f0e") << "\" stroke-width=\"2\"/>\n";
  }

  const double ly = size + 20;
  os << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<line x1=\"20\" y1=\"" << ly << "\" x2=\"50\" y2=\"" << ly
     << "\" stroke=\"#1f77b4\" stroke-dasharray=\"5,4\"/><text x=\"55\" y=\"" << ly + 4 << "\">drone route</text>\n";
  os << "<line x1=\"150\" y1=\"" << ly << "\" x2=\"180\" y2=\"" << ly
     << "\" stroke=\"#333333\" stroke-width=\"1.8\"/><text x=\"185\" y=\"" << ly + 4 << "\">truck route</text>\n";
  os << "<line x1=\"280\" y1=\"" << ly << "\" x2=\"310\" y2=\"" << ly
     << "\" stroke=\"#d62728\" stroke-width=\"3.5\"/><text x=\"315\" y=\"" << ly + 4 << "\">shipment</text>\n";
  os << "<circle cx=\"420\" cy=\"" << ly << "\" r=\"6\" fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"2\"/><text x=\"430\" y=\""
     << ly + 4 << "\">swap before observation</text>\n";
  os << "<circle cx=\"600\" cy=\"" << ly << "\" r=\"6\" fill=\"none\" stroke=\"#ff7f0e\" stroke-width=\"2\"/><text x=\"610\" y=\""
     << ly + 4 << "\">swap after observation</text>\n";
  os << "<text x=\"20\" y=\"" << ly + 28 << "\">makespan " << s.makespan << " s, " << s.units.size()
     << " units</text>\n";
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace nvrp
