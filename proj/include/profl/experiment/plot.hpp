#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace profl::experiment {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Deterministic SVG line chart; a series with one point is drawn as a dot.
/// Throws std::invalid_argument when there is nothing to draw.
void write_line_chart(std::ostream& out, const std::string& title, const std::string& x_label,
                      const std::string& y_label, std::span<const Series> series);

}  // namespace profl::experiment
