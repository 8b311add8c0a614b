#include "ftlsin/powerlaw.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "ftlsin/graph.hpp"

namespace ftlsin {

PowerLawFit rank_frequency_fit(std::vector<double> values) {
  PowerLawFit fit;
  values.erase(std::remove_if(values.begin(), values.end(),
                              [](double v) { return v <= 0; }),
               values.end());
  if (values.size() < 2) return fit;
  std::sort(values.begin(), values.end(), std::greater<>());
  if (values.front() == values.back()) return fit;  // all equal: undefined

  double total = 0.0;
  for (double v : values) total += v;
  std::size_t n95 = 0;
  double cum = 0.0;
  while (n95 < values.size() && cum < 0.95 * total) cum += values[n95++];
  n95 = std::max<std::size_t>(n95, 2);

  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n95; ++i) {
    const double x = std::log(static_cast<double>(i + 1));
    const double y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double n = static_cast<double>(n95);
  const double denom = n * sxx - sx * sx;
  if (denom == 0) return fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  const double var_y = n * syy - sy * sy;
  fit.r_squared =
      var_y == 0 ? 1.0 : (n * sxy - sx * sy) * (n * sxy - sx * sy) / (denom * var_y);
  fit.points_used = n95;
  fit.defined = true;
  return fit;
}

void write_rank_frequency_csv(const std::vector<double>& values,
                              const std::string& path) {
  std::vector<double> sorted(values);
  sorted.erase(std::remove_if(sorted.begin(), sorted.end(),
                              [](double v) { return v <= 0; }),
               sorted.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::ofstream out(path);
  if (!out) throw Error("cannot write csv: " + path);
  out << "rank,frequency\n";
  out.precision(17);
  for (std::size_t i = 0; i < sorted.size(); ++i)
    out << (i + 1) << ',' << sorted[i] << '\n';
  if (!out) throw Error("write failed: " + path);
}

}  // namespace ftlsin
