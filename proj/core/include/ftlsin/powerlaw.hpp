#pragma once

#include <string>
#include <vector>

namespace ftlsin {

struct PowerLawFit {
  bool defined = false;  // false when all values are equal (or < 2 points)
  double slope = 0.0;
  double r_squared = 0.0;
  std::size_t points_used = 0;  // prefix covering the top-95% mass
};

// Rank-frequency diagnostic: values sorted descending, least-squares fit of
// log(value) against log(rank) over the smallest prefix holding 95% of the
// total mass. Zero values are ignored.
PowerLawFit rank_frequency_fit(std::vector<double> values);

// CSV "rank,frequency" of the sorted points, for external plotting.
void write_rank_frequency_csv(const std::vector<double>& values,
                              const std::string& path);

}  // namespace ftlsin
