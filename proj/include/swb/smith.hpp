#pragma once

#include <stdexcept>
#include <vector>

namespace swb {

/// Integer matrix, row major. Entries are machine integers; every arithmetic
/// step in the reduction is overflow-checked and throws on wraparound.
using IntMat = std::vector<std::vector<long long>>;

struct ArithmeticOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SmithResult {
  std::vector<long long> diagonal;  // d1 | d2 | ..., nonnegative
  int rank = 0;                     // number of nonzero diagonal entries
};

/// Smith normal form over the integers.
SmithResult smith_normal_form(IntMat m);

struct HomologySummary {
  int free_rank = 0;
  std::vector<long long> torsion;  // invariant factors > 1
};

/// Homology of one degree of a chain complex of free abelian groups, given
/// the two adjacent boundary matrices: `d_out` maps this degree down,
/// `d_in` maps the degree above into this one. `dim` is the rank of the
/// chain group in this degree.
HomologySummary homology_from_boundaries(int dim, const IntMat& d_out,
                                         const IntMat& d_in);

}  // namespace swb
