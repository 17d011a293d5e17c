#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "swb/report.hpp"
#include "swb/rng.hpp"
#include "swb/simplicial.hpp"

namespace swb::realize {

using sset::SimplexRef;

/// A point of the realized complex: a simplex reference together with chart
/// coordinates summing to 1. Charts are whole affine hyperplanes, so entries
/// of either sign are valid interior data; only exact zeros mark the face
/// locus. The point is canonical when the cell is nondegenerate and no
/// coordinate is exactly 0.
struct RealPoint {
  SimplexRef cell;
  std::vector<double> coords;  ///< size degree+1
};

bool is_canonical(const RealPoint& p);

/// One glued facet of a cell: the face in canonical form plus the affine
/// matrix carrying chart coordinates into the chart of the face's base
/// generator. Row-major, (base degree+1) rows by (cell degree+1) columns;
/// it is meant to act on points whose slot coordinate is 0, and its column
/// for that slot is zero.
struct GluedFace {
  SimplexRef target;
  std::vector<std::vector<double>> matrix;
};

struct Cell {
  SimplexRef ref;  ///< nondegenerate, word empty
  std::string name;
  bool maximal = false;
  std::vector<GluedFace> faces;  ///< indexed by face slot; empty for 0-cells
};

/// The realization of a truncated simplicial set: one affine cell per
/// nondegenerate generator, glued along the face tables. A cell is maximal
/// when it is nobody else's glued facet.
class CellComplex {
 public:
  explicit CellComplex(sset::SimplicialSet a);

  const sset::SimplicialSet& source() const { return source_; }
  int top_dim() const;  ///< largest dimension holding a cell; -1 if none
  int cell_count(int dim) const;
  std::vector<int> cell_counts() const;
  const Cell& cell(int dim, int index) const;
  const Cell& cell(const SimplexRef& ref) const;
  std::vector<SimplexRef> maximal_cells() const;  ///< ordered by (dim, index)

 private:
  sset::SimplicialSet source_;
  std::vector<std::vector<Cell>> cells_;
};

CellComplex realize(const sset::SimplicialSet& a);

/// Canonical representative of the class of p. Coordinates within 1e-12 of 0
/// snap to exact 0 first. Each degeneracy letter is contracted by summing the
/// two coordinates it identifies; each exact-zero coordinate is deleted while
/// the cell passes to the corresponding face; this repeats until the point is
/// canonical. Bitwise idempotent. The cell reference may be degenerate and
/// may sit above the source's truncation bound as long as its base generator
/// exists. Throws StructureError when the coordinates do not sum to 1 within
/// 1e-12 or the reference is malformed.
RealPoint normal_form(const CellComplex& c, RealPoint p);

struct SeamIncidence {
  SimplexRef maximal;
  std::string name;
  int slot = 0;
};

struct Seam {
  SimplexRef cell;
  std::string name;
  std::vector<SeamIncidence> incident;
};

/// Cells that are glued facets of at least two distinct maximal cells, with
/// the full incidence lists.
struct SeamReport {
  std::vector<Seam> seams;         ///< ordered by (dimension, generator)
  std::vector<int> counts_by_dim;  ///< dimensions 0 .. top_dim-1

  int total() const { return static_cast<int>(seams.size()); }
  std::string to_text() const;
  nlohmann::json to_json() const;
};

SeamReport seam_set(const CellComplex& c);

/// Images of a point of the realized product under the two projections, each
/// in normal form. Any representative of the class gives the same images;
/// the point's cell may be degenerate.
std::pair<RealPoint, RealPoint> natural_product_map(const sset::ProductSet& ab,
                                                    const RealPoint& p);

/// Sampled audit of the gluing data. Substream "slices": random points on
/// every facet slice, pushed through the stored matrix, match the normal
/// form of the ambient point. Substream "seams": random points on every seam
/// lift into each incident maximal chart and normal-form back to the same
/// class.
VerificationReport check_gluing(const CellComplex& c, Rng rng,
                                int samples_per_slot = 40,
                                int samples_per_seam = 1000);

/// Any two boundary lines of an affine 2-cell chart meet in a point; the
/// report records every meet point. Gluing strata of 2-cells therefore never
/// run parallel, which is what a plane crossed with a doubled-edge complex
/// would need.
VerificationReport boundary_lines_pairwise_meet(const CellComplex& c);

nlohmann::json to_json(const CellComplex& c);

}  // namespace swb::realize
