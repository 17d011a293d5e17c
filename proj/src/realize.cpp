#include "swb/realize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace swb::realize {

namespace {

constexpr double kSnap = 1e-12;

using Mat = std::vector<std::vector<double>>;

Mat matmul(const Mat& a, const Mat& b) {
  std::size_t rows = a.size(), inner = b.size(), cols = b.front().size();
  Mat out(rows, std::vector<double>(cols, 0.0));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t k = 0; k < inner; ++k) {
      double av = a[r][k];
      if (av == 0.0) continue;
      for (std::size_t c = 0; c < cols; ++c) out[r][c] += av * b[k][c];
    }
  return out;
}

std::vector<double> apply_matrix(const Mat& m, const std::vector<double>& x) {
  std::vector<double> out(m.size(), 0.0);
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < x.size(); ++c) out[r] += m[r][c] * x[c];
  return out;
}

// q rows, q+1 columns: drops coordinate i.
Mat delete_slot(int q, int i) {
  Mat m(q, std::vector<double>(q + 1, 0.0));
  for (int r = 0; r < q; ++r) m[r][r + (r >= i ? 1 : 0)] = 1.0;
  return m;
}

// rows rows, rows+1 columns: sums coordinates j and j+1 into slot j.
Mat merge_at(int rows, int j) {
  Mat m(rows, std::vector<double>(rows + 1, 0.0));
  for (int r = 0; r < rows; ++r) m[r][r + (r > j ? 1 : 0)] = 1.0;
  m[j][j + 1] = 1.0;
  return m;
}

// Affine map from the slice {x_slot = 0} of a degree-q chart onto the chart
// of the face's base generator: delete the slot, then contract the face's
// degeneracy word outermost letter first.
Mat face_matrix(int q, int slot, const std::vector<int>& word) {
  Mat m = delete_slot(q, slot);
  int rows = q;
  for (int j : word) {
    m = matmul(merge_at(rows - 1, j), m);
    rows -= 1;
  }
  return m;
}

void validate_ref(const sset::SimplicialSet& a, const SimplexRef& x) {
  int base = x.base_degree();
  if (base < 0 || base > a.dim_cap() || x.gen < 0 || x.gen >= a.count(base))
    throw sset::StructureError("point names no generator of the complex");
  int k = static_cast<int>(x.word.size());
  for (int t = 0; t < k; ++t) {
    int j = x.word[t];
    if (j < 0 || j > base + (k - 1 - t))
      throw sset::StructureError("degeneracy word out of range");
    if (t + 1 < k && x.word[t + 1] >= j)
      throw sset::StructureError("degeneracy word must strictly decrease");
  }
}

void snap_zeros(std::vector<double>& v) {
  for (double& x : v)
    if (std::abs(x) <= kSnap) x = 0.0;
}

// m+1 chart coordinates summing to 1, mixed-sign when asked.
std::vector<double> chart_point(Rng& rng, int m, bool mixed) {
  if (m == 0) return {1.0};
  for (;;) {
    auto v = mixed ? rng.box(m + 1, -1.0, 2.0) : rng.box(m + 1, 0.15, 2.0);
    double s = 0.0;
    for (double x : v) s += x;
    if (std::abs(s) < 0.5) continue;
    for (double& x : v) x /= s;
    return v;
  }
}

// Right inverse of the facet's coordinate contraction: re-inserts a zero for
// every degeneracy letter, innermost first, then one for the slice slot.
std::vector<double> seam_lift(const std::vector<double>& y,
                              const std::vector<int>& word, int slot) {
  std::vector<double> lift = y;
  for (auto it = word.rbegin(); it != word.rend(); ++it)
    lift.insert(lift.begin() + *it + 1, 0.0);
  lift.insert(lift.begin() + slot, 0.0);
  return lift;
}

}  // namespace

bool is_canonical(const RealPoint& p) {
  if (p.cell.is_degenerate()) return false;
  if (static_cast<int>(p.coords.size()) != p.cell.degree + 1) return false;
  return std::find(p.coords.begin(), p.coords.end(), 0.0) == p.coords.end();
}

CellComplex::CellComplex(sset::SimplicialSet a) : source_(std::move(a)) {
  cells_.resize(source_.dim_cap() + 1);
  for (int q = 0; q <= source_.dim_cap(); ++q) {
    cells_[q].reserve(source_.count(q));
    for (int g = 0; g < source_.count(q); ++g) {
      Cell cell;
      cell.ref = SimplexRef{q, g, {}};
      cell.name = source_.generator(q, g).name;
      if (q > 0) {
        for (int i = 0; i <= q; ++i) {
          GluedFace gf;
          gf.target = source_.face(cell.ref, i);
          gf.matrix = face_matrix(q, i, gf.target.word);
          cell.faces.push_back(std::move(gf));
        }
      }
      cells_[q].push_back(std::move(cell));
    }
  }
  std::set<SimplexRef> facet_targets;
  for (const auto& layer : cells_)
    for (const Cell& cell : layer)
      for (const GluedFace& gf : cell.faces)
        facet_targets.insert(
            SimplexRef{gf.target.base_degree(), gf.target.gen, {}});
  for (auto& layer : cells_)
    for (Cell& cell : layer) cell.maximal = !facet_targets.contains(cell.ref);
}

int CellComplex::top_dim() const {
  for (int q = static_cast<int>(cells_.size()) - 1; q >= 0; --q)
    if (!cells_[q].empty()) return q;
  return -1;
}

int CellComplex::cell_count(int dim) const {
  if (dim < 0 || dim >= static_cast<int>(cells_.size())) return 0;
  return static_cast<int>(cells_[dim].size());
}

std::vector<int> CellComplex::cell_counts() const {
  std::vector<int> out;
  out.reserve(cells_.size());
  for (const auto& layer : cells_) out.push_back(static_cast<int>(layer.size()));
  return out;
}

const Cell& CellComplex::cell(int dim, int index) const {
  return cells_.at(dim).at(index);
}

const Cell& CellComplex::cell(const SimplexRef& ref) const {
  if (ref.is_degenerate())
    throw sset::StructureError("degenerate references name no cell");
  return cells_.at(ref.degree).at(ref.gen);
}

std::vector<SimplexRef> CellComplex::maximal_cells() const {
  std::vector<SimplexRef> out;
  for (const auto& layer : cells_)
    for (const Cell& cell : layer)
      if (cell.maximal) out.push_back(cell.ref);
  return out;
}

CellComplex realize(const sset::SimplicialSet& a) { return CellComplex(a); }

RealPoint normal_form(const CellComplex& c, RealPoint p) {
  const sset::SimplicialSet& a = c.source();
  validate_ref(a, p.cell);
  if (static_cast<int>(p.coords.size()) != p.cell.degree + 1)
    throw sset::StructureError("coordinate count does not match the degree");
  double s = 0.0;
  for (double x : p.coords) s += x;
  if (std::abs(s - 1.0) > kSnap)
    throw sset::StructureError("chart coordinates must sum to 1");
  snap_zeros(p.coords);
  for (;;) {
    if (p.cell.is_degenerate()) {
      int j = p.cell.word.front();
      p.coords[j] += p.coords[j + 1];
      p.coords.erase(p.coords.begin() + j + 1);
      p.cell.word.erase(p.cell.word.begin());
      p.cell.degree -= 1;
      snap_zeros(p.coords);
      continue;
    }
    auto zero = std::find(p.coords.begin(), p.coords.end(), 0.0);
    if (zero == p.coords.end()) break;
    int slot = static_cast<int>(zero - p.coords.begin());
    p.cell = a.face(p.cell, slot);
    p.coords.erase(zero);
  }
  return p;
}

SeamReport seam_set(const CellComplex& c) {
  std::map<SimplexRef, std::vector<SeamIncidence>> hits;
  for (const SimplexRef& m : c.maximal_cells()) {
    const Cell& cell = c.cell(m);
    for (int slot = 0; slot < static_cast<int>(cell.faces.size()); ++slot) {
      const auto& t = cell.faces[slot].target;
      hits[SimplexRef{t.base_degree(), t.gen, {}}].push_back(
          SeamIncidence{m, cell.name, slot});
    }
  }
  SeamReport rep;
  rep.counts_by_dim.assign(std::max(c.top_dim(), 0), 0);
  for (auto& [ref, incident] : hits) {
    std::set<SimplexRef> owners;
    for (const auto& inc : incident) owners.insert(inc.maximal);
    if (owners.size() < 2) continue;
    rep.seams.push_back(Seam{ref, c.cell(ref).name, incident});
    rep.counts_by_dim[ref.degree] += 1;
  }
  return rep;
}

std::string SeamReport::to_text() const {
  std::ostringstream out;
  out << seams.size() << " seam(s)";
  for (std::size_t d = 0; d < counts_by_dim.size(); ++d)
    if (counts_by_dim[d] > 0)
      out << ", dim " << d << ": " << counts_by_dim[d];
  out << "\n";
  for (const Seam& s : seams) {
    out << "  " << s.name << " (dim " << s.cell.degree << ") <-";
    for (const auto& inc : s.incident)
      out << " " << inc.name << "@" << inc.slot;
    out << "\n";
  }
  return out.str();
}

nlohmann::json SeamReport::to_json() const {
  nlohmann::json seam_list = nlohmann::json::array();
  for (const Seam& s : seams) {
    nlohmann::json inc = nlohmann::json::array();
    for (const auto& i : s.incident)
      inc.push_back({{"cell", i.name}, {"slot", i.slot}});
    seam_list.push_back(
        {{"cell", s.name}, {"dim", s.cell.degree}, {"incident", inc}});
  }
  return {{"count", total()},
          {"by_dim", counts_by_dim},
          {"seams", seam_list}};
}

std::pair<RealPoint, RealPoint> natural_product_map(const sset::ProductSet& ab,
                                                    const RealPoint& p) {
  auto [xa, xb] = ab.split(p.cell);
  CellComplex ca = realize(ab.left());
  CellComplex cb = realize(ab.right());
  return {normal_form(ca, RealPoint{xa, p.coords}),
          normal_form(cb, RealPoint{xb, p.coords})};
}

VerificationReport check_gluing(const CellComplex& c, Rng rng,
                                int samples_per_slot, int samples_per_seam) {
  VerificationReport rep;
  rep.name = "gluing audit";
  rep.tolerance = 1e-12;

  VerificationReport slices;
  slices.name = "slices";
  slices.tolerance = rep.tolerance;
  Rng slice_rng = rng.sub("slices");
  for (int q = 1; q <= c.top_dim(); ++q) {
    for (int g = 0; g < c.cell_count(q); ++g) {
      const Cell& cell = c.cell(q, g);
      for (int slot = 0; slot <= q; ++slot) {
        const GluedFace& gf = cell.faces[slot];
        SimplexRef base{gf.target.base_degree(), gf.target.gen, {}};
        for (int t = 0; t < samples_per_slot; ++t) {
          auto facet = chart_point(slice_rng, q - 1, t % 2 == 1);
          std::vector<double> x = facet;
          x.insert(x.begin() + slot, 0.0);
          auto via_matrix =
              normal_form(c, RealPoint{base, apply_matrix(gf.matrix, x)});
          auto via_quotient = normal_form(c, RealPoint{cell.ref, x});
          if (via_matrix.cell != via_quotient.cell) {
            slices.fail(cell.name + " slot " + std::to_string(slot) +
                        ": matrix image lands on " +
                        c.source().describe(via_matrix.cell) +
                        " but the quotient gives " +
                        c.source().describe(via_quotient.cell));
            continue;
          }
          double resid = 0.0;
          for (std::size_t i = 0; i < via_matrix.coords.size(); ++i)
            resid = std::max(resid, std::abs(via_matrix.coords[i] -
                                             via_quotient.coords[i]));
          slices.sample(resid, x, cell.name + " slot " + std::to_string(slot));
        }
      }
    }
  }
  if (c.top_dim() < 1) slices.details["note"] = "no positive-dimensional cells";
  rep.absorb(slices);

  VerificationReport seams;
  seams.name = "seams";
  seams.tolerance = rep.tolerance;
  Rng seam_rng = rng.sub("seams");
  SeamReport strata = seam_set(c);
  for (const Seam& seam : strata.seams) {
    for (int t = 0; t < samples_per_seam; ++t) {
      auto y = chart_point(seam_rng, seam.cell.degree, t % 2 == 1);
      RealPoint target = normal_form(c, RealPoint{seam.cell, y});
      for (const auto& inc : seam.incident) {
        const GluedFace& gf = c.cell(inc.maximal).faces[inc.slot];
        auto lifted = seam_lift(y, gf.target.word, inc.slot);
        auto back = normal_form(c, RealPoint{inc.maximal, lifted});
        if (back.cell != target.cell) {
          seams.fail(seam.name + " via " + inc.name + "@" +
                     std::to_string(inc.slot) + " lands on " +
                     c.source().describe(back.cell));
          continue;
        }
        double resid = 0.0;
        for (std::size_t i = 0; i < back.coords.size(); ++i)
          resid = std::max(resid, std::abs(back.coords[i] - target.coords[i]));
        seams.sample(resid, y,
                     seam.name + " via " + inc.name + "@" +
                         std::to_string(inc.slot));
      }
    }
  }
  seams.details["seam_count"] = strata.total();
  rep.absorb(seams);
  return rep;
}

VerificationReport boundary_lines_pairwise_meet(const CellComplex& c) {
  VerificationReport rep;
  rep.name = "2-cell boundary lines meet pairwise";
  rep.tolerance = 1e-12;
  int two_cells = c.cell_count(2);
  rep.details["two_cells"] = two_cells;
  if (two_cells == 0) {
    rep.details["note"] = "no 2-cells";
    return rep;
  }
  for (int g = 0; g < two_cells; ++g) {
    const Cell& cell = c.cell(2, g);
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        // Direction of the boundary line {x_i = 0} inside the chart plane:
        // difference of the two basis points it passes through.
        auto direction = [](int zero) {
          std::vector<double> d(3, 0.0);
          int seen = 0;
          for (int t = 0; t < 3; ++t)
            if (t != zero) d[t] = (seen++ == 0) ? 1.0 : -1.0;
          return d;
        };
        auto di = direction(i), dj = direction(j);
        double cx = di[1] * dj[2] - di[2] * dj[1];
        double cy = di[2] * dj[0] - di[0] * dj[2];
        double cz = di[0] * dj[1] - di[1] * dj[0];
        double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
        if (cross < 1e-9) {
          rep.fail(cell.name + ": boundary lines " + std::to_string(i) +
                   " and " + std::to_string(j) + " are parallel");
          continue;
        }
        std::vector<double> meet(3, 0.0);
        meet[3 - i - j] = 1.0;
        double resid =
            std::abs(meet[i]) + std::abs(meet[j]) +
            std::abs(meet[0] + meet[1] + meet[2] - 1.0);
        rep.sample(resid, meet,
                   cell.name + " slots " + std::to_string(i) + "," +
                       std::to_string(j));
      }
    }
  }
  return rep;
}

nlohmann::json to_json(const CellComplex& c) {
  nlohmann::json cells = nlohmann::json::array();
  for (int q = 0; q <= c.top_dim(); ++q) {
    for (int g = 0; g < c.cell_count(q); ++g) {
      const Cell& cell = c.cell(q, g);
      nlohmann::json faces = nlohmann::json::array();
      for (const GluedFace& gf : cell.faces)
        faces.push_back({{"target", c.source().describe(gf.target)},
                         {"word", gf.target.word},
                         {"matrix", gf.matrix}});
      cells.push_back({{"name", cell.name},
                       {"dim", q},
                       {"maximal", cell.maximal},
                       {"faces", faces}});
    }
  }
  return {{"top_dim", c.top_dim()},
          {"cell_counts", c.cell_counts()},
          {"cells", cells}};
}

}  // namespace swb::realize
