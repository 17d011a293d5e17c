#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "swb/report.hpp"
#include "swb/smith.hpp"

namespace swb::sset {

/// A simplex in canonical form: a nondegenerate generator with a strictly
/// decreasing degeneracy word applied on top. The word [j1 > j2 > ... > jk]
/// denotes s_j1 s_j2 ... s_jk acting on the generator (rightmost applied
/// first), so the generator lives in degree `degree - k`. Every simplex of a
/// truncated simplicial set has exactly one such expression, which is what
/// makes equality of refs mean equality of simplices.
struct SimplexRef {
  int degree = 0;
  int gen = 0;            ///< index into the generator table at base_degree()
  std::vector<int> word;  ///< strictly decreasing degeneracy indices

  int base_degree() const { return degree - static_cast<int>(word.size()); }
  bool is_degenerate() const { return !word.empty(); }
  auto operator<=>(const SimplexRef&) const = default;
};

/// Apply s_j to a canonical ref, rebalancing the word with the rule
/// s_j s_k = s_{k+1} s_j (j <= k) so it stays strictly decreasing.
SimplexRef apply_degeneracy(SimplexRef x, int j);

/// One nondegenerate generator: a name (unique across the whole object) and
/// its ordered faces d_0 ... d_q, each already in canonical form.
struct Generator {
  std::string name;
  std::vector<SimplexRef> faces;
};

struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StructureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A simplicial set truncated at a fixed top degree. Only nondegenerate
/// simplices are stored; degenerate ones exist implicitly as refs with a
/// nonempty word. Face tables always hold canonical refs, so the simplicial
/// identities are checkable (and checked) by pure ref equality.
class SimplicialSet {
 public:
  explicit SimplicialSet(int dim_cap);

  int dim_cap() const { return dim_cap_; }

  /// Register a generator; faces must refer to already registered ones.
  /// Returns its index within the degree.
  int add_generator(int degree, std::string name, std::vector<SimplexRef> faces = {});

  int count(int degree) const;
  std::vector<int> counts() const;  ///< nondegenerate counts by degree, 0..dim_cap
  const Generator& generator(int degree, int index) const;
  const Generator& generator(const SimplexRef& x) const;  ///< base generator
  std::optional<SimplexRef> find(const std::string& name) const;

  /// d_i in canonical form, valid for degenerate refs as well.
  SimplexRef face(const SimplexRef& x, int i) const;

  /// All degree-q simplices, degenerate ones included, ordered by
  /// (base degree, generator index, word). Throws TruncationError above cap.
  std::vector<SimplexRef> simplices(int q) const;

  /// Same object rebound to a higher truncation bound.
  SimplicialSet with_cap(int dim_cap) const;

  long long euler_characteristic() const;

  std::string describe(const SimplexRef& x) const;  ///< e.g. "s1 s0 e" for reports

 private:
  void check_ref(const SimplexRef& x, int expected_degree) const;

  int dim_cap_ = 0;
  std::vector<std::vector<Generator>> gens_;
  std::map<std::string, std::pair<int, int>> by_name_;
};

/// Standard n-simplex, truncated at `cap` (default n). Generators are the
/// nonempty vertex subsets, named like "0.2.3".
SimplicialSet delta(int n, int cap = -1);

/// delta(n) minus its top generator; truncation bound stays n.
SimplicialSet boundary_delta(int n, int cap = -1);

/// boundary_delta(n) minus the k-th face as well.
SimplicialSet horn(int n, int k, int cap = -1);

/// Coproduct; generator names get "L:" / "R:" prefixes.
SimplicialSet disjoint_union(const SimplicialSet& a, const SimplicialSet& b);

/// Degreewise product in canonical form. Nondegenerate q-simplices are the
/// pairs (s_mu a, s_nu b) with mu and nu disjoint subsets of {0..q-1}; the
/// component tables are kept so points and maps can be split back apart.
class ProductSet {
 public:
  ProductSet(const SimplicialSet& a, const SimplicialSet& b);

  const SimplicialSet& set() const { return set_; }
  const SimplicialSet& left() const { return left_; }
  const SimplicialSet& right() const { return right_; }

  /// Component refs (s_mu a, s_nu b) of a product simplex.
  std::pair<SimplexRef, SimplexRef> split(const SimplexRef& x) const;

  /// Canonical product ref of a same-degree component pair: the shared
  /// degeneracy indices are extracted as the word, the reduced pair is
  /// looked up among the generators.
  SimplexRef pair(const SimplexRef& xa, const SimplexRef& xb) const;

 private:
  SimplicialSet left_, right_;
  SimplicialSet set_{0};
  // per degree: component pair of each product generator
  std::vector<std::vector<std::pair<SimplexRef, SimplexRef>>> comps_;
  std::map<std::pair<SimplexRef, SimplexRef>, int> index_;
};

ProductSet product(const SimplicialSet& a, const SimplicialSet& b);

/// Degreewise assignment of generators; extended to degenerate simplices by
/// naturality. Source and target are borrowed, not owned.
struct SimplicialMap {
  const SimplicialSet* src = nullptr;
  const SimplicialSet* tgt = nullptr;
  std::vector<std::vector<SimplexRef>> images;  // [degree][generator]

  SimplexRef apply(const SimplexRef& x) const;
};

/// Name-matching inclusion src -> sup (every src generator must exist in
/// sup under the same name).
SimplicialMap inclusion(const SimplicialSet& sub, const SimplicialSet& sup);

/// Check d_i f = f d_i on every generator.
VerificationReport check_map(const SimplicialMap& f);

/// Exhaustive simplicial-identity audit: face table shape, canonical-form
/// validity, and d_i d_j = d_{j-1} d_i for i < j on every generator.
VerificationReport check_identities(const SimplicialSet& a);

struct HornFillerResult {
  std::optional<SimplexRef> filler;
  long candidates_examined = 0;
};

/// Search all degree-n simplices of `a` (degenerate ones included) for one
/// whose faces away from slot k match the horn's assignment. `horn_images`
/// holds the images of d_i(top), indexed by i = 0..n with slot k ignored.
/// First candidate in (base degree, generator, word) order wins.
HornFillerResult find_horn_filler(const SimplicialSet& a, int n, int k,
                                  const std::vector<SimplexRef>& horn_images);

/// Connected components of the 1-skeleton: vertex partition, each class
/// sorted, classes ordered by least member.
std::vector<std::vector<int>> pi0(const SimplicialSet& a);

/// Homology of the normalized chain complex in degree q (machine-integer
/// Smith normal form; throws ArithmeticOverflow if entries blow up).
HomologySummary homology(const SimplicialSet& a, int q);

/// Boundary matrix of the normalized complex: rows are (q-1)-generators,
/// columns q-generators, entry = signed count of nondegenerate faces.
IntMat boundary_matrix(const SimplicialSet& a, int q);

/// Check that H restricts to f on the 0 end and to g on the 1 end of the
/// cylinder. `axi` must be product(A, delta(1)) for the common source A of
/// f and g; H maps the cylinder into the common target.
VerificationReport verify_simplicial_homotopy(const ProductSet& axi,
                                              const SimplicialMap& h,
                                              const SimplicialMap& f,
                                              const SimplicialMap& g);

nlohmann::json to_json(const SimplicialSet& a);
SimplicialSet simplicial_from_json(const nlohmann::json& j);

}  // namespace swb::sset
