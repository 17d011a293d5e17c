#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <vector>

#include "swb/simplicial.hpp"

using namespace swb;
using namespace swb::sset;

namespace {

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

void expect_counts(const SimplicialSet& a, const std::vector<int>& want) {
  REQUIRE(a.dim_cap() + 1 == static_cast<int>(want.size()));
  CHECK(a.counts() == want);
}

// Vertex-list model of a standard simplex: a (possibly degenerate) q-simplex
// of delta(n) is a weakly increasing list of q+1 vertices. Face deletes a
// position, degeneracy duplicates one, and the canonical word of a list is
// the descending set of plateau positions. This gives an independent oracle
// for the canonical-form arithmetic.
using List = std::vector<int>;

List to_list(const SimplicialSet& d, const SimplexRef& r) {
  List verts;
  std::stringstream ss(d.generator(r).name);
  std::string tok;
  while (std::getline(ss, tok, '.')) verts.push_back(std::stoi(tok));
  for (auto it = r.word.rbegin(); it != r.word.rend(); ++it)
    verts.insert(verts.begin() + *it, verts[*it]);
  return verts;
}

SimplexRef from_list(const SimplicialSet& d, const List& l) {
  List dedup;
  std::vector<int> word;
  for (std::size_t j = 0; j < l.size(); ++j) {
    if (j + 1 < l.size() && l[j] == l[j + 1]) word.push_back(static_cast<int>(j));
    if (dedup.empty() || dedup.back() != l[j]) dedup.push_back(l[j]);
  }
  std::sort(word.rbegin(), word.rend());
  std::string name;
  for (std::size_t i = 0; i < dedup.size(); ++i)
    name += (i ? "." : "") + std::to_string(dedup[i]);
  auto base = d.find(name);
  REQUIRE(base.has_value());
  return SimplexRef{static_cast<int>(l.size()) - 1, base->gen, word};
}

}  // namespace

TEST_CASE("standard simplices and subobjects have the expected generator counts") {
  expect_counts(delta(2), {3, 3, 1});
  expect_counts(delta(3), {4, 6, 4, 1});
  expect_counts(boundary_delta(3), {4, 6, 4, 0});
  expect_counts(boundary_delta(2), {3, 3, 0});
  expect_counts(horn(3, 0), {4, 6, 3, 0});
  expect_counts(horn(2, 1), {3, 2, 0});
  expect_counts(horn(1, 0), {1, 0});

  SUBCASE("generator counts match binomials") {
    for (int n = 1; n <= 4; ++n) {
      const auto c = delta(n).counts();
      for (int q = 0; q <= n; ++q) CHECK(c[q] == binom(n + 1, q + 1));
    }
  }

  SUBCASE("horn keeps exactly the faces through the horn vertex") {
    const auto h = horn(3, 2);
    CHECK(h.find("0.1.2").has_value());
    CHECK(h.find("1.2.3").has_value());
    CHECK(h.find("0.2.3").has_value());
    CHECK_FALSE(h.find("0.1.3").has_value());
    CHECK_FALSE(h.find("0.1.2.3").has_value());
  }

  SUBCASE("dimension bound is enforced") {
    CHECK_THROWS_AS(delta(3, 2), TruncationError);
    CHECK_THROWS_AS((void)delta(2).simplices(5), TruncationError);
  }
}

TEST_CASE("face and degeneracy arithmetic agrees with the vertex-list model") {
  const auto d = delta(3);
  for (int q = 1; q <= 3; ++q)
    for (const auto& r : d.simplices(q)) {
      const List l = to_list(d, r);
      for (int i = 0; i <= q; ++i) {
        List li = l;
        li.erase(li.begin() + i);
        CHECK(d.face(r, i) == from_list(d, li));
      }
    }
  for (int q = 0; q <= 2; ++q)
    for (const auto& r : d.simplices(q)) {
      const List l = to_list(d, r);
      for (int j = 0; j <= q; ++j) {
        List lj = l;
        lj.insert(lj.begin() + j, lj[j]);
        CHECK(apply_degeneracy(r, j) == from_list(d, lj));
      }
    }
}

TEST_CASE("enumeration of truncated simplex lists counts degeneracies by binomials") {
  const auto d = boundary_delta(2);
  for (int q = 0; q <= 2; ++q) {
    long long want = 0;
    for (int b = 0; b <= q; ++b) want += d.count(b) * binom(q, q - b);
    CHECK(static_cast<long long>(d.simplices(q).size()) == want);
  }
}

TEST_CASE("simplicial identities hold for the library models and fail when corrupted") {
  for (int n = 1; n <= 4; ++n) {
    CHECK(check_identities(delta(n)).pass);
    CHECK(check_identities(boundary_delta(n)).pass);
    for (int k = 0; k <= n; ++k) CHECK(check_identities(horn(n, k)).pass);
  }

  SUBCASE("a transposed face table is rejected") {
    SimplicialSet bad(2);
    bad.add_generator(0, "a");
    bad.add_generator(0, "b");
    bad.add_generator(0, "c");
    const SimplexRef va{0, 0, {}}, vb{0, 1, {}}, vc{0, 2, {}};
    bad.add_generator(1, "ab", {vb, va});
    bad.add_generator(1, "ac", {vc, va});
    bad.add_generator(1, "bc", {vc, vb});
    const SimplexRef eab{1, 0, {}}, eac{1, 1, {}}, ebc{1, 2, {}};
    bad.add_generator(2, "t", {eab, eac, ebc});  // should be {ebc, eac, eab}
    const auto rep = check_identities(bad);
    CHECK_FALSE(rep.pass);
    CHECK_FALSE(rep.failures.empty());
  }

  SUBCASE("structural errors are caught at insertion") {
    SimplicialSet s(1);
    s.add_generator(0, "v");
    CHECK_THROWS_AS(s.add_generator(0, "v"), StructureError);
    CHECK_THROWS_AS(s.add_generator(1, "e", {SimplexRef{0, 0, {}}}), StructureError);
    CHECK_THROWS_AS(s.add_generator(1, "e", {SimplexRef{0, 0, {}}, SimplexRef{0, 3, {}}}),
                    StructureError);
    CHECK_THROWS_AS(s.add_generator(2, "t", {}), TruncationError);
  }
}

TEST_CASE("products carry the shuffle decomposition") {
  const auto p = product(delta(1, 2), delta(1, 2));
  expect_counts(p.set(), {4, 5, 2});
  CHECK(check_identities(p.set()).pass);
  CHECK(p.set().euler_characteristic() == 1);

  SUBCASE("counts match the shuffle formula") {
    const auto a = delta(1, 3), b = delta(2, 3);
    const auto pr = product(a, b);
    CHECK(check_identities(pr.set()).pass);
    for (int q = 0; q <= 3; ++q) {
      long long want = 0;
      for (int pp = 0; pp <= q; ++pp)
        for (int rr = 0; rr <= q; ++rr)
          want += a.count(pp) * b.count(rr) * binom(q, q - pp) * binom(pp, q - rr);
      CHECK(pr.set().count(q) == want);
    }
    CHECK(pr.set().count(3) == 3);
    CHECK(pr.set().euler_characteristic() ==
          a.euler_characteristic() * b.euler_characteristic());
  }

  SUBCASE("split and pair are mutually inverse") {
    for (int q = 0; q <= 2; ++q)
      for (const auto& r : p.set().simplices(q)) {
        const auto [xa, xb] = p.split(r);
        CHECK(xa.degree == q);
        CHECK(xb.degree == q);
        CHECK(p.pair(xa, xb) == r);
      }
  }

  SUBCASE("pair strips shared degeneracies") {
    // (s0 edge, s1 s0 vertex) share s0, so the pair is s0 of (edge, s0 vertex)
    const SimplexRef edge{1, 0, {}}, v0{0, 0, {}};
    const auto xa = apply_degeneracy(edge, 0);
    const auto xb = apply_degeneracy(apply_degeneracy(v0, 0), 1);
    CHECK(xb.word == std::vector<int>{1, 0});
    const auto r = p.pair(xa, xb);
    CHECK(r.word == std::vector<int>{0});
    CHECK(r.base_degree() == 1);
    const auto back = p.split(r);
    CHECK(back.first == xa);
    CHECK(back.second == xb);
  }

  SUBCASE("factors must share a truncation bound") {
    CHECK_THROWS_AS(product(delta(1, 1), delta(1, 2)), StructureError);
  }
}

TEST_CASE("inclusions and simplicial maps commute with faces") {
  const auto d = delta(2);
  const auto b = boundary_delta(2, 2);
  const auto inc = inclusion(b, d);
  CHECK(check_map(inc).pass);

  SUBCASE("a misdirected edge image is detected") {
    SimplicialMap f = inc;
    f.images[1][0] = f.images[1][1];  // send edge 0.1 to edge 0.2
    CHECK_FALSE(check_map(f).pass);
  }
}

TEST_CASE("horn filling in a simplex finds the missing cell") {
  SUBCASE("the inner horn of the triangle fills") {
    const auto d = delta(2);
    const SimplexRef top{2, 0, {}};
    const std::vector<SimplexRef> images{d.face(top, 0), SimplexRef{}, d.face(top, 2)};
    const auto res = find_horn_filler(d, 2, 1, images);
    REQUIRE(res.filler.has_value());
    CHECK(*res.filler == top);
    CHECK(d.face(*res.filler, 0) == images[0]);
    CHECK(d.face(*res.filler, 2) == images[2]);
  }

  SUBCASE("the boundary alone admits no filler") {
    const auto b = boundary_delta(2, 2);
    const std::vector<SimplexRef> images{*b.find("1.2"), SimplexRef{}, *b.find("0.1")};
    const auto res = find_horn_filler(b, 2, 1, images);
    CHECK_FALSE(res.filler.has_value());
    CHECK(res.candidates_examined == 9);  // 3 + 3*2 + 0 candidates at degree two
  }

  SUBCASE("constant horns fill degenerately") {
    const auto pt = delta(0, 1);
    const SimplexRef v{0, 0, {}};
    const auto res = find_horn_filler(pt, 1, 0, {SimplexRef{}, v});
    REQUIRE(res.filler.has_value());
    CHECK(res.filler->is_degenerate());
    CHECK(pt.face(*res.filler, 1) == v);
  }
}

TEST_CASE("path components via edges") {
  const auto two = disjoint_union(delta(1), delta(1));
  CHECK(pi0(two).size() == 2);
  CHECK(pi0(delta(3)).size() == 1);
  CHECK(pi0(boundary_delta(2)).size() == 1);

  SUBCASE("union preserves identities and prefixes names") {
    CHECK(check_identities(two).pass);
    CHECK(two.find("L:0.1").has_value());
    CHECK(two.find("R:0.1").has_value());
  }
}

TEST_CASE("integer homology of spheres and disks") {
  for (int n = 1; n <= 3; ++n) {
    const auto d = delta(n);
    CHECK(homology(d, 0).free_rank == 1);
    for (int q = 1; q <= n; ++q) {
      const auto h = homology(d, q);
      CHECK(h.free_rank == 0);
      CHECK(h.torsion.empty());
    }
  }
  for (int n = 2; n <= 3; ++n) {
    const auto s = boundary_delta(n);
    CHECK(homology(s, 0).free_rank == 1);
    const auto top = homology(s, n - 1);
    CHECK(top.free_rank == 1);
    CHECK(top.torsion.empty());
    for (int q = 1; q < n - 1; ++q) CHECK(homology(s, q).free_rank == 0);
  }

  SUBCASE("boundary matrix of the triangle boundary") {
    const auto s = boundary_delta(2);
    const auto m = boundary_matrix(s, 1);
    REQUIRE(m.size() == 3);
    REQUIRE(m[0].size() == 3);
    // columns: edges 0.1, 0.2, 1.2 with d0 - d1
    const IntMat want{{-1, -1, 0}, {1, 0, -1}, {0, 1, 1}};
    CHECK(m == want);
  }
}

TEST_CASE("prism ends of a simplicial homotopy") {
  const auto a = delta(0, 1);
  const auto interval = delta(1);
  const auto b = delta(1);
  const auto prod = product(a, interval);

  SimplicialMap f{&a, &b, {{*b.find("0")}}};
  SimplicialMap g{&a, &b, {{*b.find("1")}}};
  SimplicialMap h;
  h.src = &prod.set();
  h.tgt = &b;
  h.images.resize(2);
  for (int gi = 0; gi < prod.set().count(0); ++gi) {
    const auto [xa, xb] = prod.split(SimplexRef{0, gi, {}});
    h.images[0].push_back(*b.find(interval.generator(xb).name));
  }
  h.images[1].push_back(*b.find("0.1"));
  CHECK(check_map(h).pass);
  CHECK(verify_simplicial_homotopy(prod, h, f, g).pass);

  SUBCASE("swapped ends are detected") {
    CHECK_FALSE(verify_simplicial_homotopy(prod, h, g, f).pass);
  }
}

TEST_CASE("serialization round trip") {
  const auto s = boundary_delta(3);
  const auto j = to_json(s);
  const auto back = simplicial_from_json(j);
  CHECK(back.counts() == s.counts());
  CHECK(check_identities(back).pass);
  CHECK(to_json(back) == j);

  SUBCASE("unknown face targets are rejected") {
    auto broken = j;
    broken["faces"]["0.1.2"][0]["gen"] = "9.9";
    CHECK_THROWS_AS(simplicial_from_json(broken), StructureError);
  }

  SUBCASE("degree mismatches are rejected") {
    auto broken = j;
    broken["faces"]["0.1.2"][0]["gen"] = "3";
    CHECK_THROWS_AS(simplicial_from_json(broken), StructureError);
  }
}
