#include "swb/simplicial.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace swb::sset {

namespace {

std::string word_prefix(const std::vector<int>& w) {
  std::string s;
  for (int j : w) s += "s" + std::to_string(j);
  return s;
}

/// k-subsets of {0..q-1} as strictly decreasing vectors, enumerated in
/// increasing bitmask order (deterministic).
std::vector<std::vector<int>> decreasing_words(int q, int k) {
  std::vector<std::vector<int>> out;
  if (k == 0) {
    out.push_back({});
    return out;
  }
  if (k > q) return out;
  for (unsigned mask = 0; mask < (1u << q); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    std::vector<int> w;
    for (int j = q - 1; j >= 0; --j)
      if (mask & (1u << j)) w.push_back(j);
    out.push_back(std::move(w));
  }
  return out;
}

/// Remove one occurrence of j from a decreasing word, decrementing the
/// entries above it: the inverse of pulling s_j out in front.
std::vector<int> strip_index(const std::vector<int>& w, int j) {
  std::vector<int> out;
  out.reserve(w.size() - 1);
  for (int v : w) {
    if (v == j) continue;
    out.push_back(v > j ? v - 1 : v);
  }
  return out;
}

}  // namespace

SimplexRef apply_degeneracy(SimplexRef x, int j) {
  if (j < 0 || j > x.degree)
    throw StructureError("degeneracy index out of range");
  auto& w = x.word;
  std::size_t pos = 0;
  int jj = j;
  while (pos < w.size() && jj <= w[pos]) {
    w[pos] += 1;
    ++pos;
  }
  w.insert(w.begin() + pos, jj);
  x.degree += 1;
  return x;
}

SimplicialSet::SimplicialSet(int dim_cap) : dim_cap_(dim_cap) {
  if (dim_cap < 0) throw StructureError("negative truncation bound");
  gens_.resize(dim_cap + 1);
}

void SimplicialSet::check_ref(const SimplexRef& x, int expected_degree) const {
  if (x.degree != expected_degree) throw StructureError("ref degree mismatch");
  int prev = x.degree;  // word entries must satisfy j1 < degree, strictly decreasing
  for (int j : x.word) {
    if (j < 0 || j >= prev) throw StructureError("malformed degeneracy word");
    prev = j;
  }
  const int b = x.base_degree();
  if (b < 0 || b > dim_cap_) throw StructureError("ref base degree out of range");
  if (x.gen < 0 || x.gen >= count(b)) throw StructureError("ref generator out of range");
}

int SimplicialSet::add_generator(int degree, std::string name, std::vector<SimplexRef> faces) {
  if (degree < 0 || degree > dim_cap_)
    throw TruncationError("generator degree exceeds truncation bound");
  if (by_name_.count(name)) throw StructureError("duplicate generator name: " + name);
  if (degree == 0) {
    if (!faces.empty()) throw StructureError("vertex with faces");
  } else if (static_cast<int>(faces.size()) != degree + 1) {
    throw StructureError("generator " + name + " needs " + std::to_string(degree + 1) +
                         " faces");
  }
  for (const auto& f : faces) check_ref(f, degree - 1);
  const int idx = count(degree);
  by_name_[name] = {degree, idx};
  gens_[degree].push_back(Generator{std::move(name), std::move(faces)});
  return idx;
}

int SimplicialSet::count(int degree) const {
  if (degree < 0 || degree > dim_cap_) return 0;
  return static_cast<int>(gens_[degree].size());
}

std::vector<int> SimplicialSet::counts() const {
  std::vector<int> c(dim_cap_ + 1);
  for (int q = 0; q <= dim_cap_; ++q) c[q] = count(q);
  return c;
}

const Generator& SimplicialSet::generator(int degree, int index) const {
  if (degree < 0 || degree > dim_cap_ || index < 0 || index >= count(degree))
    throw StructureError("no such generator");
  return gens_[degree][index];
}

const Generator& SimplicialSet::generator(const SimplexRef& x) const {
  return generator(x.base_degree(), x.gen);
}

std::optional<SimplexRef> SimplicialSet::find(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return SimplexRef{it->second.first, it->second.second, {}};
}

SimplexRef SimplicialSet::face(const SimplexRef& x, int i) const {
  check_ref(x, x.degree);
  if (x.degree < 1) throw StructureError("face of a vertex");
  if (i < 0 || i > x.degree) throw StructureError("face index out of range");

  // Push d_i through the degeneracy word with
  //   d_i s_j = s_{j-1} d_i  (i < j),  d_i s_j = id  (i = j, j+1),
  //   d_i s_j = s_j d_{i-1}  (i > j+1).
  std::vector<int> left;
  int fi = i;
  for (std::size_t k = 0; k < x.word.size(); ++k) {
    const int j = x.word[k];
    if (fi < j) {
      left.push_back(j - 1);
    } else if (fi == j || fi == j + 1) {
      std::vector<int> w = left;
      w.insert(w.end(), x.word.begin() + k + 1, x.word.end());
      return SimplexRef{x.degree - 1, x.gen, std::move(w)};
    } else {
      left.push_back(j);
      fi -= 1;
    }
  }

  const Generator& g = generator(x);
  SimplexRef out = g.faces.at(fi);
  for (auto it = left.rbegin(); it != left.rend(); ++it) out = apply_degeneracy(out, *it);
  return out;
}

std::vector<SimplexRef> SimplicialSet::simplices(int q) const {
  if (q < 0 || q > dim_cap_) throw TruncationError("degree exceeds truncation bound");
  std::vector<SimplexRef> out;
  for (int b = 0; b <= q; ++b) {
    const auto words = decreasing_words(q, q - b);
    for (int g = 0; g < count(b); ++g)
      for (const auto& w : words) out.push_back(SimplexRef{q, g, w});
  }
  return out;
}

SimplicialSet SimplicialSet::with_cap(int dim_cap) const {
  SimplicialSet out(dim_cap);
  for (int q = 0; q <= dim_cap_; ++q) {
    if (count(q) > 0 && q > dim_cap)
      throw TruncationError("with_cap would drop generators");
    for (int g = 0; g < count(q); ++g) {
      const Generator& gen = gens_[q][g];
      out.add_generator(q, gen.name, gen.faces);
    }
  }
  return out;
}

long long SimplicialSet::euler_characteristic() const {
  long long chi = 0;
  for (int q = 0; q <= dim_cap_; ++q) chi += (q % 2 == 0 ? 1LL : -1LL) * count(q);
  return chi;
}

std::string SimplicialSet::describe(const SimplexRef& x) const {
  std::string s;
  for (int j : x.word) s += "s" + std::to_string(j) + " ";
  return s + generator(x).name;
}

namespace {

std::string subset_name(const std::vector<int>& vs) {
  std::string s;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) s += ".";
    s += std::to_string(vs[i]);
  }
  return s;
}

/// Shared builder for delta(n) and its subobjects: keep every proper vertex
/// subset accepted by `keep`, top subset included iff `keep` allows it.
SimplicialSet simplex_like(int n, int cap,
                           const std::function<bool(const std::vector<int>&)>& keep) {
  if (cap < 0) cap = n;
  if (n > cap) throw TruncationError("simplex dimension exceeds truncation bound");
  SimplicialSet out(cap);
  std::map<std::vector<int>, SimplexRef> index;
  // subsets by size then lexicographic order
  for (int q = 0; q <= std::min(n, cap); ++q) {
    std::vector<int> sel(q + 1);
    std::iota(sel.begin(), sel.end(), 0);
    while (true) {
      if (keep(sel)) {
        std::vector<SimplexRef> faces;
        if (q > 0) {
          for (int i = 0; i <= q; ++i) {
            std::vector<int> sub = sel;
            sub.erase(sub.begin() + i);
            auto it = index.find(sub);
            if (it == index.end()) throw StructureError("face subset missing");
            faces.push_back(it->second);
          }
        }
        const int idx = out.add_generator(q, subset_name(sel), std::move(faces));
        index[sel] = SimplexRef{q, idx, {}};
      }
      // next (q+1)-subset of {0..n}
      int i = q;
      while (i >= 0 && sel[i] == n - (q - i)) --i;
      if (i < 0) break;
      sel[i] += 1;
      for (int j = i + 1; j <= q; ++j) sel[j] = sel[j - 1] + 1;
    }
  }
  return out;
}

}  // namespace

SimplicialSet delta(int n, int cap) {
  return simplex_like(n, cap, [](const std::vector<int>&) { return true; });
}

SimplicialSet boundary_delta(int n, int cap) {
  return simplex_like(n, cap, [n](const std::vector<int>& s) {
    return static_cast<int>(s.size()) != n + 1;
  });
}

SimplicialSet horn(int n, int k, int cap) {
  if (k < 0 || k > n) throw StructureError("horn slot out of range");
  return simplex_like(n, cap, [n, k](const std::vector<int>& s) {
    if (static_cast<int>(s.size()) == n + 1) return false;
    if (static_cast<int>(s.size()) == n) {
      // drop the face opposite vertex k
      for (int v : s)
        if (v == k) return true;
      return false;
    }
    return true;
  });
}

SimplicialSet disjoint_union(const SimplicialSet& a, const SimplicialSet& b) {
  SimplicialSet out(std::max(a.dim_cap(), b.dim_cap()));
  for (int q = 0; q <= a.dim_cap(); ++q)
    for (int g = 0; g < a.count(q); ++g)
      out.add_generator(q, "L:" + a.generator(q, g).name, a.generator(q, g).faces);
  const std::vector<int> offsets = [&] {
    std::vector<int> o(b.dim_cap() + 1);
    for (int q = 0; q <= b.dim_cap(); ++q) o[q] = a.count(q);
    return o;
  }();
  for (int q = 0; q <= b.dim_cap(); ++q)
    for (int g = 0; g < b.count(q); ++g) {
      auto faces = b.generator(q, g).faces;
      for (auto& f : faces) f.gen += offsets[f.base_degree()];
      out.add_generator(q, "R:" + b.generator(q, g).name, std::move(faces));
    }
  return out;
}

ProductSet::ProductSet(const SimplicialSet& a, const SimplicialSet& b)
    : left_(a), right_(b), set_(a.dim_cap()) {
  if (a.dim_cap() != b.dim_cap())
    throw StructureError("product factors need a common truncation bound");
  const int cap = a.dim_cap();
  comps_.resize(cap + 1);

  for (int q = 0; q <= cap; ++q) {
    // enumerate nondegenerate pairs (s_mu a, s_nu b), mu and nu disjoint
    for (int p = 0; p <= q; ++p) {
      const auto mus = decreasing_words(q, q - p);
      for (int r = 0; r <= q; ++r) {
        if ((q - p) + (q - r) > q) continue;
        const auto nus = decreasing_words(q, q - r);
        for (int ai = 0; ai < left_.count(p); ++ai)
          for (int bi = 0; bi < right_.count(r); ++bi)
            for (const auto& mu : mus)
              for (const auto& nu : nus) {
                bool disjoint = true;
                for (int x : mu)
                  for (int y : nu)
                    if (x == y) disjoint = false;
                if (!disjoint) continue;
                SimplexRef ra{q, ai, mu};
                SimplexRef rb{q, bi, nu};
                comps_[q].push_back({ra, rb});
                index_[{ra, rb}] = static_cast<int>(comps_[q].size()) - 1;
              }
      }
    }
    // register with faces (degree q-1 tables are complete by now)
    for (std::size_t g = 0; g < comps_[q].size(); ++g) {
      const auto& [ra, rb] = comps_[q][g];
      std::string name = "(" + word_prefix(ra.word) +
                         (ra.word.empty() ? "" : ":") + left_.generator(ra).name + "," +
                         word_prefix(rb.word) + (rb.word.empty() ? "" : ":") +
                         right_.generator(rb).name + ")";
      std::vector<SimplexRef> faces;
      if (q > 0)
        for (int i = 0; i <= q; ++i) faces.push_back(pair(left_.face(ra, i), right_.face(rb, i)));
      set_.add_generator(q, std::move(name), std::move(faces));
    }
  }
}

SimplexRef ProductSet::pair(const SimplexRef& xa, const SimplexRef& xb) const {
  if (xa.degree != xb.degree) throw StructureError("pair of unequal degrees");
  // shared degeneracy indices come out in front, largest first
  std::vector<int> common;
  for (int u : xa.word)
    for (int v : xb.word)
      if (u == v) common.push_back(u);
  std::sort(common.rbegin(), common.rend());
  SimplexRef ra = xa, rb = xb;
  for (int j : common) {
    ra.word = strip_index(ra.word, j);
    rb.word = strip_index(rb.word, j);
    ra.degree -= 1;
    rb.degree -= 1;
  }
  auto it = index_.find({ra, rb});
  if (it == index_.end()) throw StructureError("component pair not registered");
  return SimplexRef{xa.degree, it->second, std::move(common)};
}

std::pair<SimplexRef, SimplexRef> ProductSet::split(const SimplexRef& x) const {
  const auto& [ra, rb] = comps_.at(x.base_degree()).at(x.gen);
  SimplexRef fa = ra, fb = rb;
  for (auto it = x.word.rbegin(); it != x.word.rend(); ++it) {
    fa = apply_degeneracy(fa, *it);
    fb = apply_degeneracy(fb, *it);
  }
  return {fa, fb};
}

ProductSet product(const SimplicialSet& a, const SimplicialSet& b) {
  return ProductSet(a, b);
}

SimplexRef SimplicialMap::apply(const SimplexRef& x) const {
  SimplexRef img = images.at(x.base_degree()).at(x.gen);
  for (auto it = x.word.rbegin(); it != x.word.rend(); ++it)
    img = apply_degeneracy(img, *it);
  return img;
}

SimplicialMap inclusion(const SimplicialSet& sub, const SimplicialSet& sup) {
  SimplicialMap f;
  f.src = &sub;
  f.tgt = &sup;
  f.images.resize(sub.dim_cap() + 1);
  for (int q = 0; q <= sub.dim_cap(); ++q)
    for (int g = 0; g < sub.count(q); ++g) {
      auto r = sup.find(sub.generator(q, g).name);
      if (!r || r->degree != q)
        throw StructureError("inclusion: missing generator " + sub.generator(q, g).name);
      f.images[q].push_back(*r);
    }
  return f;
}

VerificationReport check_map(const SimplicialMap& f) {
  VerificationReport rep;
  rep.name = "simplicial-map";
  const SimplicialSet& src = *f.src;
  const SimplicialSet& tgt = *f.tgt;
  for (int q = 1; q <= src.dim_cap(); ++q)
    for (int g = 0; g < src.count(q); ++g) {
      SimplexRef r{q, g, {}};
      for (int i = 0; i <= q; ++i) {
        const SimplexRef lhs = tgt.face(f.apply(r), i);
        const SimplexRef rhs = f.apply(src.face(r, i));
        ++rep.samples_used;
        if (lhs != rhs)
          rep.fail("face " + std::to_string(i) + " of " + src.generator(q, g).name +
                   " does not commute");
      }
    }
  return rep;
}

VerificationReport check_identities(const SimplicialSet& a) {
  VerificationReport rep;
  rep.name = "simplicial-identities";
  // face table shape and canonical-form validity
  for (int q = 1; q <= a.dim_cap(); ++q)
    for (int g = 0; g < a.count(q); ++g) {
      const Generator& gen = a.generator(q, g);
      if (static_cast<int>(gen.faces.size()) != q + 1) {
        rep.fail("generator " + gen.name + " has wrong face count");
        continue;
      }
      for (int i = 0; i <= q; ++i) {
        const auto& f = gen.faces[i];
        if (f.degree != q - 1) rep.fail("face of " + gen.name + " has wrong degree");
        int prev = f.degree;
        for (int j : f.word) {
          if (j < 0 || j >= prev) {
            rep.fail("face of " + gen.name + " has malformed word");
            break;
          }
          prev = j;
        }
      }
    }
  if (!rep.pass) return rep;

  for (int q = 2; q <= a.dim_cap(); ++q)
    for (int g = 0; g < a.count(q); ++g) {
      SimplexRef r{q, g, {}};
      for (int j = 1; j <= q; ++j)
        for (int i = 0; i < j; ++i) {
          const SimplexRef lhs = a.face(a.face(r, j), i);
          const SimplexRef rhs = a.face(a.face(r, i), j - 1);
          ++rep.samples_used;
          if (lhs != rhs)
            rep.fail("d" + std::to_string(i) + " d" + std::to_string(j) + " of " +
                     a.generator(q, g).name + ": " + a.describe(lhs) + " vs " +
                     a.describe(rhs));
        }
    }
  return rep;
}

HornFillerResult find_horn_filler(const SimplicialSet& a, int n, int k,
                                  const std::vector<SimplexRef>& horn_images) {
  if (static_cast<int>(horn_images.size()) != n + 1)
    throw StructureError("horn assignment needs n+1 slots");
  HornFillerResult res;
  for (const SimplexRef& cand : a.simplices(n)) {
    ++res.candidates_examined;
    bool ok = true;
    for (int i = 0; i <= n && ok; ++i) {
      if (i == k) continue;
      if (a.face(cand, i) != horn_images[i]) ok = false;
    }
    if (ok) {
      res.filler = cand;
      return res;
    }
  }
  return res;
}

std::vector<std::vector<int>> pi0(const SimplicialSet& a) {
  std::vector<int> parent(a.count(0));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> root = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (int e = 0; e < a.count(1); ++e) {
    const auto& faces = a.generator(1, e).faces;
    int u = root(faces[0].gen), v = root(faces[1].gen);
    if (u != v) parent[std::max(u, v)] = std::min(u, v);
  }
  std::map<int, std::vector<int>> classes;
  for (int v = 0; v < a.count(0); ++v) classes[root(v)].push_back(v);
  std::vector<std::vector<int>> out;
  for (auto& [r, members] : classes) out.push_back(std::move(members));
  return out;
}

IntMat boundary_matrix(const SimplicialSet& a, int q) {
  if (q < 1 || q > a.dim_cap()) return {};
  const int rows = a.count(q - 1), cols = a.count(q);
  if (rows == 0 || cols == 0) return {};
  IntMat m(rows, std::vector<long long>(cols, 0));
  for (int g = 0; g < cols; ++g) {
    const auto& faces = a.generator(q, g).faces;
    for (int i = 0; i <= q; ++i)
      if (faces[i].word.empty()) m[faces[i].gen][g] += (i % 2 == 0 ? 1 : -1);
  }
  return m;
}

HomologySummary homology(const SimplicialSet& a, int q) {
  if (q < 0 || q > a.dim_cap()) return {};
  return homology_from_boundaries(a.count(q), boundary_matrix(a, q),
                                  boundary_matrix(a, q + 1));
}

VerificationReport verify_simplicial_homotopy(const ProductSet& axi,
                                              const SimplicialMap& h,
                                              const SimplicialMap& f,
                                              const SimplicialMap& g) {
  VerificationReport rep;
  rep.name = "simplicial-homotopy";
  const SimplicialSet& a = axi.left();
  const SimplicialSet& interval = axi.right();
  const auto v0 = interval.find("0"), v1 = interval.find("1");
  if (!v0 || !v1) {
    rep.fail("cylinder factor is not an interval");
    return rep;
  }
  for (int q = 0; q <= a.dim_cap(); ++q)
    for (int gi = 0; gi < a.count(q); ++gi) {
      SimplexRef ra{q, gi, {}};
      std::vector<int> full(q);
      for (int j = 0; j < q; ++j) full[j] = q - 1 - j;
      for (int end = 0; end <= 1; ++end) {
        SimplexRef rv{q, end == 0 ? v0->gen : v1->gen, full};
        const SimplexRef at_end = h.apply(axi.pair(ra, rv));
        const SimplexRef expect = (end == 0 ? f : g).apply(ra);
        ++rep.samples_used;
        if (at_end != expect)
          rep.fail("end " + std::to_string(end) + " differs on " +
                   a.generator(q, gi).name);
      }
    }
  return rep;
}

nlohmann::json to_json(const SimplicialSet& a) {
  nlohmann::json j;
  j["dim_cap"] = a.dim_cap();
  nlohmann::json gens = nlohmann::json::object();
  nlohmann::json faces = nlohmann::json::object();
  for (int q = 0; q <= a.dim_cap(); ++q) {
    if (a.count(q) == 0) continue;
    nlohmann::json names = nlohmann::json::array();
    for (int g = 0; g < a.count(q); ++g) {
      const Generator& gen = a.generator(q, g);
      names.push_back(gen.name);
      if (q > 0) {
        nlohmann::json fl = nlohmann::json::array();
        for (const auto& f : gen.faces)
          fl.push_back({{"gen", a.generator(f).name}, {"word", f.word}});
        faces[gen.name] = fl;
      }
    }
    gens[std::to_string(q)] = names;
  }
  j["generators"] = gens;
  j["faces"] = faces;
  return j;
}

SimplicialSet simplicial_from_json(const nlohmann::json& j) {
  SimplicialSet out(j.at("dim_cap").get<int>());
  std::map<std::string, SimplexRef> index;
  std::map<int, std::vector<std::string>> by_degree;
  for (const auto& [qs, names] : j.at("generators").items()) {
    const int q = std::stoi(qs);
    for (const auto& n : names) by_degree[q].push_back(n.get<std::string>());
  }
  std::vector<std::pair<int, std::string>> order;
  for (const auto& [q, names] : by_degree)
    for (const auto& n : names) order.push_back({q, n});
  const auto& faces = j.at("faces");
  for (const auto& [q, name] : order) {
    std::vector<SimplexRef> fl;
    if (q > 0) {
      if (!faces.contains(name)) throw StructureError("missing face list for " + name);
      for (const auto& fe : faces.at(name)) {
        const std::string tgt = fe.at("gen").get<std::string>();
        auto it = index.find(tgt);
        if (it == index.end()) throw StructureError("face references unknown generator " + tgt);
        std::vector<int> word;
        for (const auto& w : fe.at("word")) word.push_back(w.get<int>());
        SimplexRef ref{it->second.degree + static_cast<int>(word.size()), it->second.gen,
                       word};
        int prev = ref.degree;
        for (int v : word) {
          if (v < 0 || v >= prev) throw StructureError("malformed word for face of " + name);
          prev = v;
        }
        if (ref.degree != q - 1) throw StructureError("face degree mismatch for " + name);
        fl.push_back(ref);
      }
    }
    const int idx = out.add_generator(q, name, std::move(fl));
    index[name] = SimplexRef{q, idx, {}};
  }
  return out;
}

}  // namespace swb::sset
