#include "swb/expr.hpp"

#include <cmath>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace swb::expr {

namespace detail {

struct Node {
  enum class Kind { Const, Coord, Add, Sub, Mul, Div, Exp, Sqrt, Bump, Sin, Cos, Piecewise };
  Kind kind;
  double cval = 0.0;
  int index = -1;
  std::shared_ptr<const Node> a, b, c;  // piecewise: a gate, b if_nonneg, c if_neg
};

Expr wrap(std::shared_ptr<const Node> n) { return Expr(std::move(n)); }

std::shared_ptr<const Node> unwrap(const Expr& e) { return e.node_; }

}  // namespace detail

using detail::Node;
using NodePtr = std::shared_ptr<const Node>;

namespace {

NodePtr make(Node::Kind kind, NodePtr a = nullptr, NodePtr b = nullptr,
             NodePtr c = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->a = std::move(a);
  n->b = std::move(b);
  n->c = std::move(c);
  return n;
}

}  // namespace

Expr::Expr(double c) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Const;
  n->cval = c;
  node_ = std::move(n);
}

Expr Expr::coord(int i) {
  if (i < 0) throw StructureError("negative coordinate index");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Coord;
  n->index = i;
  return Expr(std::move(n));
}

Expr Expr::piecewise(Expr gate, Expr if_nonneg, Expr if_neg) {
  return Expr(make(Node::Kind::Piecewise, gate.node_, if_nonneg.node_, if_neg.node_));
}

Expr operator+(const Expr& x, const Expr& y) {
  return Expr(make(Node::Kind::Add, x.node_, y.node_));
}
Expr operator-(const Expr& x, const Expr& y) {
  return Expr(make(Node::Kind::Sub, x.node_, y.node_));
}
Expr operator*(const Expr& x, const Expr& y) {
  return Expr(make(Node::Kind::Mul, x.node_, y.node_));
}
Expr operator/(const Expr& x, const Expr& y) {
  return Expr(make(Node::Kind::Div, x.node_, y.node_));
}
Expr operator-(const Expr& x) { return Expr(0.0) - x; }
Expr exp(const Expr& x) { return Expr(make(Node::Kind::Exp, x.node_)); }
Expr sqrt(const Expr& x) { return Expr(make(Node::Kind::Sqrt, x.node_)); }
Expr flat_bump(const Expr& x) { return Expr(make(Node::Kind::Bump, x.node_)); }
Expr sin(const Expr& x) { return Expr(make(Node::Kind::Sin, x.node_)); }
Expr cos(const Expr& x) { return Expr(make(Node::Kind::Cos, x.node_)); }

namespace {

double eval_node(const Node* n, const std::vector<double>& x,
                 std::unordered_map<const Node*, double>& memo) {
  auto it = memo.find(n);
  if (it != memo.end()) return it->second;
  double v = 0.0;
  switch (n->kind) {
    case Node::Kind::Const:
      v = n->cval;
      break;
    case Node::Kind::Coord:
      if (n->index >= static_cast<int>(x.size()))
        throw EvalError("coordinate index beyond point dimension");
      v = x[n->index];
      break;
    case Node::Kind::Add:
      v = eval_node(n->a.get(), x, memo) + eval_node(n->b.get(), x, memo);
      break;
    case Node::Kind::Sub:
      v = eval_node(n->a.get(), x, memo) - eval_node(n->b.get(), x, memo);
      break;
    case Node::Kind::Mul:
      v = eval_node(n->a.get(), x, memo) * eval_node(n->b.get(), x, memo);
      break;
    case Node::Kind::Div: {
      const double den = eval_node(n->b.get(), x, memo);
      if (den == 0.0) throw EvalError("division by zero");
      v = eval_node(n->a.get(), x, memo) / den;
      break;
    }
    case Node::Kind::Exp:
      v = std::exp(eval_node(n->a.get(), x, memo));
      break;
    case Node::Kind::Sqrt: {
      const double s = eval_node(n->a.get(), x, memo);
      if (s < 0.0) throw EvalError("square root of a negative number");
      v = std::sqrt(s);
      break;
    }
    case Node::Kind::Bump: {
      const double t = eval_node(n->a.get(), x, memo);
      v = t > 0.0 ? std::exp(-1.0 / t) : 0.0;
      break;
    }
    case Node::Kind::Sin:
      v = std::sin(eval_node(n->a.get(), x, memo));
      break;
    case Node::Kind::Cos:
      v = std::cos(eval_node(n->a.get(), x, memo));
      break;
    case Node::Kind::Piecewise: {
      const double g = eval_node(n->a.get(), x, memo);
      v = eval_node((g >= 0.0 ? n->b : n->c).get(), x, memo);
      break;
    }
  }
  memo.emplace(n, v);
  return v;
}

Jet2 jet_node(const Node* n, const std::vector<double>& x,
              std::unordered_map<const Node*, Jet2>& memo) {
  auto it = memo.find(n);
  if (it != memo.end()) return it->second;
  const int dim = static_cast<int>(x.size());
  Jet2 j(dim);
  switch (n->kind) {
    case Node::Kind::Const:
      j.value = n->cval;
      break;
    case Node::Kind::Coord:
      if (n->index >= dim) throw EvalError("coordinate index beyond point dimension");
      j.value = x[n->index];
      j.grad(n->index) = 1.0;
      break;
    case Node::Kind::Add: {
      const Jet2 a = jet_node(n->a.get(), x, memo), b = jet_node(n->b.get(), x, memo);
      j.value = a.value + b.value;
      j.grad = a.grad + b.grad;
      j.hess = a.hess + b.hess;
      break;
    }
    case Node::Kind::Sub: {
      const Jet2 a = jet_node(n->a.get(), x, memo), b = jet_node(n->b.get(), x, memo);
      j.value = a.value - b.value;
      j.grad = a.grad - b.grad;
      j.hess = a.hess - b.hess;
      break;
    }
    case Node::Kind::Mul: {
      const Jet2 a = jet_node(n->a.get(), x, memo), b = jet_node(n->b.get(), x, memo);
      j.value = a.value * b.value;
      j.grad = a.value * b.grad + b.value * a.grad;
      j.hess = a.value * b.hess + b.value * a.hess + a.grad * b.grad.transpose() +
               b.grad * a.grad.transpose();
      break;
    }
    case Node::Kind::Div: {
      const Jet2 b = jet_node(n->b.get(), x, memo);
      if (b.value == 0.0) throw EvalError("division by zero");
      const Jet2 a = jet_node(n->a.get(), x, memo);
      j.value = a.value / b.value;
      j.grad = (a.grad - j.value * b.grad) / b.value;
      j.hess = (a.hess - j.value * b.hess - j.grad * b.grad.transpose() -
                b.grad * j.grad.transpose()) /
               b.value;
      break;
    }
    case Node::Kind::Exp: {
      const Jet2 a = jet_node(n->a.get(), x, memo);
      j.value = std::exp(a.value);
      j.grad = j.value * a.grad;
      j.hess = j.value * (a.hess + a.grad * a.grad.transpose());
      break;
    }
    case Node::Kind::Sqrt: {
      const Jet2 a = jet_node(n->a.get(), x, memo);
      if (a.value < 0.0) throw EvalError("square root of a negative number");
      if (a.value == 0.0) break;  // flat extension: zero jet at the boundary
      j.value = std::sqrt(a.value);
      j.grad = a.grad / (2.0 * j.value);
      j.hess = a.hess / (2.0 * j.value) -
               a.grad * a.grad.transpose() / (4.0 * j.value * j.value * j.value);
      break;
    }
    case Node::Kind::Bump: {
      const Jet2 a = jet_node(n->a.get(), x, memo);
      const double t = a.value;
      const double v = t > 0.0 ? std::exp(-1.0 / t) : 0.0;
      // v underflows well before 1/t^2 does, so v = 0 covers t <= 0 and the
      // far tail in one flat case and the quotients below stay finite.
      if (v == 0.0) break;
      const double d1 = v / (t * t);
      const double d2 = v * (1.0 - 2.0 * t) / (t * t * t * t);
      j.value = v;
      j.grad = d1 * a.grad;
      j.hess = d2 * a.grad * a.grad.transpose() + d1 * a.hess;
      break;
    }
    case Node::Kind::Sin: {
      const Jet2 a = jet_node(n->a.get(), x, memo);
      const double s = std::sin(a.value), c = std::cos(a.value);
      j.value = s;
      j.grad = c * a.grad;
      j.hess = c * a.hess - s * a.grad * a.grad.transpose();
      break;
    }
    case Node::Kind::Cos: {
      const Jet2 a = jet_node(n->a.get(), x, memo);
      const double s = std::sin(a.value), c = std::cos(a.value);
      j.value = c;
      j.grad = -s * a.grad;
      j.hess = -s * a.hess - c * a.grad * a.grad.transpose();
      break;
    }
    case Node::Kind::Piecewise: {
      const Jet2 g = jet_node(n->a.get(), x, memo);
      j = jet_node((g.value >= 0.0 ? n->b : n->c).get(), x, memo);
      break;
    }
  }
  memo.emplace(n, j);
  return j;
}

NodePtr substitute_node(const NodePtr& n, const std::vector<Expr>& repl,
                        std::unordered_map<const Node*, NodePtr>& memo) {
  auto it = memo.find(n.get());
  if (it != memo.end()) return it->second;
  NodePtr out;
  switch (n->kind) {
    case Node::Kind::Const:
      out = n;
      break;
    case Node::Kind::Coord:
      if (n->index >= static_cast<int>(repl.size()))
        throw StructureError("substitution misses a coordinate");
      out = detail::unwrap(repl[n->index]);
      break;
    default: {
      const NodePtr a = n->a ? substitute_node(n->a, repl, memo) : nullptr;
      const NodePtr b = n->b ? substitute_node(n->b, repl, memo) : nullptr;
      const NodePtr c = n->c ? substitute_node(n->c, repl, memo) : nullptr;
      auto m = std::make_shared<Node>(*n);
      m->a = a;
      m->b = b;
      m->c = c;
      out = m;
      break;
    }
  }
  memo.emplace(n.get(), out);
  return out;
}

}  // namespace

double Expr::eval(const std::vector<double>& x) const {
  std::unordered_map<const Node*, double> memo;
  return eval_node(node_.get(), x, memo);
}

Jet2 Expr::jet(const std::vector<double>& x) const {
  std::unordered_map<const Node*, Jet2> memo;
  return jet_node(node_.get(), x, memo);
}

Expr Expr::substitute(const std::vector<Expr>& repl) const {
  std::unordered_map<const Node*, NodePtr> memo;
  return Expr(substitute_node(node_, repl, memo));
}

int Expr::max_coord() const {
  int best = -1;
  std::unordered_set<const Node*> seen;
  std::function<void(const Node*)> walk = [&](const Node* n) {
    if (!n || !seen.insert(n).second) return;
    if (n->kind == Node::Kind::Coord) best = std::max(best, n->index);
    walk(n->a.get());
    walk(n->b.get());
    walk(n->c.get());
  };
  walk(node_.get());
  return best;
}

std::vector<PiecewiseSite> piecewise_sites(const Expr& e) {
  std::vector<PiecewiseSite> sites;
  std::unordered_set<const Node*> seen;
  std::function<void(const Node*)> walk = [&](const Node* n) {
    if (!n || !seen.insert(n).second) return;
    walk(n->a.get());
    walk(n->b.get());
    walk(n->c.get());
    if (n->kind == Node::Kind::Piecewise)
      sites.push_back({detail::wrap(n->a), detail::wrap(n->b), detail::wrap(n->c)});
  };
  walk(e.node());
  return sites;
}

SmoothMap::SmoothMap(int arity, std::vector<Expr> components)
    : arity_(arity), comps_(std::move(components)) {
  if (arity < 0) throw StructureError("negative arity");
  for (const auto& c : comps_)
    if (c.max_coord() >= arity)
      throw StructureError("component mentions a coordinate beyond the arity");
}

SmoothMap SmoothMap::identity(int n) {
  std::vector<Expr> comps;
  for (int i = 0; i < n; ++i) comps.push_back(Expr::coord(i));
  return SmoothMap(n, std::move(comps));
}

SmoothMap SmoothMap::constant(int arity, const std::vector<double>& v) {
  std::vector<Expr> comps;
  for (double c : v) comps.push_back(Expr(c));
  return SmoothMap(arity, std::move(comps));
}

std::vector<double> SmoothMap::eval(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != arity_)
    throw EvalError("point dimension does not match arity");
  std::unordered_map<const Node*, double> memo;
  std::vector<double> out;
  out.reserve(comps_.size());
  for (const auto& c : comps_) out.push_back(eval_node(c.node(), x, memo));
  return out;
}

std::vector<Jet2> SmoothMap::jet(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != arity_)
    throw EvalError("point dimension does not match arity");
  std::unordered_map<const Node*, Jet2> memo;
  std::vector<Jet2> out;
  out.reserve(comps_.size());
  for (const auto& c : comps_) out.push_back(jet_node(c.node(), x, memo));
  return out;
}

SmoothMap SmoothMap::compose(const SmoothMap& inner) const {
  if (inner.out_dim() != arity_)
    throw StructureError("composition dimensions do not match");
  std::unordered_map<const Node*, NodePtr> memo;  // shared so common subterms stay shared
  std::vector<Expr> comps;
  comps.reserve(comps_.size());
  for (const auto& c : comps_)
    comps.push_back(detail::wrap(substitute_node(detail::unwrap(c), inner.comps_, memo)));
  return SmoothMap(inner.arity_, std::move(comps));
}

VerificationReport check_jets_fd(const SmoothMap& f,
                                 const std::vector<std::vector<double>>& points,
                                 double step, double abs_tol, double rel_tol) {
  VerificationReport rep;
  rep.name = "jets-vs-finite-differences";
  rep.tolerance = 1.0;  // residuals are ratios against max(abs_tol, rel_tol*|jet|)
  rep.details["step"] = step;
  rep.details["abs_tol"] = abs_tol;
  rep.details["rel_tol"] = rel_tol;
  const int n = f.arity();
  const int m = f.out_dim();
  const auto allowance = [&](double ad) {
    return std::max(abs_tol, rel_tol * std::abs(ad));
  };
  for (const auto& x : points) {
    const auto jets = f.jet(x);
    const auto f0 = f.eval(x);
    std::vector<std::vector<double>> plus(n), minus(n);
    for (int i = 0; i < n; ++i) {
      auto xp = x, xm = x;
      xp[i] += step;
      xm[i] -= step;
      plus[i] = f.eval(xp);
      minus[i] = f.eval(xm);
    }
    for (int k = 0; k < m; ++k) {
      for (int i = 0; i < n; ++i) {
        const double fd = (plus[i][k] - minus[i][k]) / (2.0 * step);
        const double ad = jets[k].grad(i);
        rep.sample(std::abs(fd - ad) / allowance(ad), x,
                   "gradient entry " + std::to_string(i) + " of component " +
                       std::to_string(k));
        const double fd2 = (plus[i][k] - 2.0 * f0[k] + minus[i][k]) / (step * step);
        const double ad2 = jets[k].hess(i, i);
        rep.sample(std::abs(fd2 - ad2) / allowance(ad2), x,
                   "diagonal curvature " + std::to_string(i) + " of component " +
                       std::to_string(k));
      }
    }
    for (int i = 0; i < n; ++i)
      for (int jx = i + 1; jx < n; ++jx) {
        auto xpp = x, xpm = x, xmp = x, xmm = x;
        xpp[i] += step;
        xpp[jx] += step;
        xpm[i] += step;
        xpm[jx] -= step;
        xmp[i] -= step;
        xmp[jx] += step;
        xmm[i] -= step;
        xmm[jx] -= step;
        const auto fpp = f.eval(xpp), fpm = f.eval(xpm), fmp = f.eval(xmp),
                   fmm = f.eval(xmm);
        for (int k = 0; k < m; ++k) {
          const double fd = (fpp[k] - fpm[k] - fmp[k] + fmm[k]) / (4.0 * step * step);
          const double ad = jets[k].hess(i, jx);
          rep.sample(std::abs(fd - ad) / allowance(ad), x,
                     "mixed curvature (" + std::to_string(i) + "," + std::to_string(jx) +
                         ") of component " + std::to_string(k));
        }
      }
  }
  return rep;
}

namespace {

long long checked_add(long long a, long long b) {
  long long r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow");
  return r;
}

long long checked_mul(long long a, long long b) {
  long long r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow");
  return r;
}

}  // namespace

Poly Poly::constant(int arity, long long c) {
  Poly p;
  p.arity = arity;
  if (c != 0) p.terms[std::vector<int>(arity, 0)] = c;
  return p;
}

Poly Poly::coordinate(int arity, int i) {
  if (i < 0 || i >= arity) throw StructureError("coordinate index out of range");
  Poly p;
  p.arity = arity;
  std::vector<int> e(arity, 0);
  e[i] = 1;
  p.terms[e] = 1;
  return p;
}

Poly Poly::operator+(const Poly& o) const {
  if (arity != o.arity) throw StructureError("polynomial arity mismatch");
  Poly r = *this;
  for (const auto& [e, c] : o.terms) {
    const long long s = checked_add(r.terms.count(e) ? r.terms[e] : 0, c);
    if (s == 0)
      r.terms.erase(e);
    else
      r.terms[e] = s;
  }
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  Poly neg = o;
  for (auto& [e, c] : neg.terms) c = -c;
  return *this + neg;
}

Poly Poly::operator*(const Poly& o) const {
  if (arity != o.arity) throw StructureError("polynomial arity mismatch");
  Poly r;
  r.arity = arity;
  for (const auto& [ea, ca] : terms)
    for (const auto& [eb, cb] : o.terms) {
      std::vector<int> e(arity);
      for (int i = 0; i < arity; ++i) e[i] = ea[i] + eb[i];
      const long long s =
          checked_add(r.terms.count(e) ? r.terms[e] : 0, checked_mul(ca, cb));
      if (s == 0)
        r.terms.erase(e);
      else
        r.terms[e] = s;
    }
  return r;
}

Poly Poly::derivative(int i) const {
  if (i < 0 || i >= arity) throw StructureError("coordinate index out of range");
  Poly r;
  r.arity = arity;
  for (const auto& [e, c] : terms) {
    if (e[i] == 0) continue;
    std::vector<int> d = e;
    d[i] -= 1;
    r.terms[d] = checked_mul(c, e[i]);
  }
  return r;
}

Poly Poly::substitute(const std::vector<Poly>& repl) const {
  if (static_cast<int>(repl.size()) != arity)
    throw StructureError("substitution misses a coordinate");
  const int target = repl.empty() ? 0 : repl[0].arity;
  for (const auto& p : repl)
    if (p.arity != target) throw StructureError("polynomial arity mismatch");
  Poly r = Poly::constant(target, 0);
  for (const auto& [e, c] : terms) {
    Poly term = Poly::constant(target, c);
    for (int i = 0; i < arity; ++i)
      for (int k = 0; k < e[i]; ++k) term = term * repl[i];
    r = r + term;
  }
  return r;
}

long long Poly::eval(const std::vector<long long>& x) const {
  if (static_cast<int>(x.size()) != arity)
    throw StructureError("point dimension does not match arity");
  long long acc = 0;
  for (const auto& [e, c] : terms) {
    long long t = c;
    for (int i = 0; i < arity; ++i)
      for (int k = 0; k < e[i]; ++k) t = checked_mul(t, x[i]);
    acc = checked_add(acc, t);
  }
  return acc;
}

double Poly::eval_double(const std::vector<double>& x) const {
  double acc = 0;
  for (const auto& [e, c] : terms) {
    double t = static_cast<double>(c);
    for (int i = 0; i < arity; ++i)
      for (int k = 0; k < e[i]; ++k) t *= x[i];
    acc += t;
  }
  return acc;
}

namespace {

const char* kind_name(Node::Kind k) {
  switch (k) {
    case Node::Kind::Const: return "const";
    case Node::Kind::Coord: return "coord";
    case Node::Kind::Add: return "add";
    case Node::Kind::Sub: return "sub";
    case Node::Kind::Mul: return "mul";
    case Node::Kind::Div: return "div";
    case Node::Kind::Exp: return "exp";
    case Node::Kind::Sqrt: return "sqrt";
    case Node::Kind::Bump: return "bump";
    case Node::Kind::Sin: return "sin";
    case Node::Kind::Cos: return "cos";
    case Node::Kind::Piecewise: return "piecewise";
  }
  return "?";
}

nlohmann::json json_node(const Node* n, std::unordered_map<const Node*, nlohmann::json>& memo) {
  auto it = memo.find(n);
  if (it != memo.end()) return it->second;
  nlohmann::json j;
  j["op"] = kind_name(n->kind);
  switch (n->kind) {
    case Node::Kind::Const:
      j["value"] = n->cval;
      break;
    case Node::Kind::Coord:
      j["index"] = n->index;
      break;
    case Node::Kind::Piecewise:
      j["gate"] = json_node(n->a.get(), memo);
      j["if_nonneg"] = json_node(n->b.get(), memo);
      j["if_neg"] = json_node(n->c.get(), memo);
      break;
    default:
      j["a"] = json_node(n->a.get(), memo);
      if (n->b) j["b"] = json_node(n->b.get(), memo);
      break;
  }
  memo.emplace(n, j);
  return j;
}

}  // namespace

nlohmann::json to_json(const Expr& e) {
  std::unordered_map<const Node*, nlohmann::json> memo;
  return json_node(e.node(), memo);
}

Expr expr_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("op"))
    throw StructureError("expression JSON needs an op field");
  const std::string op = j.at("op").get<std::string>();
  if (op == "const") return Expr(j.at("value").get<double>());
  if (op == "coord") return Expr::coord(j.at("index").get<int>());
  if (op == "piecewise")
    return Expr::piecewise(expr_from_json(j.at("gate")), expr_from_json(j.at("if_nonneg")),
                           expr_from_json(j.at("if_neg")));
  const bool unary = op == "exp" || op == "sqrt" || op == "bump" || op == "sin" || op == "cos";
  const bool binary = op == "add" || op == "sub" || op == "mul" || op == "div";
  if (!unary && !binary) throw StructureError("unknown expression op '" + op + "'");
  const Expr a = expr_from_json(j.at("a"));
  if (op == "exp") return exp(a);
  if (op == "sqrt") return sqrt(a);
  if (op == "bump") return flat_bump(a);
  if (op == "sin") return sin(a);
  if (op == "cos") return cos(a);
  const Expr b = expr_from_json(j.at("b"));
  if (op == "add") return a + b;
  if (op == "sub") return a - b;
  if (op == "mul") return a * b;
  return a / b;
}

nlohmann::json to_json(const SmoothMap& f) {
  nlohmann::json comps = nlohmann::json::array();
  for (int i = 0; i < f.out_dim(); ++i) comps.push_back(to_json(f.component(i)));
  return {{"arity", f.arity()}, {"components", comps}};
}

SmoothMap smooth_map_from_json(const nlohmann::json& j) {
  std::vector<Expr> comps;
  for (const auto& c : j.at("components")) comps.push_back(expr_from_json(c));
  return SmoothMap(j.at("arity").get<int>(), std::move(comps));
}

Poly to_polynomial(const Expr& e, int arity) {
  std::unordered_map<const Node*, Poly> memo;
  std::function<Poly(const Node*)> walk = [&](const Node* n) -> Poly {
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    Poly p;
    switch (n->kind) {
      case Node::Kind::Const: {
        const double c = n->cval;
        if (std::nearbyint(c) != c || std::abs(c) > 9.0e15)
          throw StructureError("constant is not an exact integer");
        p = Poly::constant(arity, static_cast<long long>(c));
        break;
      }
      case Node::Kind::Coord:
        p = Poly::coordinate(arity, n->index);
        break;
      case Node::Kind::Add:
        p = walk(n->a.get()) + walk(n->b.get());
        break;
      case Node::Kind::Sub:
        p = walk(n->a.get()) - walk(n->b.get());
        break;
      case Node::Kind::Mul:
        p = walk(n->a.get()) * walk(n->b.get());
        break;
      default:
        throw StructureError("expression is not polynomial");
    }
    memo.emplace(n, p);
    return p;
  };
  return walk(e.node());
}

}  // namespace swb::expr
