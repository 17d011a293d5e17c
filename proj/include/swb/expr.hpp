#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "swb/report.hpp"

namespace swb::expr {

/// Domain violation during evaluation: division by an exact zero or a square
/// root of a negative number.
struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StructureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Order-two jet of a scalar quantity at a point of R^n.
struct Jet2 {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;

  explicit Jet2(int n = 0) : grad(Eigen::VectorXd::Zero(n)), hess(Eigen::MatrixXd::Zero(n, n)) {}
};

namespace detail {
struct Node;
}

class Expr;

namespace detail {
Expr wrap(std::shared_ptr<const Node> n);
std::shared_ptr<const Node> unwrap(const Expr& e);
}

/// Scalar expression in coordinates x_0, x_1, ... built as a shared DAG.
///
/// Shared subterms evaluate once per call, so two occurrences of the same
/// node are bitwise equal by construction. The primitive set is closed under
/// the jet rules implemented in `jet`: arithmetic, exp, a guarded square
/// root (zero jets at zero, error below), the flat bump t -> exp(-1/t)
/// extended by zero, and two-branch piecewise expressions gated by the sign
/// of a scalar expression.
class Expr {
 public:
  Expr(double c);  // constant, implicit on purpose
  static Expr coord(int i);
  static Expr piecewise(Expr gate, Expr if_nonneg, Expr if_neg);

  double eval(const std::vector<double>& x) const;
  Jet2 jet(const std::vector<double>& x) const;

  /// Replace coordinate i by repl[i] everywhere, rebuilding shared structure.
  Expr substitute(const std::vector<Expr>& repl) const;

  /// Largest coordinate index mentioned, or -1 for a closed expression.
  int max_coord() const;

  const detail::Node* node() const { return node_.get(); }

  friend Expr operator+(const Expr&, const Expr&);
  friend Expr operator-(const Expr&, const Expr&);
  friend Expr operator*(const Expr&, const Expr&);
  friend Expr operator/(const Expr&, const Expr&);
  friend Expr operator-(const Expr&);
  friend Expr exp(const Expr&);
  friend Expr sqrt(const Expr&);
  friend Expr flat_bump(const Expr&);
  friend Expr sin(const Expr&);
  friend Expr cos(const Expr&);

 private:
  friend Expr detail::wrap(std::shared_ptr<const detail::Node> n);
  friend std::shared_ptr<const detail::Node> detail::unwrap(const Expr& e);
  explicit Expr(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::Node> node_;
};

Expr operator+(const Expr&, const Expr&);
Expr operator-(const Expr&, const Expr&);
Expr operator*(const Expr&, const Expr&);
Expr operator/(const Expr&, const Expr&);
Expr operator-(const Expr&);
Expr exp(const Expr&);
Expr sqrt(const Expr&);
Expr flat_bump(const Expr&);
Expr sin(const Expr&);
Expr cos(const Expr&);

/// One piecewise node of an expression: the gate, both branches, and the
/// agreement locus {gate = 0} they are declared to share.
struct PiecewiseSite {
  Expr gate;
  Expr if_nonneg;
  Expr if_neg;
};

/// All piecewise nodes reachable from e, deepest first, each listed once.
std::vector<PiecewiseSite> piecewise_sites(const Expr& e);

/// Smooth map R^arity -> R^m given by component expressions.
class SmoothMap {
 public:
  SmoothMap(int arity, std::vector<Expr> components);
  static SmoothMap identity(int n);
  static SmoothMap constant(int arity, const std::vector<double>& v);

  int arity() const { return arity_; }
  int out_dim() const { return static_cast<int>(comps_.size()); }
  const Expr& component(int i) const { return comps_.at(i); }

  std::vector<double> eval(const std::vector<double>& x) const;
  std::vector<Jet2> jet(const std::vector<double>& x) const;

  /// (*this)(inner(x)); inner.out_dim() must match arity().
  SmoothMap compose(const SmoothMap& inner) const;

 private:
  int arity_;
  std::vector<Expr> comps_;
};

/// Compare analytic jets against central finite differences at the given
/// points. Residuals are reported as ratios against the per-entry allowance
/// max(abs_tol, rel_tol * |analytic|), so the report tolerance is 1.
VerificationReport check_jets_fd(const SmoothMap& f,
                                 const std::vector<std::vector<double>>& points,
                                 double step = 1e-4, double abs_tol = 1e-6,
                                 double rel_tol = 1e-4);

/// Integer-coefficient polynomial in a fixed number of variables, used when
/// a residual should vanish identically rather than merely sample small.
struct Poly {
  int arity = 0;
  std::map<std::vector<int>, long long> terms;  // exponents -> coefficient, no zeros stored

  static Poly constant(int arity, long long c);
  static Poly coordinate(int arity, int i);

  Poly operator+(const Poly&) const;
  Poly operator-(const Poly&) const;
  Poly operator*(const Poly&) const;
  bool operator==(const Poly&) const = default;

  bool is_zero() const { return terms.empty(); }
  Poly derivative(int i) const;
  Poly substitute(const std::vector<Poly>& repl) const;
  long long eval(const std::vector<long long>& x) const;
  double eval_double(const std::vector<double>& x) const;
};

/// Expand an expression built from constants with integer values,
/// coordinates, sums, differences, and products. Throws StructureError on
/// any other node.
Poly to_polynomial(const Expr& e, int arity);

/// Expression trees as JSON. Serialization flattens shared subterms into a
/// plain tree, so a round trip preserves values but not sharing.
nlohmann::json to_json(const Expr& e);
Expr expr_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SmoothMap& f);
SmoothMap smooth_map_from_json(const nlohmann::json& j);

}  // namespace swb::expr
