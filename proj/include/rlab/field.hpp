#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace rlab {

enum class Var { q, p };
enum class Phase { cos, sin };

struct Point2 {
  double q = 0.0;
  double p = 0.0;
};

/// Where a field lives: the unit torus [0,1)^2 or a closed planar box.
struct Domain {
  bool periodic = true;
  double q_min = 0.0;
  double q_max = 1.0;
  double p_min = 0.0;
  double p_max = 1.0;

  static Domain torus() { return {}; }
  static Domain chart(double q_min, double q_max, double p_min, double p_max) {
    return {false, q_min, q_max, p_min, p_max};
  }
  static Domain unit_square() { return chart(0.0, 1.0, 0.0, 1.0); }

  /// Reduces torus coordinates into [0,1); chart points are returned unchanged.
  Point2 reduce(Point2 x) const;
  /// Node (i, j) of an n x n lattice. Torus: (i/n, j/n). Chart: both edges included.
  Point2 node(int i, int j, int n) const;
  double step_q(int n) const;
  double step_p(int n) const;
  bool contains(Point2 x) const;
};

struct BumpParams {
  Var var = Var::q;
  double center = 0.5;
  double inner = 0.1;
  double outer = 0.2;
  bool periodic = true;
  int order = 0;  // derivative order along `var`
};

/// Immutable expression tree for a smooth field of (q, p).
///
/// Node kinds:
///   constant  c
///   coord     q or p
///   trig      cos/sin(2 pi (kq q + kp p)), integer modes
///   bump      C-infinity plateau along one coordinate (or one of its derivatives):
///             1 on |x - center| <= inner, 0 on |x - center| >= outer
///   sum       n-ary sum
///   product   binary product
///   scale     factor * child
///
/// Subtrees are shared, copying a FieldExpr is cheap.
class FieldExpr {
 public:
  enum class Kind { constant, coord, trig, bump, sum, product, scale };

  FieldExpr();  // constant 0

  static FieldExpr constant(double value);
  static FieldExpr coord(Var var);
  static FieldExpr trig(int kq, int kp, Phase phase);
  static FieldExpr bump(Var var, double center, double inner, double outer,
                        bool periodic = true, int order = 0);
  static FieldExpr bump(const BumpParams& params);
  static FieldExpr sum(std::vector<FieldExpr> terms);
  static FieldExpr product(FieldExpr a, FieldExpr b);
  static FieldExpr scale(double factor, FieldExpr child);

  Kind kind() const;
  /// Constant value, or the factor of a scale node.
  double value() const;
  Var var() const;
  int kq() const;
  int kp() const;
  Phase phase() const;
  const BumpParams& bump_params() const;
  std::span<const FieldExpr> children() const;

  bool is_zero() const { return kind() == Kind::constant && value() == 0.0; }
  std::size_t node_count() const;
  /// Identity of the underlying node; equal ids imply equal trees.
  const void* id() const { return node_.get(); }

  double operator()(Point2 x) const;

  friend bool operator==(const FieldExpr& a, const FieldExpr& b);

 private:
  struct Node;
  explicit FieldExpr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

FieldExpr operator+(const FieldExpr& a, const FieldExpr& b);
FieldExpr operator-(const FieldExpr& a, const FieldExpr& b);
FieldExpr operator*(double c, const FieldExpr& f);
FieldExpr operator*(const FieldExpr& a, const FieldExpr& b);

double evaluate(const FieldExpr& f, Point2 x);

/// Value of a single bump node (or bump derivative) at coordinate value x.
double bump_value(const BumpParams& b, double x);

/// Exact partial derivative as a new tree (no finite differences).
FieldExpr differentiate(const FieldExpr& f, Var var);

/// {f, g} = f_q g_p - f_p g_q, i.e. df(X_g) with X_g = (g_p, -g_q).
FieldExpr poisson(const FieldExpr& f, const FieldExpr& g);

/// True when no node of the tree breaks 1-periodicity in q and p.
bool is_periodic(const FieldExpr& f);

/// Highest trig mode |kq|, |kp| appearing in the tree.
int max_trig_mode(const FieldExpr& f);

/// Shifts the field: returns x -> f(x - (dq, dp)).
FieldExpr translate(const FieldExpr& f, double dq, double dp);

std::string to_string(Var v);

}  // namespace rlab
