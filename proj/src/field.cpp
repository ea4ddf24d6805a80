#include "rlab/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "rlab/smooth_step.hpp"

namespace rlab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_unit(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}
}  // namespace

Point2 Domain::reduce(Point2 x) const {
  if (!periodic) return x;
  return {wrap_unit(x.q), wrap_unit(x.p)};
}

Point2 Domain::node(int i, int j, int n) const {
  if (periodic) return {double(i) / n, double(j) / n};
  return {q_min + (q_max - q_min) * i / (n - 1), p_min + (p_max - p_min) * j / (n - 1)};
}

double Domain::step_q(int n) const { return periodic ? 1.0 / n : (q_max - q_min) / (n - 1); }
double Domain::step_p(int n) const { return periodic ? 1.0 / n : (p_max - p_min) / (n - 1); }

bool Domain::contains(Point2 x) const {
  if (periodic) return true;
  return x.q >= q_min && x.q <= q_max && x.p >= p_min && x.p <= p_max;
}

std::string to_string(Var v) { return v == Var::q ? "q" : "p"; }

struct FieldExpr::Node {
  Kind kind = Kind::constant;
  double value = 0.0;
  Var var = Var::q;
  int kq = 0;
  int kp = 0;
  Phase phase = Phase::cos;
  BumpParams bump;
  std::vector<FieldExpr> children;
};

FieldExpr::FieldExpr() : FieldExpr(constant(0.0)) {}

FieldExpr::FieldExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

FieldExpr FieldExpr::constant(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("constant must be finite");
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant;
  n->value = value;
  return FieldExpr(std::move(n));
}

FieldExpr FieldExpr::coord(Var var) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::coord;
  n->var = var;
  return FieldExpr(std::move(n));
}

FieldExpr FieldExpr::trig(int kq, int kp, Phase phase) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::trig;
  n->kq = kq;
  n->kp = kp;
  n->phase = phase;
  return FieldExpr(std::move(n));
}

FieldExpr FieldExpr::bump(Var var, double center, double inner, double outer, bool periodic,
                          int order) {
  return bump(BumpParams{var, center, inner, outer, periodic, order});
}

FieldExpr FieldExpr::bump(const BumpParams& params) {
  if (!(params.inner >= 0.0 && params.outer > params.inner) || !std::isfinite(params.center) ||
      !std::isfinite(params.outer)) {
    throw std::invalid_argument("bump requires 0 <= inner < outer");
  }
  if (params.periodic && params.outer >= 0.5) {
    throw std::invalid_argument("periodic bump requires outer < 1/2");
  }
  if (params.order < 0 || params.order > kMaxSmoothStepOrder) {
    throw std::invalid_argument("bump derivative order out of range");
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::bump;
  n->var = params.var;
  n->bump = params;
  if (params.periodic) n->bump.center = wrap_unit(params.center);
  return FieldExpr(std::move(n));
}

FieldExpr FieldExpr::sum(std::vector<FieldExpr> terms) {
  if (terms.empty()) throw std::invalid_argument("sum needs at least one term");
  auto n = std::make_shared<Node>();
  n->kind = Kind::sum;
  n->children = std::move(terms);
  return FieldExpr(std::move(n));
}

FieldExpr FieldExpr::product(FieldExpr a, FieldExpr b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::product;
  n->children = {std::move(a), std::move(b)};
  return FieldExpr(std::move(n));
}

FieldExpr FieldExpr::scale(double factor, FieldExpr child) {
  if (!std::isfinite(factor)) throw std::invalid_argument("scale factor must be finite");
  auto n = std::make_shared<Node>();
  n->kind = Kind::scale;
  n->value = factor;
  n->children = {std::move(child)};
  return FieldExpr(std::move(n));
}

FieldExpr::Kind FieldExpr::kind() const { return node_->kind; }
double FieldExpr::value() const { return node_->value; }
Var FieldExpr::var() const { return node_->var; }
int FieldExpr::kq() const { return node_->kq; }
int FieldExpr::kp() const { return node_->kp; }
Phase FieldExpr::phase() const { return node_->phase; }
const BumpParams& FieldExpr::bump_params() const { return node_->bump; }
std::span<const FieldExpr> FieldExpr::children() const { return node_->children; }

std::size_t FieldExpr::node_count() const {
  std::size_t count = 1;
  for (const auto& c : node_->children) count += c.node_count();
  return count;
}

double bump_value(const BumpParams& b, double x) {
  double d = x - b.center;
  if (b.periodic) d -= std::nearbyint(d);
  const double ad = std::abs(d);
  if (ad >= b.outer) return 0.0;
  if (ad <= b.inner && b.order == 0) return 1.0;
  const double width = b.outer - b.inner;
  const double t = (b.outer - ad) / width;
  if (b.order == 0) return smooth_step(t);
  // t is affine in x on each side of the center with slope -sign(d)/width.
  const double slope = (d > 0.0 ? -1.0 : 1.0) / width;
  return std::pow(slope, b.order) * smooth_step_derivative(t, b.order);
}

double FieldExpr::operator()(Point2 x) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::constant:
      return n.value;
    case Kind::coord:
      return n.var == Var::q ? x.q : x.p;
    case Kind::trig: {
      const double angle = kTwoPi * (n.kq * x.q + n.kp * x.p);
      return n.phase == Phase::cos ? std::cos(angle) : std::sin(angle);
    }
    case Kind::bump:
      return bump_value(n.bump, n.bump.var == Var::q ? x.q : x.p);
    case Kind::sum: {
      double acc = 0.0;
      for (const auto& c : n.children) acc += c(x);
      return acc;
    }
    case Kind::product: {
      // Every node is finite, so a zero left factor settles the product.
      const double a = n.children[0](x);
      if (a == 0.0) return 0.0;
      return a * n.children[1](x);
    }
    case Kind::scale:
      return n.value * n.children[0](x);
  }
  return 0.0;
}

bool operator==(const FieldExpr& a, const FieldExpr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case FieldExpr::Kind::constant:
      return x.value == y.value;
    case FieldExpr::Kind::coord:
      return x.var == y.var;
    case FieldExpr::Kind::trig:
      return x.kq == y.kq && x.kp == y.kp && x.phase == y.phase;
    case FieldExpr::Kind::bump:
      return x.bump.var == y.bump.var && x.bump.center == y.bump.center &&
             x.bump.inner == y.bump.inner && x.bump.outer == y.bump.outer &&
             x.bump.periodic == y.bump.periodic && x.bump.order == y.bump.order;
    case FieldExpr::Kind::scale:
      if (x.value != y.value) return false;
      break;
    default:
      break;
  }
  return x.children == y.children;
}

FieldExpr operator+(const FieldExpr& a, const FieldExpr& b) { return FieldExpr::sum({a, b}); }

FieldExpr operator-(const FieldExpr& a, const FieldExpr& b) {
  return FieldExpr::sum({a, FieldExpr::scale(-1.0, b)});
}

FieldExpr operator*(double c, const FieldExpr& f) { return FieldExpr::scale(c, f); }

FieldExpr operator*(const FieldExpr& a, const FieldExpr& b) { return FieldExpr::product(a, b); }

double evaluate(const FieldExpr& f, Point2 x) { return f(x); }

namespace {

const FieldExpr& zero() {
  static const FieldExpr z = FieldExpr::constant(0.0);
  return z;
}

FieldExpr sum_nonzero(std::vector<FieldExpr> terms) {
  std::erase_if(terms, [](const FieldExpr& t) { return t.is_zero(); });
  if (terms.empty()) return zero();
  if (terms.size() == 1) return terms.front();
  return FieldExpr::sum(std::move(terms));
}

FieldExpr product_nonzero(const FieldExpr& a, const FieldExpr& b) {
  if (a.is_zero() || b.is_zero()) return zero();
  return FieldExpr::product(a, b);
}

class Differentiator {
 public:
  explicit Differentiator(Var var) : var_(var) {}

  FieldExpr operator()(const FieldExpr& f) {
    if (auto it = memo_.find(f.id()); it != memo_.end()) return it->second;
    FieldExpr d = derive(f);
    memo_.emplace(f.id(), d);
    return d;
  }

 private:
  FieldExpr derive(const FieldExpr& f) {
    using Kind = FieldExpr::Kind;
    switch (f.kind()) {
      case Kind::constant:
        return zero();
      case Kind::coord:
        return FieldExpr::constant(f.var() == var_ ? 1.0 : 0.0);
      case Kind::trig: {
        const int k = var_ == Var::q ? f.kq() : f.kp();
        if (k == 0) return zero();
        if (f.phase() == Phase::sin) {
          return FieldExpr::scale(kTwoPi * k, FieldExpr::trig(f.kq(), f.kp(), Phase::cos));
        }
        return FieldExpr::scale(-kTwoPi * k, FieldExpr::trig(f.kq(), f.kp(), Phase::sin));
      }
      case Kind::bump: {
        if (f.bump_params().var != var_) return zero();
        BumpParams b = f.bump_params();
        b.order += 1;
        return FieldExpr::bump(b);
      }
      case Kind::sum: {
        std::vector<FieldExpr> terms;
        terms.reserve(f.children().size());
        for (const auto& c : f.children()) terms.push_back((*this)(c));
        return sum_nonzero(std::move(terms));
      }
      case Kind::product: {
        const auto& a = f.children()[0];
        const auto& b = f.children()[1];
        return sum_nonzero({product_nonzero((*this)(a), b), product_nonzero(a, (*this)(b))});
      }
      case Kind::scale: {
        FieldExpr d = (*this)(f.children()[0]);
        if (d.is_zero()) return zero();
        return FieldExpr::scale(f.value(), d);
      }
    }
    return zero();
  }

  Var var_;
  std::unordered_map<const void*, FieldExpr> memo_;
};

}  // namespace

FieldExpr differentiate(const FieldExpr& f, Var var) { return Differentiator(var)(f); }

FieldExpr poisson(const FieldExpr& f, const FieldExpr& g) {
  const FieldExpr fq = differentiate(f, Var::q);
  const FieldExpr fp = differentiate(f, Var::p);
  const FieldExpr gq = differentiate(g, Var::q);
  const FieldExpr gp = differentiate(g, Var::p);
  FieldExpr second = product_nonzero(fp, gq);
  if (!second.is_zero()) second = FieldExpr::scale(-1.0, second);
  return sum_nonzero({product_nonzero(fq, gp), second});
}

bool is_periodic(const FieldExpr& f) {
  switch (f.kind()) {
    case FieldExpr::Kind::coord:
      return false;
    case FieldExpr::Kind::bump:
      return f.bump_params().periodic;
    default:
      break;
  }
  return std::ranges::all_of(f.children(), [](const FieldExpr& c) { return is_periodic(c); });
}

int max_trig_mode(const FieldExpr& f) {
  int m = 0;
  if (f.kind() == FieldExpr::Kind::trig) m = std::max(std::abs(f.kq()), std::abs(f.kp()));
  for (const auto& c : f.children()) m = std::max(m, max_trig_mode(c));
  return m;
}

FieldExpr translate(const FieldExpr& f, double dq, double dp) {
  using Kind = FieldExpr::Kind;
  switch (f.kind()) {
    case Kind::constant:
      return f;
    case Kind::coord:
      return FieldExpr::sum({f, FieldExpr::constant(f.var() == Var::q ? -dq : -dp)});
    case Kind::trig: {
      // angle(x - a) = angle(x) - phi
      const double phi = kTwoPi * (f.kq() * dq + f.kp() * dp);
      const FieldExpr c = FieldExpr::trig(f.kq(), f.kp(), Phase::cos);
      const FieldExpr s = FieldExpr::trig(f.kq(), f.kp(), Phase::sin);
      if (f.phase() == Phase::cos) {
        return FieldExpr::sum({FieldExpr::scale(std::cos(phi), c), FieldExpr::scale(std::sin(phi), s)});
      }
      return FieldExpr::sum({FieldExpr::scale(std::cos(phi), s), FieldExpr::scale(-std::sin(phi), c)});
    }
    case Kind::bump: {
      BumpParams b = f.bump_params();
      b.center += b.var == Var::q ? dq : dp;
      return FieldExpr::bump(b);
    }
    case Kind::sum: {
      std::vector<FieldExpr> terms;
      for (const auto& c : f.children()) terms.push_back(translate(c, dq, dp));
      return FieldExpr::sum(std::move(terms));
    }
    case Kind::product:
      return FieldExpr::product(translate(f.children()[0], dq, dp),
                                translate(f.children()[1], dq, dp));
    case Kind::scale:
      return FieldExpr::scale(f.value(), translate(f.children()[0], dq, dp));
  }
  return f;
}

}  // namespace rlab
