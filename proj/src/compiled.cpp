#include "rlab/compiled.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <unordered_map>

namespace rlab {

struct CompiledField::Builder {
  CompiledField& prog;
  std::unordered_map<const void*, std::uint32_t> by_node;
  std::map<std::vector<double>, std::uint32_t> by_key;

  std::uint32_t emit(std::vector<double> key, Instr instr, std::uint32_t width = 1) {
    if (auto it = by_key.find(key); it != by_key.end()) return it->second;
    instr.dst = static_cast<std::uint32_t>(prog.slot_count_);
    prog.slot_count_ += width;
    prog.code_.push_back(instr);
    by_key.emplace(std::move(key), instr.dst);
    return instr.dst;
  }

  std::uint32_t compile(const FieldExpr& f) {
    if (auto it = by_node.find(f.id()); it != by_node.end()) return it->second;
    const std::uint32_t slot = build(f);
    by_node.emplace(f.id(), slot);
    return slot;
  }

  std::uint32_t build(const FieldExpr& f) {
    using Kind = FieldExpr::Kind;
    switch (f.kind()) {
      case Kind::constant:
        return emit({0, f.value()}, {Op::constant, 0, 0, 0, f.value()});
      case Kind::coord:
        return f.var() == Var::q ? emit({1, 0}, {Op::coord_q, 0}) : emit({1, 1}, {Op::coord_p, 0});
      case Kind::trig: {
        Instr in{Op::sincos, 0};
        in.kq = f.kq();
        in.kp = f.kp();
        const std::uint32_t base = emit({2, double(f.kq()), double(f.kp())}, in, 2);
        return f.phase() == Phase::sin ? base : base + 1;
      }
      case Kind::bump: {
        const auto& b = f.bump_params();
        std::vector<double> key = {3, double(b.var), b.center, b.inner, b.outer, double(b.periodic),
                                   double(b.order)};
        if (auto it = by_key.find(key); it != by_key.end()) return it->second;
        Instr in{Op::bump, 0};
        in.bump = static_cast<std::uint32_t>(prog.bumps_.size());
        prog.bumps_.push_back(b);
        return emit(std::move(key), in);
      }
      case Kind::sum: {
        std::vector<std::uint32_t> kids;
        for (const auto& c : f.children()) kids.push_back(compile(c));
        std::vector<double> key = {4};
        for (auto k : kids) key.push_back(k);
        if (auto it = by_key.find(key); it != by_key.end()) return it->second;
        Instr in{Op::sum, 0};
        in.a = static_cast<std::uint32_t>(prog.operands_.size());
        in.b = static_cast<std::uint32_t>(kids.size());
        prog.operands_.insert(prog.operands_.end(), kids.begin(), kids.end());
        return emit(std::move(key), in);
      }
      case Kind::product: {
        const auto a = compile(f.children()[0]);
        const auto b = compile(f.children()[1]);
        return emit({5, double(a), double(b)}, {Op::product, 0, a, b});
      }
      case Kind::scale: {
        const auto a = compile(f.children()[0]);
        return emit({6, f.value(), double(a)}, {Op::scale, 0, a, 0, f.value()});
      }
    }
    return 0;
  }
};

CompiledField::CompiledField(const std::vector<FieldExpr>& outputs) {
  Builder builder{*this, {}, {}};
  for (const auto& f : outputs) outputs_.push_back(builder.compile(f));
  bool any_trig = false;
  for (const Instr& in : code_) {
    if (in.op != Op::sincos) continue;
    any_trig = true;
    max_kq_ = std::max(max_kq_, std::abs(in.kq));
    max_kp_ = std::max(max_kp_, std::abs(in.kp));
  }
  use_powers_ = any_trig && max_kq_ <= kMaxPowerMode && max_kp_ <= kMaxPowerMode;
}

namespace {

struct Rot {
  double c = 1.0;
  double s = 0.0;
};

// powers[j] = (cos, sin) of 2 pi j x for j = 0..top.
void fill_powers(double x, int top, Rot* powers) {
  powers[0] = {};
  if (top == 0) return;
  const double angle = 2.0 * std::numbers::pi * x;
  powers[1] = {std::cos(angle), std::sin(angle)};
  for (int j = 2; j <= top; ++j) {
    const Rot& a = powers[j - 1];
    const Rot& b = powers[1];
    powers[j] = {a.c * b.c - a.s * b.s, a.s * b.c + a.c * b.s};
  }
}

Rot power(const Rot* powers, int k) {
  const Rot r = powers[std::abs(k)];
  return k < 0 ? Rot{r.c, -r.s} : r;
}

}  // namespace

void CompiledField::evaluate(Point2 x, std::span<double> scratch, std::span<double> out) const {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double* s = scratch.data();
  Rot pq[kMaxPowerMode + 1];
  Rot pp[kMaxPowerMode + 1];
  if (use_powers_) {
    fill_powers(x.q, max_kq_, pq);
    fill_powers(x.p, max_kp_, pp);
  }
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::constant:
        s[in.dst] = in.c;
        break;
      case Op::coord_q:
        s[in.dst] = x.q;
        break;
      case Op::coord_p:
        s[in.dst] = x.p;
        break;
      case Op::sincos: {
        if (use_powers_) {
          const Rot a = power(pq, in.kq);
          const Rot b = power(pp, in.kp);
          s[in.dst] = a.s * b.c + a.c * b.s;
          s[in.dst + 1] = a.c * b.c - a.s * b.s;
          break;
        }
        const double angle = kTwoPi * (in.kq * x.q + in.kp * x.p);
        s[in.dst] = std::sin(angle);
        s[in.dst + 1] = std::cos(angle);
        break;
      }
      case Op::bump: {
        const BumpParams& b = bumps_[in.bump];
        s[in.dst] = bump_value(b, b.var == Var::q ? x.q : x.p);
        break;
      }
      case Op::sum: {
        double acc = 0.0;
        for (std::uint32_t k = 0; k < in.b; ++k) acc += s[operands_[in.a + k]];
        s[in.dst] = acc;
        break;
      }
      case Op::product:
        s[in.dst] = s[in.a] * s[in.b];
        break;
      case Op::scale:
        s[in.dst] = in.c * s[in.a];
        break;
    }
  }
  for (std::size_t k = 0; k < outputs_.size(); ++k) out[k] = s[outputs_[k]];
}

}  // namespace rlab
