#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rlab/field.hpp"

namespace rlab {

/// Flat evaluation program for one or more trees. Structurally equal subtrees
/// are evaluated once, and sin/cos of the same mode share one sincos.
/// Intended for hot loops (flow velocities) where the same small trees are
/// evaluated millions of times.
class CompiledField {
 public:
  explicit CompiledField(const std::vector<FieldExpr>& outputs);

  std::size_t output_count() const { return outputs_.size(); }
  std::size_t slot_count() const { return slot_count_; }

  /// Writes one value per output. `scratch` must hold at least slot_count() doubles.
  void evaluate(Point2 x, std::span<double> scratch, std::span<double> out) const;

 private:
  enum class Op : std::uint8_t { constant, coord_q, coord_p, sincos, bump, sum, product, scale };
  struct Instr {
    Op op;
    std::uint32_t dst;
    std::uint32_t a = 0;  // first operand / operand list offset
    std::uint32_t b = 0;  // second operand / operand count
    double c = 0.0;
    int kq = 0;
    int kp = 0;
    std::uint32_t bump = 0;
  };

  std::vector<Instr> code_;
  std::vector<std::uint32_t> operands_;
  std::vector<BumpParams> bumps_;
  std::vector<std::uint32_t> outputs_;
  std::size_t slot_count_ = 0;
  // Trig modes up to this order are built from sincos(2 pi q), sincos(2 pi p)
  // by complex multiplication instead of one libm call each.
  static constexpr int kMaxPowerMode = 8;
  int max_kq_ = 0;
  int max_kp_ = 0;
  bool use_powers_ = false;

  struct Builder;
  friend struct Builder;
};

}  // namespace rlab
