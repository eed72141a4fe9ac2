#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "projmc/formula.hpp"
#include "projmc/random.hpp"

namespace projmc {

using BitVector = std::vector<std::uint8_t>;  // one 0/1 value per element

/// A member of the strongly 3-universal family of affine maps
///   z  ↦  offsets ⊕ matrix·z   over Z₂,   Z₂ⁿ → Z₂ᵐ.
class XorHashFunction {
 public:
  XorHashFunction(std::size_t rows, std::size_t key_length, BitVector offsets, BitVector matrix);

  std::size_t rows() const { return rows_; }
  std::size_t key_length() const { return key_length_; }
  std::uint8_t offset(std::size_t row) const { return offsets_[row]; }
  std::uint8_t coefficient(std::size_t row, std::size_t col) const { return matrix_[row * key_length_ + col]; }
  const BitVector& offsets() const { return offsets_; }
  const BitVector& matrix() const { return matrix_; }  // row-major, rows × key_length

  bool operator==(const XorHashFunction&) const = default;

 private:
  std::size_t rows_;
  std::size_t key_length_;
  BitVector offsets_;
  BitVector matrix_;
};

/// Draws all rows·(key_length+1) bits uniformly. For each row the offset bit
/// is drawn first, then the row's coefficients left to right; rows in order.
/// This order is part of the reproducibility contract.
XorHashFunction sample_hash(std::size_t key_length, std::size_t rows, RandomSource& rng);

/// h(key). The key must have h.key_length() entries.
BitVector apply(const XorHashFunction& h, std::span<const std::uint8_t> key);

/// Row i becomes the XOR over {scope[j] : coefficient(i,j) = 1} with parity
/// 1 ⊕ offset(i), i.e. it holds exactly when output bit i of h equals 1.
/// Constant rows are kept (empty variable set).
std::vector<XorConstraint> to_xor_constraints(const XorHashFunction& h, std::span<const Variable> scope);

/// f conjoined with the predicate h(scope) = 1^m.
Formula conjoin_hash(const Formula& f, const XorHashFunction& h);

/// Reads the scope bits of `a` in scope order.
BitVector scope_key(const Assignment& a, std::span<const Variable> scope);

}  // namespace projmc
