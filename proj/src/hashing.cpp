#include "projmc/hashing.hpp"

#include "projmc/errors.hpp"

namespace projmc {

XorHashFunction::XorHashFunction(std::size_t rows, std::size_t key_length, BitVector offsets, BitVector matrix)
    : rows_(rows), key_length_(key_length), offsets_(std::move(offsets)), matrix_(std::move(matrix)) {
  if (rows_ < 1) throw ContractViolation("hash function needs at least one row");
  if (offsets_.size() != rows_ || matrix_.size() != rows_ * key_length_)
    throw ContractViolation("hash function bit count must be rows * (key_length + 1)");
}

XorHashFunction sample_hash(std::size_t key_length, std::size_t rows, RandomSource& rng) {
  if (rows < 1) throw ContractViolation("sample_hash requires rows >= 1");
  BitVector offsets(rows);
  BitVector matrix(rows * key_length);
  for (std::size_t i = 0; i < rows; ++i) {
    offsets[i] = rng.next_bit();
    for (std::size_t j = 0; j < key_length; ++j) matrix[i * key_length + j] = rng.next_bit();
  }
  return XorHashFunction(rows, key_length, std::move(offsets), std::move(matrix));
}

BitVector apply(const XorHashFunction& h, std::span<const std::uint8_t> key) {
  if (key.size() != h.key_length())
    throw ContractViolation("key length " + std::to_string(key.size()) + " does not match hash key length " +
                            std::to_string(h.key_length()));
  BitVector out(h.rows());
  for (std::size_t i = 0; i < h.rows(); ++i) {
    std::uint8_t bit = h.offset(i);
    for (std::size_t j = 0; j < h.key_length(); ++j) bit ^= h.coefficient(i, j) & key[j];
    out[i] = bit & 1U;
  }
  return out;
}

std::vector<XorConstraint> to_xor_constraints(const XorHashFunction& h, std::span<const Variable> scope) {
  if (scope.size() != h.key_length()) throw ContractViolation("scope size does not match hash key length");
  std::vector<XorConstraint> out;
  out.reserve(h.rows());
  for (std::size_t i = 0; i < h.rows(); ++i) {
    XorConstraint x{{}, h.offset(i) == 0};
    for (std::size_t j = 0; j < h.key_length(); ++j)
      if (h.coefficient(i, j)) x.variables.push_back(scope[j]);
    out.push_back(std::move(x));
  }
  return out;
}

Formula conjoin_hash(const Formula& f, const XorHashFunction& h) {
  if (h.key_length() != f.scope.size())
    throw ContractViolation("hash key length " + std::to_string(h.key_length()) + " does not match scope size " +
                            std::to_string(f.scope.size()));
  Formula out = f;
  auto rows = to_xor_constraints(h, f.scope);
  out.xors.insert(out.xors.end(), std::make_move_iterator(rows.begin()), std::make_move_iterator(rows.end()));
  return out;
}

BitVector scope_key(const Assignment& a, std::span<const Variable> scope) {
  BitVector key;
  key.reserve(scope.size());
  for (Variable v : scope) key.push_back(a.value(v) ? 1 : 0);
  return key;
}

}  // namespace projmc
