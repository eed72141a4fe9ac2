#include <algorithm>
#include <bit>
#include <optional>

#include "projmc/errors.hpp"
#include "projmc/sat_backend.hpp"

namespace projmc {
namespace {

// Appends the clauses excluding every assignment of `vars` whose XOR differs
// from `parity`.
void expand_xor(std::span<const Variable> vars, bool parity, std::vector<Clause>& out) {
  const std::size_t width = vars.size();
  if (width == 0) {
    if (parity) out.push_back(Clause{});
    return;
  }
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << width); ++bits) {
    bool odd = std::popcount(bits) % 2 == 1;
    if (odd == parity) continue;
    Clause c;
    c.literals.reserve(width);
    // Forbid the assignment vars[i] = bit i: each literal is false under it.
    for (std::size_t i = 0; i < width; ++i) c.literals.push_back(Literal{vars[i], ((bits >> i) & 1U) != 0});
    out.push_back(std::move(c));
  }
}

}  // namespace

XorTranslation translate_xors(std::span<const XorConstraint> xors, std::uint32_t next_aux_id, std::size_t width) {
  if (width < 3) throw ContractViolation("XOR chunk width must be at least 3");
  XorTranslation out;
  out.next_aux_id = next_aux_id;
  std::vector<Variable> chunk;
  for (const XorConstraint& x : xors) {
    const auto& vars = x.variables;
    if (vars.size() <= width) {
      expand_xor(vars, x.parity, out.clauses);
      continue;
    }
    // Chain: a_1 = v_1 ⊕ ... ⊕ v_{w-1}; a_{i+1} = a_i ⊕ (next w-2 vars); the
    // last piece a_k ⊕ rest = parity.
    std::size_t pos = 0;
    std::optional<Variable> carry;
    while (true) {
      chunk.clear();
      if (carry) chunk.push_back(*carry);
      std::size_t room = width - chunk.size();
      std::size_t left = vars.size() - pos;
      if (left <= room) {
        chunk.insert(chunk.end(), vars.begin() + static_cast<std::ptrdiff_t>(pos), vars.end());
        expand_xor(chunk, x.parity, out.clauses);
        break;
      }
      std::size_t take = room - 1;
      chunk.insert(chunk.end(), vars.begin() + static_cast<std::ptrdiff_t>(pos),
                   vars.begin() + static_cast<std::ptrdiff_t>(pos + take));
      pos += take;
      Variable aux{out.next_aux_id++};
      chunk.push_back(aux);
      // v... ⊕ aux = 0, i.e. aux equals the XOR of the chunk's other members.
      expand_xor(chunk, false, out.clauses);
      carry = aux;
    }
  }
  return out;
}

Formula lower_xors(const Formula& f, std::size_t width) {
  Formula n = normalize(f);
  if (n.xors.empty()) return n;
  XorTranslation t = translate_xors(n.xors, n.total_vars + 1, width);
  n.xors.clear();
  n.clauses.insert(n.clauses.end(), std::make_move_iterator(t.clauses.begin()),
                   std::make_move_iterator(t.clauses.end()));
  n.total_vars = t.next_aux_id - 1;
  return n;
}

}  // namespace projmc
