#pragma once

#include <vector>

#include "lojax/monomial.hpp"

namespace lojax {

enum class OrderKind { degrevlex, lex, negdegrevlex };

/// Monomial order assembled from blocks of consecutive variables. The first
/// block is compared first, so a block order with the drop block in front is
/// an elimination order. degrevlex/lex are global (1 smallest), negdegrevlex
/// is local (1 largest).
class MonomialOrder {
public:
  struct Block {
    OrderKind kind;
    std::size_t size;  // 0 = all remaining variables
  };

  static MonomialOrder global(OrderKind kind = OrderKind::degrevlex) {
    return MonomialOrder({Block{kind, 0}});
  }
  static MonomialOrder local() { return MonomialOrder({Block{OrderKind::negdegrevlex, 0}}); }
  static MonomialOrder elimination(std::size_t drop_count,
                                   OrderKind outer = OrderKind::degrevlex,
                                   OrderKind inner = OrderKind::degrevlex) {
    return MonomialOrder({Block{outer, drop_count}, Block{inner, 0}});
  }

  const std::vector<Block>& blocks() const { return blocks_; }

  bool is_global() const {
    for (const auto& b : blocks_)
      if (b.kind == OrderKind::negdegrevlex) return false;
    return true;
  }
  bool is_local() const {
    for (const auto& b : blocks_)
      if (b.kind != OrderKind::negdegrevlex) return false;
    return true;
  }

  /// Three-way compare: +1 if a is greater, -1 if smaller, 0 if equal.
  int compare(const Monomial& a, const Monomial& b) const {
    std::size_t lo = 0;
    const std::size_t n = a.nvars();
    for (const auto& blk : blocks_) {
      std::size_t hi = blk.size == 0 ? n : std::min(n, lo + blk.size);
      int r = compare_block(blk.kind, a, b, lo, hi);
      if (r != 0) return r;
      lo = hi;
      if (lo >= n) break;
    }
    return 0;
  }

  bool greater(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }

private:
  explicit MonomialOrder(std::vector<Block> blocks) : blocks_(std::move(blocks)) {}

  static int compare_block(OrderKind kind, const Monomial& a, const Monomial& b,
                           std::size_t lo, std::size_t hi) {
    switch (kind) {
      case OrderKind::lex:
        for (std::size_t i = lo; i < hi; ++i)
          if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
        return 0;
      case OrderKind::degrevlex:
      case OrderKind::negdegrevlex: {
        int da = 0, db = 0;
        for (std::size_t i = lo; i < hi; ++i) {
          da += a[i];
          db += b[i];
        }
        if (da != db) {
          bool hi_deg_wins = (kind == OrderKind::degrevlex);
          return (da > db) == hi_deg_wins ? 1 : -1;
        }
        // Reverse lex tie-break: last differing exponent, smaller wins.
        for (std::size_t i = hi; i-- > lo;)
          if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
        return 0;
      }
    }
    return 0;
  }

  std::vector<Block> blocks_;
};

}  // namespace lojax
