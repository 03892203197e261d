#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bhom/errors.hpp"
#include "bhom/geometry.hpp"

namespace bhom {

/// Which pair of coordinate symbols an expression may reference.
/// Cell data (conductivities, reaction, resistivity) lives on the unit cell
/// and sees y1, y2; macroscopic sources see x1, x2. Constants parse under
/// either domain.
enum class SymbolDomain { cell, macro };

/// Immutable closed-form scalar function of two variables.
///
/// Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := number | symbol | 'pi' | func '(' expr ')' | '(' expr ')' | '-' factor
///   func   := 'cos' | 'sin' | 'exp'
///
/// Evaluation is pure and deterministic: a fixed left-to-right depth-first
/// order, so identical trees give bit-identical results. Safe to evaluate
/// from many threads concurrently.
class Expression {
 public:
  enum class Op : std::uint8_t {
    constant, sym0, sym1, pi, add, sub, mul, div, neg, cos, sin, exp
  };

  struct Node {
    Op op;
    double value = 0.0;  // constant payload
    std::int32_t lhs = -1;
    std::int32_t rhs = -1;
  };

  Expression() = default;  // empty; eval on an empty expression throws

  /// Value at a point; p maps to (y1,y2) or (x1,x2) per the parse domain.
  /// Throws Errc::eval_error if any intermediate is non-finite.
  double eval(Vec2 p) const;

  /// Reparseable text form (fully parenthesized, %.17g literals), so that
  /// parse(str()) reproduces the tree exactly.
  std::string str() const;

  bool identical(const Expression& o) const;
  bool empty() const { return nodes_.empty(); }
  SymbolDomain domain() const { return domain_; }

  /// True when the expression references no coordinate symbol.
  bool is_constant_form() const;

  const std::vector<Node>& nodes() const { return nodes_; }
  std::int32_t root() const { return root_; }

 private:
  friend Expression parse_expression(std::string_view, SymbolDomain);
  friend class ExprBuilder;

  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
  SymbolDomain domain_ = SymbolDomain::cell;
};

/// Parses text against the grammar above. Symbols outside the domain's pair
/// are rejected (Errc::unknown_symbol); syntax errors carry the byte offset;
/// a division whose denominator is a statically-zero literal is rejected at
/// parse time.
Expression parse_expression(std::string_view text, SymbolDomain domain);

/// Convenience for building derived expressions (e.g. scaled sources).
class ExprBuilder {
 public:
  static Expression constant(double v, SymbolDomain domain);
  /// scale * e, as an explicit product node.
  static Expression scaled(double scale, const Expression& e);
};

}  // namespace bhom
