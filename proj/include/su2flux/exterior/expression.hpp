#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>

#include "su2flux/exterior/form.hpp"

namespace su2flux {

/// Names visible to the expression parser.
struct ExpressionScope {
    ContextPtr ctx;
    const std::map<std::string, Form>* forms = nullptr;
    /// Enables `d(...)` when set.
    std::function<Form(const Form&)> differential;
};

/// Parses a form expression.
///
///   expr    := ['+'|'-'] term (('+'|'-') term)*
///   term    := unary (('*' | '/') unary | juxtaposition power)*
///   unary   := '-' unary | power
///   power   := primary ['^' ['-'] int]
///   primary := int | 'i' | basis | name | func '(' expr ')' | '(' expr ')'
///   basis   := ('b'|'e') digit+        b135 = b1 ^ b3 ^ b5
///   func    := conj | re | im | d
///
/// Products of forms are wedge products; division requires a scalar divisor.
/// Errors carry `line` and columns shifted by `column_base - 1`.
Form parse_form_expression(std::string_view text, int dim, const ExpressionScope& scope, int line = 0,
                           int column_base = 1);

/// Parses an expression that must evaluate to a scalar (no basis words).
Scalar parse_scalar_expression(std::string_view text, const ExpressionScope& scope, int line = 0,
                               int column_base = 1);

/// True for names reserved by the grammar (basis words, i, function names).
bool is_reserved_name(std::string_view name);

}  // namespace su2flux
