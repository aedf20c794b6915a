#pragma once

#include "holofourier/group.hpp"

#include <functional>
#include <memory>
#include <string>

namespace hf {

/// Expression tree for holomorphic functions on G. Variables are bound to
/// group-element coordinates by 1-based factor position: z<k> for a torus
/// factor, a<k>, b<k>, c<k>, d<k> for the entries of an SL2 factor, plus the
/// reserved forms det<k> and tr<k>.
///
/// Holomorphy is enforced syntactically: no conjugation or absolute value
/// exists in the grammar, and division (or a negative power) is accepted
/// only when the divisor is provably nonvanishing on G -- nonzero literals,
/// z<k>, det<k>, and negations/products/powers of those.
struct ExprNode {
    enum class Kind { Literal, Var, Neg, Add, Sub, Mul, Div, Pow, Exp, Det, Tr };
    Kind kind;
    cplx lit{0.0, 0.0};
    int factor = -1;      // Var/Det/Tr: 0-based factor index
    char var = 0;         // Var: 'z','a','b','c','d'
    int exponent = 0;     // Pow
    std::shared_ptr<const ExprNode> a, b;
    std::size_t pos = 0;  // source position for diagnostics
};

using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprAst {
    ExprPtr root;
    GroupSpec spec;
    std::string source;
};

/// Recursive-descent parse against the spec; throws input_error with the
/// offending source position on syntax errors, unknown variables, and
/// holomorphy-rule violations.
ExprAst parse(const std::string& src, const GroupSpec& spec);

cplx eval(const ExprAst& ast, const GroupElement& g);

/// Canonical text form; parse(to_string(ast)) reproduces the tree.
std::string to_string(const ExprAst& ast);

/// Upper bound on log|f(g)|, finite even where direct evaluation overflows
/// (|exp(w)| = exp(Re w), |sum| <= sum of bounds). Exact on products of
/// powers of coordinates. Used by the staircase measure builder.
double log_abs_bound(const ExprAst& ast, const GroupElement& g);

/// A holomorphic function as an evaluator, optionally backed by an AST.
struct HoloFn {
    std::function<cplx(const GroupElement&)> fn;
    std::shared_ptr<const ExprAst> ast;
    std::string name;

    cplx operator()(const GroupElement& g) const { return fn(g); }
};

HoloFn holo_from_ast(ExprAst ast);
HoloFn holo_from_fn(std::function<cplx(const GroupElement&)> fn, std::string name);

/// log|f(g)| via the AST bound when available, otherwise via evaluation.
double holo_log_abs_bound(const HoloFn& f, const GroupElement& g);

}  // namespace hf
