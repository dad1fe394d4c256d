#pragma once

#include "htcalc/spaces.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace htcalc {

enum class NodeKind {
    Zero,     // 0 (fits any hom-set)
    Iota,     // iota_n, identity of S^n
    IotaM,    // iotaM_n, identity of M^n
    Gen,      // named generator, optionally indexed: eta_6, nu', theta
    Compose,  // a . b . c  (rightmost applied first)
    Sum,      // a + b
    Scalar,   // k*a
    Susp,     // E^k(a)
    Wh,       // P(a)
    Bracket,  // {a, b, c}_t
    Lift,     // lift<a> (into G2), sq[a] (into SU3), rlift[a] (into SO6)
    MapApp,   // delta(a), pU(a), iG(a), ...  induced/connecting maps
};

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    NodeKind kind;
    std::string name;        // Gen base name; Lift flavor; MapApp map name
    long long index = -1;    // Gen/Iota/IotaM subscript (-1 = none)
    long long k = 0;         // Scalar coefficient, Susp count, Bracket subscript t
    std::vector<Expr> args;
};

Expr mk_zero();
Expr mk_iota(long long n);
Expr mk_iota_m(long long n);
Expr mk_gen(std::string name, long long index = -1);
Expr mk_compose(std::vector<Expr> parts);
Expr mk_sum(std::vector<Expr> parts);
Expr mk_scalar(long long k, Expr e);
Expr mk_susp(long long k, Expr e);
Expr mk_wh(Expr e);
Expr mk_bracket(Expr a, Expr b, Expr c, long long t);
Expr mk_lift(std::string flavor, Expr e);  // "lift", "sq", "rlift"
Expr mk_map(std::string map, Expr e);

bool expr_equal(const Expr& a, const Expr& b);
std::string print_expr(const Expr& e);

/* Parses the shared expression grammar:
 *   expr  := term ('+' term)*
 *   term  := [int '*'] chain
 *   chain := atom ('.' atom)*
 *   atom  := IDENT | 'E' ['^' int] '(' expr ')' | 'P' '(' expr ')'
 *          | '{' expr ',' expr ',' expr '}' ['_' int] | '(' expr ')' | '0'
 *          | 'lift' '<' expr '>' | 'sq' '[' expr ']' | 'rlift' '[' expr ']'
 *          | MAPNAME '(' expr ')'
 * Errors carry the byte offset of the failure. */
Expr parse_expr(const std::string& text);

/* Signature of a generator symbol at a concrete index. */
struct GenSig {
    SpaceRef dom, cod;
};

/* Symbol resolution interface; the catalog provides the real one. */
struct Resolver {
    virtual std::optional<GenSig> gen_signature(const std::string& name, long long index) const = 0;
    virtual ~Resolver() = default;
};

/* Hom-set of an expression; dom/cod left empty only for all-zero expressions.
 * Throws Error naming the offending edge on any degree mismatch. */
struct HomInfo {
    std::optional<SpaceRef> dom, cod;
    std::optional<HomKey> key() const {
        if (!dom || !cod) return std::nullopt;
        return HomKey{*dom, *cod};
    }
};

HomInfo homset_of(const Expr& e, const Resolver& r);

/* Connecting/induced map signatures: codomain transformation plus the
 * domain shift (connecting maps lower the domain index by one). */
struct MapSig {
    SpaceRef cod_in, cod_out;
    long long dom_shift = 0;
};
const MapSig* map_signature(const std::string& name);

}  // namespace htcalc
