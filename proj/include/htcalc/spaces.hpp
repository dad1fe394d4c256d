#pragma once

#include "htcalc/groups.hpp"

#include <optional>
#include <string>

namespace htcalc {

enum class SpaceKind { Sphere, Moore, SU3, G2, V72, SO6, SO7 };

/* Sphere S^n, Moore space M^n (the mod-2 one), or one of the fixed Lie/Stiefel
 * spaces.  SU2 is accepted on input as an alias for S3. */
struct SpaceRef {
    SpaceKind kind = SpaceKind::Sphere;
    long long n = 0;  // meaningful for Sphere/Moore only

    static SpaceRef sphere(long long n) { return {SpaceKind::Sphere, n}; }
    static SpaceRef moore(long long n) { return {SpaceKind::Moore, n}; }
    static SpaceRef fixed(SpaceKind k) { return {k, 0}; }

    bool suspendable() const { return kind == SpaceKind::Sphere || kind == SpaceKind::Moore; }
    SpaceRef shifted(long long k) const;

    bool operator==(const SpaceRef& o) const { return kind == o.kind && n == o.n; }
    bool operator!=(const SpaceRef& o) const { return !(*this == o); }
    bool operator<(const SpaceRef& o) const {
        if (kind != o.kind) return kind < o.kind;
        return n < o.n;
    }
    std::string to_string() const;
};

std::optional<SpaceRef> parse_space(const std::string& s);

/* Hom-set key: maps dom -> cod, i.e. [dom, cod]; pi_k(Y) has dom = S^k. */
struct HomKey {
    SpaceRef dom, cod;
    bool operator==(const HomKey& o) const { return dom == o.dom && cod == o.cod; }
    bool operator<(const HomKey& o) const {
        if (!(dom == o.dom)) return dom < o.dom;
        return cod < o.cod;
    }
    std::string to_string() const { return "[" + dom.to_string() + ", " + cod.to_string() + "]"; }
};

}  // namespace htcalc
