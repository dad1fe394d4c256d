#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace htcalc {

struct Error : std::exception {
    std::string msg;
    explicit Error(std::string m) : msg(std::move(m)) {}
    const char* what() const noexcept override { return msg.c_str(); }
};

/* Finitely generated abelian group as an ordered list of cyclic factors.
 * factor 0 encodes an infinite cyclic summand, k >= 1 a Z_k summand. */
class AbelianGroup {
public:
    AbelianGroup() = default;
    AbelianGroup(std::vector<long long> factors, std::vector<std::string> labels);

    const std::vector<long long>& factors() const { return factors_; }
    const std::vector<std::string>& labels() const { return labels_; }
    size_t rank() const { return factors_.size(); }
    bool is_trivial() const { return factors_.empty(); }
    bool is_finite() const;
    /* product of finite factors; throws on an infinite factor */
    long long order() const;
    long long exponent() const;  // lcm of finite factors; throws if infinite
    bool same_shape(const AbelianGroup& o) const { return factors_ == o.factors_; }
    std::string shape_string() const;   // e.g. "Z4 + Z2 + Z2" or "0"
    std::string to_string() const;      // shape with generator labels

    static AbelianGroup trivial() { return AbelianGroup({}, {}); }

private:
    std::vector<long long> factors_;
    std::vector<std::string> labels_;
};

using GroupPtr = std::shared_ptr<const AbelianGroup>;

/* Element of an AbelianGroup: one coefficient per factor, reduced to [0,k). */
struct GroupElement {
    GroupPtr group;
    std::vector<long long> coeffs;

    GroupElement() = default;
    GroupElement(GroupPtr g, std::vector<long long> c);

    bool is_zero() const;
    GroupElement operator+(const GroupElement& o) const;
    GroupElement operator-() const;
    GroupElement operator-(const GroupElement& o) const;
    GroupElement scaled(long long k) const;
    bool operator==(const GroupElement& o) const;
    std::string to_string() const;

    static GroupElement zero(GroupPtr g);
};

/* order of g: least n>=1 with n*g = 0, or nullopt for infinite */
std::optional<long long> element_order(const GroupElement& g);

/* Smith invariant factors d1 | d2 | ... of an integer matrix, zero-padded to
 * min(rows, cols). Deterministic; empty matrix gives an empty list. */
std::vector<long long> smith_invariants(std::vector<std::vector<long long>> m);

struct Subgroup {
    GroupPtr ambient;
    std::vector<GroupElement> generators;
    /* filled in by subgroup_generated */
    long long order = 1;
    std::vector<long long> invariants;  // invariant factors, 1s dropped
    /* explicit element list when the closure was enumerated (ambient order <= 2^16) */
    std::vector<std::vector<long long>> elements;

    bool contains(const GroupElement& g) const;
    std::string to_string() const;
};

/* Additive closure of gens inside ambient.  BFS enumeration for ambient order
 * <= 2^16, Smith-form lattice arithmetic above that; the two paths agree (tested). */
Subgroup subgroup_generated(const GroupPtr& ambient, const std::vector<GroupElement>& gens);
/* force one path or the other, for cross-checking */
Subgroup subgroup_generated_bfs(const GroupPtr& ambient, const std::vector<GroupElement>& gens);
Subgroup subgroup_generated_nf(const GroupPtr& ambient, const std::vector<GroupElement>& gens);

/* Invariant-factor decomposition of ambient/sub; labels carry coset provenance. */
AbelianGroup quotient(const GroupPtr& ambient, const Subgroup& sub);

/* One fact about the middle group of 0 -> A -> G -> B -> 0.
 * quot_index names a generator of B; a lift of it is asserted to have the given
 * order, and/or to double into the image of the named A-element. */
struct LiftFact {
    size_t quot_index = 0;
    std::optional<long long> lift_order;
    /* coefficients of an A-element e with 2*lift = iota(e); empty vector = 2*lift = 0 */
    std::optional<std::vector<long long>> doubles_to;
    std::string label;  // for error messages
};

struct ExtensionProblem {
    AbelianGroup sub;   // A
    AbelianGroup quot;  // B
    std::vector<LiftFact> facts;
};

/* All iso classes of abelian 2-groups G fitting 0 -> A -> G -> B -> 0 and
 * consistent with every fact.  Contradictory facts raise Error naming them. */
std::vector<AbelianGroup> solve_extension(const ExtensionProblem& p);

/* partitions of 2^e into 2-power parts, as factor lists (descending) */
std::vector<std::vector<long long>> two_group_shapes(long long order);

}  // namespace htcalc
