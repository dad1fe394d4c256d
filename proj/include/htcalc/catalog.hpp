#pragma once

#include "htcalc/expr.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace htcalc {

/* Space pattern in a family record: absolute space, or S/M with index n+offset. */
struct SpacePat {
    bool relative = false;
    SpaceRef abs;             // when !relative
    SpaceKind relkind = SpaceKind::Sphere;
    long long offset = 0;     // index is n + offset
    SpaceRef at(long long n) const;
    std::string to_string() const;
};

struct GenRecord {
    std::string name;
    bool family = false;          // subscripted instances at index >= minindex
    long long minindex = 0;
    SpacePat dom, cod;
    std::optional<long long> order;       // element order (declared), nullopt = unknown
    long long order_from = 0;             // order applies at index >= order_from (families)
    std::optional<long long> susp_from;   // instance at index >= this is a suspension; nullopt = never
    bool fixed_is_susp = false;           // for fixed symbols
    std::string prov;
    std::string source;                   // file:line
};

struct GroupTable {
    HomKey key;
    GroupPtr group;             // labels are canonical printed generator expressions
    std::vector<Expr> gens;
    std::string prov;
    std::string source;
};

enum class RelMode { Exact, UpToSign, Nonzero };

struct Rule {
    Expr lhs, rhs;              // rhs ignored for Nonzero
    RelMode mode = RelMode::Exact;
    std::string prov;
    std::string source;
    std::string id;             // canonical "lhs = rhs" form, for ablation matching
};

struct BracketRule {
    Expr a, b, c;
    long long t = 0;
    Expr rep;
    bool up_to_sign = false;
    std::vector<Expr> modulo;
    std::string prov;
    std::string source;
    std::string id;
};

struct DeltaRule {
    Expr lhs;                   // a MapApp node
    Expr rhs;
    bool up_to_sign = false;
    std::vector<Expr> modulo;
    std::string prov;
    std::string source;
    std::string id;
};

struct Fibration {
    SpaceRef fiber, total, base;
    std::string imap, pmap, dmap;  // induced/connecting map names
    std::string prov;
    std::string source;
};

/* Immutable axiom base loaded from .cat files.  Family records (with a
 * "for n in [a,b]" clause) are instantiated over the working index window
 * at load time; queries only ever see concrete facts. */
class Catalog : public Resolver {
public:
    /* drop: optional filter; records whose id or provenance contains the
     * string are skipped (ablation support) */
    static Catalog load_files(const std::vector<std::string>& paths,
                              const std::string& drop = "");
    static Catalog load_dir(const std::string& dir, const std::string& drop = "");

    std::optional<GenSig> gen_signature(const std::string& name, long long index) const override;
    const GenRecord* gen_record(const std::string& name) const;
    std::optional<long long> gen_order(const std::string& name, long long index) const;
    bool gen_is_suspension(const std::string& name, long long index) const;

    const GroupTable* group_of(const HomKey& key) const;
    const std::vector<Rule>& rules() const { return rules_; }
    const std::vector<BracketRule>& bracket_rules() const { return bracket_rules_; }
    const std::vector<DeltaRule>& delta_rules() const { return delta_rules_; }
    const std::vector<Fibration>& fibrations() const { return fibrations_; }

    size_t fact_count() const { return fact_count_; }
    std::string serialize() const;

    /* working window for family instantiation */
    static constexpr long long kMaxIndex = 40;

private:
    std::map<std::string, GenRecord> gens_;
    std::map<HomKey, GroupTable> groups_;
    std::vector<Rule> rules_;
    std::vector<BracketRule> bracket_rules_;
    std::vector<DeltaRule> delta_rules_;
    std::vector<Fibration> fibrations_;
    size_t fact_count_ = 0;
};

}  // namespace htcalc
