#include "htcalc/groups.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace htcalc {

/* ---------------- AbelianGroup ---------------- */

AbelianGroup::AbelianGroup(std::vector<long long> factors, std::vector<std::string> labels)
    : factors_(std::move(factors)), labels_(std::move(labels)) {
    if (labels_.empty()) labels_.resize(factors_.size());
    if (labels_.size() != factors_.size())
        throw Error("group: factor/label count mismatch");
    for (long long f : factors_)
        if (f < 0) throw Error("group: negative factor");
    std::set<std::string> seen;
    for (auto& l : labels_) {
        if (l.empty()) continue;
        if (!seen.insert(l).second) throw Error("group: duplicate generator label '" + l + "'");
    }
}

bool AbelianGroup::is_finite() const {
    for (long long f : factors_) if (f == 0) return false;
    return true;
}

long long AbelianGroup::order() const {
    long long n = 1;
    for (long long f : factors_) {
        if (f == 0) throw Error("order of infinite group");
        n *= f;
    }
    return n;
}

long long AbelianGroup::exponent() const {
    long long e = 1;
    for (long long f : factors_) {
        if (f == 0) throw Error("exponent of infinite group");
        e = std::lcm(e, f);
    }
    return e;
}

std::string AbelianGroup::shape_string() const {
    if (factors_.empty()) return "0";
    std::ostringstream os;
    for (size_t i = 0; i < factors_.size(); ++i) {
        if (i) os << " + ";
        if (factors_[i] == 0) os << "Z";
        else os << "Z" << factors_[i];
    }
    return os.str();
}

std::string AbelianGroup::to_string() const {
    if (factors_.empty()) return "0";
    std::ostringstream os;
    for (size_t i = 0; i < factors_.size(); ++i) {
        if (i) os << " + ";
        if (factors_[i] == 0) os << "Z";
        else os << "Z" << factors_[i];
        if (!labels_[i].empty()) os << "{" << labels_[i] << "}";
    }
    return os.str();
}

/* ---------------- GroupElement ---------------- */

static long long reduce_coeff(long long c, long long f) {
    if (f == 0) return c;
    c %= f;
    if (c < 0) c += f;
    return c;
}

GroupElement::GroupElement(GroupPtr g, std::vector<long long> c) : group(std::move(g)), coeffs(std::move(c)) {
    if (!group) throw Error("element without group");
    if (coeffs.size() != group->rank()) throw Error("element/group rank mismatch");
    for (size_t i = 0; i < coeffs.size(); ++i)
        coeffs[i] = reduce_coeff(coeffs[i], group->factors()[i]);
}

GroupElement GroupElement::zero(GroupPtr g) {
    return GroupElement(std::move(g), std::vector<long long>(g ? g->rank() : 0, 0));
}

bool GroupElement::is_zero() const {
    for (long long c : coeffs) if (c != 0) return false;
    return true;
}

static void check_same(const GroupElement& a, const GroupElement& b) {
    if (a.group.get() != b.group.get() && !(a.group && b.group && a.group->factors() == b.group->factors()))
        throw Error("element/group mismatch in arithmetic");
}

GroupElement GroupElement::operator+(const GroupElement& o) const {
    check_same(*this, o);
    std::vector<long long> c(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) c[i] = coeffs[i] + o.coeffs[i];
    return GroupElement(group, std::move(c));
}

GroupElement GroupElement::operator-() const { return scaled(-1); }

GroupElement GroupElement::operator-(const GroupElement& o) const { return *this + (-o); }

GroupElement GroupElement::scaled(long long k) const {
    std::vector<long long> c(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) c[i] = coeffs[i] * k;
    return GroupElement(group, std::move(c));
}

bool GroupElement::operator==(const GroupElement& o) const {
    check_same(*this, o);
    return coeffs == o.coeffs;
}

std::string GroupElement::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] == 0) continue;
        if (!first) os << " + ";
        first = false;
        std::string lbl = group->labels()[i].empty() ? ("g" + std::to_string(i)) : group->labels()[i];
        if (coeffs[i] == 1) os << lbl;
        else os << coeffs[i] << "*" << lbl;
    }
    if (first) os << "0";
    return os.str();
}

std::optional<long long> element_order(const GroupElement& g) {
    long long ord = 1;
    for (size_t i = 0; i < g.coeffs.size(); ++i) {
        long long c = g.coeffs[i], f = g.group->factors()[i];
        if (c == 0) continue;
        if (f == 0) return std::nullopt;
        ord = std::lcm(ord, f / std::gcd(c, f));
    }
    return ord;
}

/* ---------------- Smith normal form ---------------- */

std::vector<long long> smith_invariants(std::vector<std::vector<long long>> m) {
    size_t rows = m.size();
    size_t cols = rows ? m[0].size() : 0;
    for (auto& r : m)
        if (r.size() != cols) throw Error("smith_invariants: ragged matrix");
    size_t n = std::min(rows, cols);
    std::vector<long long> out;
    size_t t = 0;
    while (t < n) {
        /* find a pivot with minimal |value| in the remaining block */
        size_t pi = t, pj = t;
        long long best = 0;
        for (size_t i = t; i < rows; ++i)
            for (size_t j = t; j < cols; ++j)
                if (m[i][j] != 0 && (best == 0 || std::llabs(m[i][j]) < std::llabs(best))) {
                    best = m[i][j]; pi = i; pj = j;
                }
        if (best == 0) break;  // remaining block is zero
        std::swap(m[t], m[pi]);
        for (size_t i = 0; i < rows; ++i) std::swap(m[i][t], m[i][pj]);
        bool again = true;
        while (again) {
            again = false;
            for (size_t i = t + 1; i < rows; ++i) {
                long long q = m[i][t] / m[t][t];
                if (q) for (size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
                if (m[i][t] != 0) { std::swap(m[t], m[i]); again = true; }
            }
            for (size_t j = t + 1; j < cols; ++j) {
                long long q = m[t][j] / m[t][t];
                if (q) for (size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
                if (m[t][j] != 0) {
                    for (size_t i = t; i < rows; ++i) std::swap(m[i][t], m[i][j]);
                    again = true;
                }
            }
        }
        /* ensure divisibility into the rest of the block */
        bool fixed = true;
        for (size_t i = t + 1; i < rows && fixed; ++i)
            for (size_t j = t + 1; j < cols && fixed; ++j)
                if (m[i][j] % m[t][t] != 0) {
                    for (size_t jj = t; jj < cols; ++jj) m[t][jj] += m[i][jj];
                    fixed = false;
                }
        if (!fixed) continue;  // redo elimination at this t
        out.push_back(std::llabs(m[t][t]));
        ++t;
    }
    out.resize(n, 0);
    return out;
}

/* ---------------- lattice helpers (row HNF) ---------------- */

/* reduce rows to a row-style Hermite basis; returns basis rows (rank many) */
static std::vector<std::vector<long long>> hnf_rows(std::vector<std::vector<long long>> m) {
    if (m.empty()) return {};
    size_t cols = m[0].size();
    std::vector<std::vector<long long>> basis;
    size_t row = 0;
    for (size_t col = 0; col < cols; ++col) {
        /* gcd-eliminate below */
        size_t pivot = row;
        bool found = false;
        for (size_t i = row; i < m.size(); ++i)
            if (i < m.size() && m[i][col] != 0) { pivot = i; found = true; break; }
        if (!found) continue;
        std::swap(m[row], m[pivot]);
        for (size_t i = row + 1; i < m.size(); ++i) {
            while (m[i][col] != 0) {
                long long q = m[row][col] / m[i][col];
                for (size_t j = 0; j < cols; ++j) m[row][j] -= q * m[i][j];
                std::swap(m[row], m[i]);
            }
        }
        if (m[row][col] < 0)
            for (size_t j = 0; j < cols; ++j) m[row][j] = -m[row][j];
        /* reduce entries above the pivot */
        for (size_t i = 0; i < row; ++i) {
            long long q = (m[i][col] >= 0 ? m[i][col] : m[i][col] - (m[row][col] - 1)) / m[row][col];
            if (q) for (size_t j = 0; j < cols; ++j) m[i][j] -= q * m[row][j];
        }
        ++row;
        if (row == m.size()) break;
    }
    m.resize(row);
    return m;
}

/* solve x = sum c_i * basis_i where basis is in row-HNF; nullopt if not in lattice */
static std::optional<std::vector<long long>> hnf_solve(const std::vector<std::vector<long long>>& basis,
                                                       std::vector<long long> x) {
    std::vector<long long> c(basis.size(), 0);
    size_t cols = x.size();
    for (size_t b = 0; b < basis.size(); ++b) {
        size_t lead = 0;
        while (lead < cols && basis[b][lead] == 0) ++lead;
        if (lead == cols) continue;
        if (x[lead] % basis[b][lead] != 0) {
            /* leading entry not divisible: try continuing (entries before lead must be 0) */
        }
        long long q = x[lead] / basis[b][lead];
        c[b] = q;
        for (size_t j = 0; j < cols; ++j) x[j] -= q * basis[b][j];
    }
    for (long long v : x) if (v != 0) return std::nullopt;
    return c;
}

/* ---------------- subgroup_generated ---------------- */

static long long mixed_radix_index(const std::vector<long long>& v, const std::vector<long long>& f) {
    long long idx = 0;
    for (size_t i = 0; i < v.size(); ++i) idx = idx * f[i] + v[i];
    return idx;
}

Subgroup subgroup_generated_bfs(const GroupPtr& ambient, const std::vector<GroupElement>& gens) {
    if (!ambient->is_finite()) throw Error("subgroup BFS needs a finite ambient group");
    long long n = ambient->order();
    if (n > (1LL << 16)) throw Error("subgroup BFS cap exceeded");
    Subgroup sg;
    sg.ambient = ambient;
    sg.generators = gens;
    const auto& f = ambient->factors();
    std::set<long long> seen;
    std::vector<std::vector<long long>> frontier{std::vector<long long>(f.size(), 0)};
    seen.insert(mixed_radix_index(frontier[0], f));
    std::vector<std::vector<long long>> all{frontier[0]};
    while (!frontier.empty()) {
        std::vector<std::vector<long long>> next;
        for (const auto& v : frontier) {
            for (const auto& g : gens) {
                if (g.group->factors() != f) throw Error("subgroup generator outside ambient group");
                std::vector<long long> w(v.size());
                for (size_t i = 0; i < v.size(); ++i) w[i] = reduce_coeff(v[i] + g.coeffs[i], f[i]);
                long long idx = mixed_radix_index(w, f);
                if (seen.insert(idx).second) { next.push_back(w); all.push_back(w); }
            }
        }
        frontier = std::move(next);
    }
    std::sort(all.begin(), all.end());
    sg.elements = std::move(all);
    sg.order = (long long)sg.elements.size();
    /* invariants via the lattice path for consistency */
    Subgroup nf = subgroup_generated_nf(ambient, gens);
    sg.invariants = nf.invariants;
    return sg;
}

Subgroup subgroup_generated_nf(const GroupPtr& ambient, const std::vector<GroupElement>& gens) {
    Subgroup sg;
    sg.ambient = ambient;
    sg.generators = gens;
    size_t r = ambient->rank();
    const auto& f = ambient->factors();
    /* L = lattice spanned by gens and the relation lattice K = diag(f) rows (finite factors) */
    std::vector<std::vector<long long>> lrows, krows;
    for (const auto& g : gens) {
        if (g.group->factors() != f) throw Error("subgroup generator outside ambient group");
        lrows.push_back(g.coeffs);
    }
    for (size_t i = 0; i < r; ++i)
        if (f[i] != 0) {
            std::vector<long long> row(r, 0);
            row[i] = f[i];
            krows.push_back(row);
            lrows.push_back(row);
        }
    auto bl = hnf_rows(lrows);
    /* express K basis in terms of L basis, then SNF */
    std::vector<std::vector<long long>> c;
    for (auto& k : krows) {
        auto sol = hnf_solve(bl, k);
        if (!sol) throw Error("internal: relation row outside generated lattice");
        c.push_back(*sol);
    }
    std::vector<long long> inv;
    if (!bl.empty()) {
        if (c.empty()) c.push_back(std::vector<long long>(bl.size(), 0));
        auto d = smith_invariants(c);
        d.resize(bl.size(), 0);
        long long ord = 1;
        bool infinite = false;
        for (size_t i = 0; i < bl.size(); ++i) {
            long long q = d[i];  // L/K cyclic factor (0 = infinite)
            if (q == 1) continue;
            inv.push_back(q);
            if (q == 0) infinite = true; else ord *= q;
        }
        sg.order = infinite ? 0 : ord;
    } else {
        sg.order = 1;
    }
    std::sort(inv.begin(), inv.end(), [](long long a, long long b) {
        if ((a == 0) != (b == 0)) return b == 0;  // finite before infinite
        return a < b;
    });
    sg.invariants = inv;
    return sg;
}

Subgroup subgroup_generated(const GroupPtr& ambient, const std::vector<GroupElement>& gens) {
    if (ambient->is_finite() && ambient->order() <= (1LL << 16))
        return subgroup_generated_bfs(ambient, gens);
    return subgroup_generated_nf(ambient, gens);
}

bool Subgroup::contains(const GroupElement& g) const {
    if (g.group->factors() != ambient->factors()) throw Error("membership test outside ambient group");
    if (!elements.empty())
        return std::binary_search(elements.begin(), elements.end(), g.coeffs);
    /* lattice membership: g in L (K is always inside L) */
    std::vector<std::vector<long long>> lrows;
    for (const auto& h : generators) lrows.push_back(h.coeffs);
    const auto& f = ambient->factors();
    for (size_t i = 0; i < f.size(); ++i)
        if (f[i] != 0) {
            std::vector<long long> row(f.size(), 0);
            row[i] = f[i];
            lrows.push_back(row);
        }
    auto bl = hnf_rows(lrows);
    return hnf_solve(bl, g.coeffs).has_value();
}

std::string Subgroup::to_string() const {
    std::ostringstream os;
    os << "<";
    for (size_t i = 0; i < generators.size(); ++i) {
        if (i) os << ", ";
        os << generators[i].to_string();
    }
    os << ">";
    return os.str();
}

/* ---------------- quotient ---------------- */

AbelianGroup quotient(const GroupPtr& ambient, const Subgroup& sub) {
    if (sub.ambient->factors() != ambient->factors()) throw Error("quotient: subgroup of a different group");
    size_t r = ambient->rank();
    std::vector<std::vector<long long>> rel;
    const auto& f = ambient->factors();
    for (size_t i = 0; i < r; ++i)
        if (f[i] != 0) {
            std::vector<long long> row(r, 0);
            row[i] = f[i];
            rel.push_back(row);
        }
    for (const auto& g : sub.generators) rel.push_back(g.coeffs);
    std::vector<long long> inv;
    if (rel.empty()) {
        inv.assign(r, 0);
    } else {
        auto d = smith_invariants(rel);
        size_t rank_rel = 0;
        for (long long v : d) if (v != 0) ++rank_rel;
        for (long long v : d)
            if (v > 1) inv.push_back(v);
        for (size_t i = 0; i < r - rank_rel; ++i) inv.push_back(0);
    }
    std::sort(inv.begin(), inv.end(), [](long long a, long long b) {
        if ((a == 0) != (b == 0)) return b == 0;
        return a < b;
    });
    std::vector<std::string> labels(inv.size());
    return AbelianGroup(inv, labels);
}

/* ---------------- solve_extension ---------------- */

std::vector<std::vector<long long>> two_group_shapes(long long order) {
    if (order < 1) throw Error("two_group_shapes: bad order");
    long long e = 0, t = order;
    while (t > 1) {
        if (t % 2) throw Error("two_group_shapes: order not a power of 2");
        t /= 2; ++e;
    }
    /* partitions of e, descending parts, as factor lists 2^part */
    std::vector<std::vector<long long>> out;
    std::vector<long long> cur;
    auto rec = [&](auto&& self, long long rem, long long maxpart) -> void {
        if (rem == 0) { out.push_back(cur); return; }
        for (long long p = std::min(rem, maxpart); p >= 1; --p) {
            cur.push_back(1LL << p);
            self(self, rem - p, p);
            cur.pop_back();
        }
    };
    rec(rec, e, e);
    return out;
}

namespace {

struct FiniteGroup {
    std::vector<long long> f;        // factors, ascending use arbitrary but fixed
    long long order;
    explicit FiniteGroup(std::vector<long long> fac) : f(std::move(fac)) {
        order = 1;
        for (long long x : f) order *= x;
    }
    std::vector<long long> elt(long long idx) const {
        std::vector<long long> v(f.size());
        for (size_t i = f.size(); i-- > 0;) { v[i] = idx % f[i]; idx /= f[i]; }
        return v;
    }
    long long idx(const std::vector<long long>& v) const {
        long long n = 0;
        for (size_t i = 0; i < f.size(); ++i) n = n * f[i] + reduce_coeff(v[i], f[i]);
        return n;
    }
    long long add(long long a, long long b) const {
        auto va = elt(a), vb = elt(b);
        for (size_t i = 0; i < f.size(); ++i) va[i] = reduce_coeff(va[i] + vb[i], f[i]);
        return idx(va);
    }
    long long scale(long long a, long long k) const {
        auto va = elt(a);
        for (size_t i = 0; i < f.size(); ++i) va[i] = reduce_coeff(va[i] * k, f[i]);
        return idx(va);
    }
    long long ord(long long a) const {
        auto va = elt(a);
        long long o = 1;
        for (size_t i = 0; i < f.size(); ++i)
            if (va[i]) o = std::lcm(o, f[i] / std::gcd(va[i], f[i]));
        return o;
    }
};

/* closure of a set of element indices inside fg */
std::set<long long> closure(const FiniteGroup& fg, std::vector<long long> gens) {
    std::set<long long> seen{0};
    std::vector<long long> frontier{0};
    while (!frontier.empty()) {
        std::vector<long long> next;
        for (long long v : frontier)
            for (long long g : gens) {
                long long w = fg.add(v, g);
                if (seen.insert(w).second) next.push_back(w);
            }
        frontier = std::move(next);
    }
    return seen;
}

std::vector<long long> subgroup_invariants(const FiniteGroup& fg, const std::set<long long>& elems) {
    /* invariant factors of a finite subgroup given by its element set */
    std::vector<std::vector<long long>> rows;
    for (long long e : elems) rows.push_back(fg.elt(e));
    for (size_t i = 0; i < fg.f.size(); ++i) {
        std::vector<long long> r(fg.f.size(), 0);
        r[i] = fg.f[i];
        rows.push_back(r);
    }
    auto bl = hnf_rows(rows);
    std::vector<std::vector<long long>> c;
    for (size_t i = 0; i < fg.f.size(); ++i) {
        std::vector<long long> r(fg.f.size(), 0);
        r[i] = fg.f[i];
        auto sol = hnf_solve(bl, r);
        c.push_back(*sol);
    }
    auto d = smith_invariants(c);
    d.resize(bl.size(), 0);
    std::vector<long long> inv;
    for (long long v : d) if (v != 1 && v != 0) inv.push_back(v);
    std::sort(inv.begin(), inv.end());
    return inv;
}

std::vector<long long> shape_sorted(const AbelianGroup& g) {
    std::vector<long long> v;
    for (long long f : g.factors()) if (f != 1) v.push_back(f);
    std::sort(v.begin(), v.end());
    return v;
}

/* quotient map structures: cosets of H in G */
struct CosetMap {
    const FiniteGroup& fg;
    std::map<long long, long long> rep;  // element -> coset id
    std::vector<long long> coset_rep;    // coset id -> representative element
    CosetMap(const FiniteGroup& g, const std::set<long long>& h) : fg(g) {
        for (long long e = 0; e < g.order; ++e) {
            if (rep.count(e)) continue;
            long long id = (long long)coset_rep.size();
            for (long long x : h) rep[g.add(e, x)] = id;
            coset_rep.push_back(e);
        }
    }
};

}  // namespace

std::vector<AbelianGroup> solve_extension(const ExtensionProblem& p) {
    if (!p.sub.is_finite() || !p.quot.is_finite())
        throw Error("solve_extension: infinite ends not supported");
    long long na = p.sub.order(), nb = p.quot.order();
    long long n = na * nb;
    if (n > 1024) throw Error("solve_extension: order too large for enumeration");
    for (const auto& fact : p.facts) {
        if (fact.quot_index >= p.quot.rank())
            throw Error("solve_extension: fact '" + fact.label + "' names a missing quotient generator");
        if (fact.lift_order && *fact.lift_order > n)
            throw Error("solve_extension: fact '" + fact.label + "' asks for a lift order exceeding the group order");
        if (fact.doubles_to && !fact.doubles_to->empty() && fact.doubles_to->size() != p.sub.rank())
            throw Error("solve_extension: fact '" + fact.label + "' has a malformed coefficient list");
    }

    std::vector<long long> ainv = shape_sorted(p.sub), binv = shape_sorted(p.quot);
    std::vector<AbelianGroup> result;
    for (const auto& shape : two_group_shapes(n)) {
        FiniteGroup fg(shape);
        /* enumerate subgroups H >= exp(B)*G of order |A| via the elementary quotient;
         * correctness: G/H has exponent dividing exp(B), so exp(B)G <= H */
        long long eb = p.quot.factors().empty() ? 1 : p.quot.exponent();
        std::vector<long long> kgens;
        for (size_t i = 0; i < shape.size(); ++i) {
            std::vector<long long> v(shape.size(), 0);
            v[i] = eb % shape[i];
            if (fg.idx(v) != 0) kgens.push_back(fg.idx(v));
        }
        auto K = closure(fg, kgens);
        long long nk = (long long)K.size();
        if (na % nk != 0) continue;
        /* collect subgroups as element-sets to dedup */
        std::set<std::set<long long>> hset;
        long long ea = 1;
        for (long long v : ainv) ea = std::lcm(ea, v);
        /* walk the subgroup lattice upward from K; extending a subgroup by e
         * is a union of cosets h + k*e, so no fresh closure is needed */
        std::set<std::set<long long>> grow{K};
        std::vector<std::set<long long>> frontier{K};
        while (!frontier.empty()) {
            std::vector<std::set<long long>> next;
            for (const auto& h : frontier) {
                if ((long long)h.size() == na) { hset.insert(h); continue; }
                if ((long long)h.size() > na) continue;
                for (long long e = 0; e < fg.order; ++e) {
                    if (h.count(e)) continue;
                    if (ea % fg.ord(e) != 0) continue;  // cannot sit inside a copy of A
                    std::set<long long> h2 = h;
                    long long m = e;
                    bool oversize = false;
                    while (!h.count(m)) {
                        for (long long x : h) h2.insert(fg.add(x, m));
                        if ((long long)h2.size() > na) { oversize = true; break; }
                        m = fg.add(m, e);
                    }
                    if (oversize) continue;
                    if (grow.insert(h2).second) next.push_back(h2);
                }
            }
            frontier = std::move(next);
        }
        bool ok_candidate = false;
        for (const auto& h : hset) {
            if (subgroup_invariants(fg, h) != ainv) continue;
            CosetMap qm(fg, h);
            /* invariants of G/H via presentation: G's relations + H's elements */
            {
                std::vector<std::vector<long long>> rel;
                for (size_t i = 0; i < shape.size(); ++i) {
                    std::vector<long long> r(shape.size(), 0);
                    r[i] = shape[i];
                    rel.push_back(r);
                }
                for (long long e : h) rel.push_back(fg.elt(e));
                auto d = smith_invariants(rel);
                std::vector<long long> qinv;
                for (long long v : d) if (v > 1) qinv.push_back(v);
                std::sort(qinv.begin(), qinv.end());
                if (qinv != binv) continue;
            }
            /* facts: need an iso psi: B -> G/H and (if referenced) phi: A -> H
             * with all lift facts satisfiable */
            if (p.facts.empty()) { ok_candidate = true; break; }
            bool need_phi = false;
            for (const auto& fact : p.facts)
                if (fact.doubles_to && !std::all_of(fact.doubles_to->begin(), fact.doubles_to->end(),
                                                    [](long long c) { return c == 0; }))
                    need_phi = true;
            /* enumerate images of B's generators among cosets */
            size_t rb = p.quot.rank();
            std::vector<long long> bimg(rb, 0);
            std::vector<long long> hvec(h.begin(), h.end());
            /* phi candidates: tuples of elements of H realizing A's factors */
            std::vector<std::vector<long long>> phis;
            if (need_phi) {
                size_t ra = p.sub.rank();
                auto recp = [&](auto&& self, size_t i, std::vector<long long>& cur) -> void {
                    if (phis.size() > 5000) return;
                    if (i == ra) {
                        auto cl = closure(fg, cur);
                        if ((long long)cl.size() == na) phis.push_back(cur);
                        return;
                    }
                    for (long long e : hvec) {
                        if (fg.ord(e) == p.sub.factors()[i] || (p.sub.factors()[i] == 1 && e == 0)) {
                            cur.push_back(e);
                            self(self, i + 1, cur);
                            cur.pop_back();
                        }
                    }
                };
                std::vector<long long> cur;
                recp(recp, 0, cur);
            } else {
                phis.push_back({});
            }
            bool found = false;
            auto recb = [&](auto&& self, size_t i) -> bool {
                if (i == rb) {
                    /* check psi is an iso: orders and span */
                    std::vector<long long> span_gens;
                    for (size_t j = 0; j < rb; ++j) span_gens.push_back(qm.coset_rep[bimg[j]]);
                    /* span in G/H: count cosets hit */
                    std::set<long long> hit;
                    {
                        std::set<long long> cl = closure(fg, [&] {
                            std::vector<long long> g2 = span_gens;
                            for (long long e : h) g2.push_back(e);
                            return g2;
                        }());
                        for (long long e : cl) hit.insert(qm.rep.at(e));
                    }
                    if ((long long)hit.size() != nb) return false;
                    for (size_t j = 0; j < rb; ++j) {
                        /* coset order must equal B factor order */
                        long long bf = p.quot.factors()[j];
                        long long e = qm.coset_rep[bimg[j]];
                        long long o = 1;
                        long long acc = e;
                        while (qm.rep.at(acc) != 0) { acc = fg.add(acc, e); ++o; }
                        if (o != bf) return false;
                    }
                    for (const auto& phi : phis) {
                        bool all_ok = true;
                        for (const auto& fact : p.facts) {
                            long long target_coset = bimg[fact.quot_index];
                            bool sat = false;
                            for (long long g = 0; g < fg.order && !sat; ++g) {
                                if (qm.rep.at(g) != target_coset) continue;
                                if (fact.lift_order && fg.ord(g) != *fact.lift_order) continue;
                                if (fact.doubles_to) {
                                    long long dbl = fg.scale(g, 2);
                                    long long want = 0;
                                    if (need_phi) {
                                        auto& dc = *fact.doubles_to;
                                        want = 0;
                                        for (size_t t2 = 0; t2 < dc.size(); ++t2)
                                            want = fg.add(want, fg.scale(phi[t2], dc[t2]));
                                    } else {
                                        want = 0;  // doubles to zero
                                    }
                                    if (dbl != want) continue;
                                }
                                sat = true;
                            }
                            if (!sat) { all_ok = false; break; }
                        }
                        if (all_ok) return true;
                    }
                    return false;
                }
                for (long long c = 0; c < (long long)qm.coset_rep.size(); ++c) {
                    bimg[i] = c;
                    if (self(self, i + 1)) return true;
                }
                return false;
            };
            found = recb(recb, 0);
            if (found) { ok_candidate = true; break; }
        }
        if (ok_candidate) {
            std::vector<long long> fs = shape;
            std::sort(fs.begin(), fs.end());
            result.push_back(AbelianGroup(fs, std::vector<std::string>(fs.size())));
        }
    }
    if (result.empty()) {
        std::ostringstream os;
        os << "solve_extension: facts are inconsistent (";
        for (size_t i = 0; i < p.facts.size(); ++i) {
            if (i) os << "; ";
            os << p.facts[i].label;
        }
        os << ")";
        throw Error(os.str());
    }
    return result;
}

}  // namespace htcalc
