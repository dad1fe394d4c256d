#include "htcalc/expr.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace htcalc {

/* ---------------- SpaceRef ---------------- */

SpaceRef SpaceRef::shifted(long long k) const {
    if (!suspendable()) throw Error("cannot shift " + to_string());
    SpaceRef s = *this;
    s.n += k;
    long long min = (kind == SpaceKind::Sphere) ? 1 : 2;
    if (s.n < min) throw Error("shift below the minimum index of " + to_string());
    return s;
}

std::string SpaceRef::to_string() const {
    switch (kind) {
        case SpaceKind::Sphere: return "S" + std::to_string(n);
        case SpaceKind::Moore: return "M" + std::to_string(n);
        case SpaceKind::SU3: return "SU3";
        case SpaceKind::G2: return "G2";
        case SpaceKind::V72: return "V72";
        case SpaceKind::SO6: return "SO6";
        case SpaceKind::SO7: return "SO7";
    }
    return "?";
}

std::optional<SpaceRef> parse_space(const std::string& s) {
    if (s == "SU3") return SpaceRef::fixed(SpaceKind::SU3);
    if (s == "SU2") return SpaceRef::sphere(3);
    if (s == "G2") return SpaceRef::fixed(SpaceKind::G2);
    if (s == "V72") return SpaceRef::fixed(SpaceKind::V72);
    if (s == "SO6") return SpaceRef::fixed(SpaceKind::SO6);
    if (s == "SO7") return SpaceRef::fixed(SpaceKind::SO7);
    if (s.size() >= 2 && (s[0] == 'S' || s[0] == 'M')) {
        for (size_t i = 1; i < s.size(); ++i)
            if (!std::isdigit((unsigned char)s[i])) return std::nullopt;
        long long n = std::stoll(s.substr(1));
        if (s[0] == 'S' && n >= 1) return SpaceRef::sphere(n);
        if (s[0] == 'M' && n >= 2) return SpaceRef::moore(n);
    }
    return std::nullopt;
}

/* ---------------- factories ---------------- */

static Expr node(NodeKind k) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    return n;
}

Expr mk_zero() { return node(NodeKind::Zero); }

Expr mk_iota(long long n) {
    auto e = std::make_shared<ExprNode>();
    e->kind = NodeKind::Iota;
    e->index = n;
    return e;
}

Expr mk_iota_m(long long n) {
    auto e = std::make_shared<ExprNode>();
    e->kind = NodeKind::IotaM;
    e->index = n;
    return e;
}

Expr mk_gen(std::string name, long long index) {
    auto e = std::make_shared<ExprNode>();
    e->kind = NodeKind::Gen;
    e->name = std::move(name);
    e->index = index;
    return e;
}

Expr mk_compose(std::vector<Expr> parts) {
    if (parts.empty()) throw Error("empty composition");
    if (parts.size() == 1) return parts[0];
    auto e = std::make_shared<ExprNode>();
    e->kind = NodeKind::Compose;
    e->args = std::move(parts);
    return e;
}

Expr mk_sum(std::vector<Expr> parts) {
    if (parts.empty()) return mk_zero();
    if (parts.size() == 1) return parts[0];
    auto e = std::make_shared<ExprNode>();
    e->kind = NodeKind::Sum;
    e->args = std::move(parts);
    return e;
}

Expr mk_scalar(long long k, Expr x) {
    auto e = std::make_shared<ExprNode>();
    e->kind = NodeKind::Scalar;
    e->k = k;
    e->args = {std::move(x)};
    return e;
}

Expr mk_susp(long long k, Expr x) {
    if (k < 1) throw Error("suspension count must be positive");
    auto e = std::make_shared<ExprNode>();
    e->kind = NodeKind::Susp;
    e->k = k;
    e->args = {std::move(x)};
    return e;
}

Expr mk_wh(Expr x) {
    auto e = std::make_shared<ExprNode>();
    e->kind = NodeKind::Wh;
    e->args = {std::move(x)};
    return e;
}

Expr mk_bracket(Expr a, Expr b, Expr c, long long t) {
    if (t < 0) throw Error("bracket subscript must be non-negative");
    auto e = std::make_shared<ExprNode>();
    e->kind = NodeKind::Bracket;
    e->k = t;
    e->args = {std::move(a), std::move(b), std::move(c)};
    return e;
}

Expr mk_lift(std::string flavor, Expr x) {
    if (flavor != "lift" && flavor != "sq" && flavor != "rlift")
        throw Error("unknown lift flavor '" + flavor + "'");
    auto e = std::make_shared<ExprNode>();
    e->kind = NodeKind::Lift;
    e->name = std::move(flavor);
    e->args = {std::move(x)};
    return e;
}

Expr mk_map(std::string map, Expr x) {
    if (!map_signature(map)) throw Error("unknown map '" + map + "'");
    auto e = std::make_shared<ExprNode>();
    e->kind = NodeKind::MapApp;
    e->name = std::move(map);
    e->args = {std::move(x)};
    return e;
}

bool expr_equal(const Expr& a, const Expr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind || a->name != b->name || a->index != b->index || a->k != b->k)
        return false;
    if (a->args.size() != b->args.size()) return false;
    for (size_t i = 0; i < a->args.size(); ++i)
        if (!expr_equal(a->args[i], b->args[i])) return false;
    return true;
}

/* ---------------- printer ---------------- */

static void print_rec(const Expr& e, std::ostream& os, int ctx);
/* ctx: 0 = expr position, 1 = term/chain position, 2 = atom position */

static void print_child_as_atom(const Expr& e, std::ostream& os) {
    bool needs_parens = e->kind == NodeKind::Sum || e->kind == NodeKind::Scalar ||
                        e->kind == NodeKind::Compose;
    if (needs_parens) {
        os << "(";
        print_rec(e, os, 0);
        os << ")";
    } else {
        print_rec(e, os, 2);
    }
}

static void print_rec(const Expr& e, std::ostream& os, int ctx) {
    switch (e->kind) {
        case NodeKind::Zero: os << "0"; return;
        case NodeKind::Iota: os << "iota_" << e->index; return;
        case NodeKind::IotaM: os << "iotaM_" << e->index; return;
        case NodeKind::Gen:
            os << e->name;
            if (e->index >= 0) os << "_" << e->index;
            return;
        case NodeKind::Compose: {
            bool wrap = ctx >= 2;
            if (wrap) os << "(";
            for (size_t i = 0; i < e->args.size(); ++i) {
                if (i) os << " . ";
                print_child_as_atom(e->args[i], os);
            }
            if (wrap) os << ")";
            return;
        }
        case NodeKind::Sum: {
            bool wrap = ctx >= 1;
            if (wrap) os << "(";
            for (size_t i = 0; i < e->args.size(); ++i) {
                if (i) os << " + ";
                print_rec(e->args[i], os, 1);
            }
            if (wrap) os << ")";
            return;
        }
        case NodeKind::Scalar: {
            bool wrap = ctx >= 2;
            if (wrap) os << "(";
            os << e->k << "*";
            const Expr& c = e->args[0];
            if (c->kind == NodeKind::Sum || c->kind == NodeKind::Scalar) {
                os << "(";
                print_rec(c, os, 0);
                os << ")";
            } else {
                print_rec(c, os, 1);
            }
            if (wrap) os << ")";
            return;
        }
        case NodeKind::Susp:
            os << "E";
            if (e->k != 1) os << "^" << e->k;
            os << "(";
            print_rec(e->args[0], os, 0);
            os << ")";
            return;
        case NodeKind::Wh:
            os << "P(";
            print_rec(e->args[0], os, 0);
            os << ")";
            return;
        case NodeKind::Bracket:
            os << "{";
            for (size_t i = 0; i < 3; ++i) {
                if (i) os << ", ";
                print_rec(e->args[i], os, 0);
            }
            os << "}";
            if (e->k > 0) os << "_" << e->k;
            return;
        case NodeKind::Lift:
            if (e->name == "lift") {
                os << "lift<";
                print_rec(e->args[0], os, 0);
                os << ">";
            } else {
                os << e->name << "[";
                print_rec(e->args[0], os, 0);
                os << "]";
            }
            return;
        case NodeKind::MapApp:
            os << e->name << "(";
            print_rec(e->args[0], os, 0);
            os << ")";
            return;
    }
}

std::string print_expr(const Expr& e) {
    std::ostringstream os;
    print_rec(e, os, 0);
    return os.str();
}

/* ---------------- map signatures ---------------- */

const MapSig* map_signature(const std::string& name) {
    static const std::map<std::string, MapSig> sigs = {
        /* connecting maps of the four fibrations: domain drops by one */
        {"delta", {SpaceRef::sphere(6), SpaceRef::fixed(SpaceKind::SU3), -1}},
        {"deltaU", {SpaceRef::sphere(5), SpaceRef::sphere(3), -1}},
        {"deltaV", {SpaceRef::fixed(SpaceKind::V72), SpaceRef::sphere(3), -1}},
        {"deltaR", {SpaceRef::sphere(6), SpaceRef::fixed(SpaceKind::SO6), -1}},
        /* induced maps of the bundle inclusions/projections */
        {"pU", {SpaceRef::fixed(SpaceKind::SU3), SpaceRef::sphere(5), 0}},
        {"pG", {SpaceRef::fixed(SpaceKind::G2), SpaceRef::sphere(6), 0}},
        {"pV", {SpaceRef::fixed(SpaceKind::G2), SpaceRef::fixed(SpaceKind::V72), 0}},
        {"iU", {SpaceRef::sphere(3), SpaceRef::fixed(SpaceKind::SU3), 0}},
        {"iG", {SpaceRef::fixed(SpaceKind::SU3), SpaceRef::fixed(SpaceKind::G2), 0}},
        {"i3", {SpaceRef::sphere(3), SpaceRef::fixed(SpaceKind::G2), 0}},
        {"iV", {SpaceRef::sphere(3), SpaceRef::fixed(SpaceKind::V72), 0}},
        {"r3", {SpaceRef::fixed(SpaceKind::SU3), SpaceRef::fixed(SpaceKind::SO6), 0}},
        {"h7", {SpaceRef::fixed(SpaceKind::G2), SpaceRef::fixed(SpaceKind::SO7), 0}},
        {"i7", {SpaceRef::fixed(SpaceKind::SO6), SpaceRef::fixed(SpaceKind::SO7), 0}},
        {"p7", {SpaceRef::fixed(SpaceKind::SO7), SpaceRef::sphere(6), 0}},
    };
    auto it = sigs.find(name);
    return it == sigs.end() ? nullptr : &it->second;
}

/* ---------------- parser ---------------- */

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    [[noreturn]] void fail(const std::string& msg) {
        std::ostringstream os;
        os << "parse error at " << pos << ": " << msg;
        if (pos < s.size()) os << " (near '" << s.substr(pos, 12) << "')";
        throw Error(os.str());
    }
    void ws() {
        while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
    }
    bool peek(char c) {
        ws();
        return pos < s.size() && s[pos] == c;
    }
    bool eat(char c) {
        if (!peek(c)) return false;
        ++pos;
        return true;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }
    long long integer() {
        ws();
        size_t start = pos;
        if (pos < s.size() && s[pos] == '-') ++pos;
        if (pos >= s.size() || !std::isdigit((unsigned char)s[pos])) { pos = start; fail("expected integer"); }
        while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
        return std::stoll(s.substr(start, pos - start));
    }
    /* IDENT base: letters/digits then apostrophes; no leading digit */
    std::string ident() {
        ws();
        size_t start = pos;
        if (pos >= s.size() || !std::isalpha((unsigned char)s[pos])) fail("expected identifier");
        while (pos < s.size() && std::isalnum((unsigned char)s[pos])) ++pos;
        while (pos < s.size() && s[pos] == '\'') ++pos;
        return s.substr(start, pos - start);
    }

    Expr expr() {
        std::vector<Expr> terms{term()};
        while (eat('+')) terms.push_back(term());
        return mk_sum(std::move(terms));
    }

    Expr term() {
        ws();
        /* [int '*'] chain, with '0' as a bare atom */
        size_t save = pos;
        if (pos < s.size() && (std::isdigit((unsigned char)s[pos]) || s[pos] == '-')) {
            size_t p2 = pos;
            if (s[p2] == '-') ++p2;
            size_t d0 = p2;
            while (p2 < s.size() && std::isdigit((unsigned char)s[p2])) ++p2;
            if (p2 > d0) {
                size_t p3 = p2;
                while (p3 < s.size() && std::isspace((unsigned char)s[p3])) ++p3;
                if (p3 < s.size() && s[p3] == '*') {
                    long long k = std::stoll(s.substr(pos, p2 - pos));
                    pos = p3 + 1;
                    return mk_scalar(k, chain());
                }
            }
            pos = save;
        }
        return chain();
    }

    Expr chain() {
        std::vector<Expr> parts{atom()};
        while (eat('.')) parts.push_back(atom());
        return mk_compose(std::move(parts));
    }

    Expr atom() {
        ws();
        if (pos >= s.size()) fail("expected expression");
        char c = s[pos];
        if (c == '0') {
            ++pos;
            return mk_zero();
        }
        if (c == '(') {
            ++pos;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (c == '{') {
            ++pos;
            Expr a = expr();
            expect(',');
            Expr b = expr();
            expect(',');
            Expr g = expr();
            expect('}');
            long long t = 0;
            if (eat('_')) t = integer();
            return mk_bracket(a, b, g, t);
        }
        if (c == 'E' && pos + 1 < s.size() && (s[pos + 1] == '(' || s[pos + 1] == '^')) {
            ++pos;
            long long k = 1;
            if (eat('^')) k = integer();
            expect('(');
            Expr e = expr();
            expect(')');
            return mk_susp(k, e);
        }
        if (c == 'P' && pos + 1 < s.size() && s[pos + 1] == '(') {
            pos += 2;
            Expr e = expr();
            expect(')');
            return mk_wh(e);
        }
        if (!std::isalpha((unsigned char)c)) fail("expected expression atom");
        std::string name = ident();
        if (name == "lift" && eat('<')) {
            Expr e = expr();
            expect('>');
            return mk_lift("lift", e);
        }
        if ((name == "sq" || name == "rlift") && eat('[')) {
            Expr e = expr();
            expect(']');
            return mk_lift(name, e);
        }
        long long index = -1;
        {
            /* a subscript binds to the identifier: eta_6, i'_7 */
            size_t save = pos;
            if (pos < s.size() && s[pos] == '_') {
                ++pos;
                if (pos < s.size() && std::isdigit((unsigned char)s[pos])) {
                    size_t d0 = pos;
                    while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
                    index = std::stoll(s.substr(d0, pos - d0));
                } else {
                    pos = save;
                    fail("expected subscript after '_'");
                }
            }
        }
        if (name == "iota") {
            if (index < 0) fail("iota needs a subscript");
            return mk_iota(index);
        }
        if (name == "iotaM") {
            if (index < 0) fail("iotaM needs a subscript");
            return mk_iota_m(index);
        }
        if (map_signature(name)) {
            if (index >= 0) fail("map name cannot carry a subscript");
            expect('(');
            Expr e = expr();
            expect(')');
            return mk_map(name, e);
        }
        return mk_gen(name, index);
    }
};

}  // namespace

Expr parse_expr(const std::string& text) {
    Parser p(text);
    Expr e = p.expr();
    p.ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return e;
}

/* ---------------- degree checking ---------------- */

static HomInfo hom_rec(const Expr& e, const Resolver& r);

static void require_eq(const std::optional<SpaceRef>& a, const std::optional<SpaceRef>& b,
                       const std::string& what) {
    if (a && b && !(*a == *b))
        throw Error("degree mismatch at " + what + ": " + a->to_string() + " vs " + b->to_string());
}

static HomInfo hom_rec(const Expr& e, const Resolver& r) {
    switch (e->kind) {
        case NodeKind::Zero: return {};
        case NodeKind::Iota: {
            auto s = SpaceRef::sphere(e->index);
            if (e->index < 1) throw Error("iota index below 1");
            return {s, s};
        }
        case NodeKind::IotaM: {
            if (e->index < 2) throw Error("iotaM index below 2");
            auto s = SpaceRef::moore(e->index);
            return {s, s};
        }
        case NodeKind::Gen: {
            auto sig = r.gen_signature(e->name, e->index);
            if (!sig) throw Error("unknown symbol '" + print_expr(e) + "'");
            return {sig->dom, sig->cod};
        }
        case NodeKind::Compose: {
            std::vector<HomInfo> hs;
            hs.reserve(e->args.size());
            for (const auto& a : e->args) hs.push_back(hom_rec(a, r));
            for (size_t i = 0; i + 1 < hs.size(); ++i)
                require_eq(hs[i].dom, hs[i + 1].cod,
                           "'" + print_expr(e->args[i]) + " . " + print_expr(e->args[i + 1]) + "'");
            return {hs.back().dom, hs.front().cod};
        }
        case NodeKind::Sum: {
            HomInfo acc;
            for (const auto& a : e->args) {
                HomInfo h = hom_rec(a, r);
                require_eq(acc.dom, h.dom, "sum '" + print_expr(e) + "'");
                require_eq(acc.cod, h.cod, "sum '" + print_expr(e) + "'");
                if (!acc.dom) acc.dom = h.dom;
                if (!acc.cod) acc.cod = h.cod;
            }
            return acc;
        }
        case NodeKind::Scalar: return hom_rec(e->args[0], r);
        case NodeKind::Susp: {
            HomInfo h = hom_rec(e->args[0], r);
            HomInfo out;
            if (h.dom) out.dom = h.dom->shifted(e->k);
            if (h.cod) out.cod = h.cod->shifted(e->k);
            return out;
        }
        case NodeKind::Wh: {
            HomInfo h = hom_rec(e->args[0], r);
            HomInfo out;
            if (h.cod) {
                if (h.cod->kind != SpaceKind::Sphere || h.cod->n % 2 == 0)
                    throw Error("P needs an odd-sphere codomain, got " + h.cod->to_string() +
                                " in '" + print_expr(e) + "'");
                out.cod = SpaceRef::sphere((h.cod->n - 1) / 2);
            }
            if (h.dom) out.dom = h.dom->shifted(-2);
            return out;
        }
        case NodeKind::Bracket: {
            HomInfo a = hom_rec(e->args[0], r);
            HomInfo b = hom_rec(e->args[1], r);
            HomInfo c = hom_rec(e->args[2], r);
            require_eq(a.dom, b.cod, "bracket '" + print_expr(e) + "' (first/second)");
            require_eq(b.dom, c.cod, "bracket '" + print_expr(e) + "' (second/third)");
            HomInfo out;
            if (c.dom) out.dom = c.dom->shifted(1);
            out.cod = a.cod;
            return out;
        }
        case NodeKind::Lift: {
            HomInfo h = hom_rec(e->args[0], r);
            HomInfo out;
            out.dom = h.dom;
            if (e->name == "lift") {
                if (h.cod && !(*h.cod == SpaceRef::sphere(6)))
                    throw Error("lift<> needs a class into S6, got " + h.cod->to_string());
                out.cod = SpaceRef::fixed(SpaceKind::G2);
            } else if (e->name == "sq") {
                if (h.cod && !(*h.cod == SpaceRef::sphere(5)))
                    throw Error("sq[] needs a class into S5, got " + h.cod->to_string());
                out.cod = SpaceRef::fixed(SpaceKind::SU3);
            } else {
                out.cod = SpaceRef::fixed(SpaceKind::SO6);
            }
            return out;
        }
        case NodeKind::MapApp: {
            const MapSig* sig = map_signature(e->name);
            HomInfo h = hom_rec(e->args[0], r);
            if (h.cod && !(*h.cod == sig->cod_in))
                throw Error("map " + e->name + " needs a class into " + sig->cod_in.to_string() +
                            ", got " + h.cod->to_string());
            HomInfo out;
            if (h.dom) out.dom = h.dom->shifted(sig->dom_shift);
            out.cod = sig->cod_out;
            return out;
        }
    }
    throw Error("unreachable");
}

HomInfo homset_of(const Expr& e, const Resolver& r) { return hom_rec(e, r); }

}  // namespace htcalc
