#include "htcalc/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace htcalc {

/* ---------------- SpacePat ---------------- */

SpaceRef SpacePat::at(long long n) const {
    if (!relative) return abs;
    if (relkind == SpaceKind::Sphere) return SpaceRef::sphere(n + offset);
    return SpaceRef::moore(n + offset);
}

std::string SpacePat::to_string() const {
    if (!relative) return abs.to_string();
    std::string base = (relkind == SpaceKind::Sphere) ? "S" : "M";
    if (offset == 0) return base + "{n}";
    std::ostringstream os;
    os << base << "{n" << (offset > 0 ? "+" : "") << offset << "}";
    return os.str();
}

static SpacePat parse_space_pat(const std::string& s, const std::string& where) {
    SpacePat p;
    auto brace = s.find('{');
    if (brace != std::string::npos) {
        if (brace != 1 || (s[0] != 'S' && s[0] != 'M') || s.back() != '}')
            throw Error(where + ": bad space pattern '" + s + "'");
        p.relative = true;
        p.relkind = (s[0] == 'S') ? SpaceKind::Sphere : SpaceKind::Moore;
        std::string inner = s.substr(2, s.size() - 3);
        if (inner == "n") {
            p.offset = 0;
        } else if (inner.size() >= 2 && inner[0] == 'n' && (inner[1] == '+' || inner[1] == '-')) {
            p.offset = std::stoll(inner.substr(1));
        } else {
            throw Error(where + ": bad space pattern '" + s + "'");
        }
        return p;
    }
    auto sp = parse_space(s);
    if (!sp) throw Error(where + ": bad space '" + s + "'");
    p.abs = *sp;
    return p;
}

/* ---------------- text utilities ---------------- */

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace((unsigned char)s[a])) ++a;
    while (b > a && std::isspace((unsigned char)s[b - 1])) --b;
    return s.substr(a, b - a);
}

/* substitute {n}, {n+k}, {n-k} at a concrete n; leaves other braces alone */
std::string subst_n(const std::string& text, long long n) {
    std::string out;
    size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '{') {
            size_t close = text.find('}', i);
            if (close != std::string::npos) {
                std::string inner = trim(text.substr(i + 1, close - i - 1));
                bool is_pat = false;
                long long val = 0;
                if (inner == "n") {
                    is_pat = true;
                    val = n;
                } else if (inner.size() >= 2 && inner[0] == 'n' &&
                           (inner[1] == '+' || inner[1] == '-')) {
                    std::string tail = inner.substr(1);
                    bool digits = tail.size() >= 2;
                    for (size_t j = 1; j < tail.size(); ++j)
                        if (!std::isdigit((unsigned char)tail[j])) digits = false;
                    if (digits) {
                        is_pat = true;
                        val = n + std::stoll(tail);
                    }
                }
                if (is_pat) {
                    out += std::to_string(val);
                    i = close + 1;
                    continue;
                }
            }
        }
        out += text[i++];
    }
    return out;
}

bool has_pattern(const std::string& text) { return subst_n(text, 17) != text; }

struct RawRecord {
    std::string file;
    int line = 0;
    std::string kind;
    std::string body;   // text after the kind keyword, range and provenance stripped
    std::string prov;
    bool has_range = false;
    long long range_a = 0, range_b = 0;  // range_b = kMaxIndex cap applied later

    std::string where() const { return file + ":" + std::to_string(line); }
};

/* split "lhs <sep> rest" on the first top-level occurrence of sep */
size_t find_top(const std::string& s, const std::string& sep) {
    int depth = 0;
    for (size_t i = 0; i + sep.size() <= s.size(); ++i) {
        char c = s[i];
        if (c == '{' || c == '(' || c == '[') ++depth;
        else if (c == '}' || c == ')' || c == ']') --depth;
        else if (depth == 0 && s.compare(i, sep.size(), sep) == 0) return i;
    }
    return std::string::npos;
}

std::vector<std::string> split_top(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    size_t start = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '{' || c == '(' || c == '[') ++depth;
        else if (c == '}' || c == ')' || c == ']') --depth;
        else if (depth == 0 && c == sep) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    out.push_back(trim(s.substr(start)));
    return out;
}

}  // namespace

/* ---------------- loading ---------------- */

namespace {

std::vector<RawRecord> read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open catalog file " + path);
    std::vector<RawRecord> out;
    std::string line;
    int lineno = 0;
    std::string fname = std::filesystem::path(path).filename().string();
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        RawRecord r;
        r.file = fname;
        r.line = lineno;
        /* provenance: trailing @ "..." */
        size_t at = t.rfind(" @ ");
        if (at == std::string::npos)
            throw Error(r.where() + ": record lacks a provenance string");
        std::string prov = trim(t.substr(at + 3));
        if (prov.size() < 2 || prov.front() != '"' || prov.back() != '"')
            throw Error(r.where() + ": provenance must be quoted");
        r.prov = prov.substr(1, prov.size() - 2);
        t = trim(t.substr(0, at));
        /* range: trailing "for n in [a,b]" */
        size_t forpos = find_top(t, " for n in ");
        if (forpos != std::string::npos) {
            std::string rng = trim(t.substr(forpos + 10));
            if (rng.size() < 5 || rng.front() != '[' || rng.back() != ']')
                throw Error(r.where() + ": bad range '" + rng + "'");
            auto parts = split_top(rng.substr(1, rng.size() - 2), ',');
            if (parts.size() != 2) throw Error(r.where() + ": bad range '" + rng + "'");
            r.has_range = true;
            r.range_a = std::stoll(parts[0]);
            r.range_b = (parts[1] == "inf") ? Catalog::kMaxIndex : std::stoll(parts[1]);
            t = trim(t.substr(0, forpos));
        }
        size_t sp = t.find(' ');
        if (sp == std::string::npos) throw Error(r.where() + ": malformed record");
        r.kind = t.substr(0, sp);
        r.body = trim(t.substr(sp + 1));
        out.push_back(std::move(r));
    }
    return out;
}

long long parse_ll(const std::string& s, const std::string& where) {
    try {
        size_t used;
        long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw Error(where + ": expected integer, got '" + s + "'");
    }
}

}  // namespace

Catalog Catalog::load_files(const std::vector<std::string>& paths, const std::string& drop) {
    Catalog cat;
    std::vector<RawRecord> raw;
    for (const auto& p : paths) {
        auto recs = read_file(p);
        raw.insert(raw.end(), recs.begin(), recs.end());
    }
    if (!drop.empty()) {
        raw.erase(std::remove_if(raw.begin(), raw.end(),
                                 [&](const RawRecord& r) {
                                     return r.prov.find(drop) != std::string::npos ||
                                            r.body.find(drop) != std::string::npos;
                                 }),
                  raw.end());
    }

    /* pass 1: generator records (they resolve everything else) */
    for (const auto& r : raw) {
        if (r.kind != "gen") continue;
        GenRecord g;
        g.prov = r.prov;
        g.source = r.where();
        size_t colon = r.body.find(':');
        if (colon == std::string::npos) throw Error(r.where() + ": gen needs ':'");
        g.name = trim(r.body.substr(0, colon));
        std::string rest = trim(r.body.substr(colon + 1));
        size_t arrow = rest.find("->");
        if (arrow == std::string::npos) throw Error(r.where() + ": gen needs '->'");
        std::string dom_s = trim(rest.substr(0, arrow));
        rest = trim(rest.substr(arrow + 2));
        /* cod runs to the first attribute */
        size_t attr = rest.find(" order=");
        if (attr == std::string::npos) throw Error(r.where() + ": gen needs order=");
        std::string cod_s = trim(rest.substr(0, attr));
        g.dom = parse_space_pat(dom_s, r.where());
        g.cod = parse_space_pat(cod_s, r.where());
        /* attributes */
        std::istringstream as(rest.substr(attr));
        std::string tok;
        std::optional<long long> minindex, orderfrom, suspfrom;
        bool susp_yes = false, susp_never = false;
        while (as >> tok) {
            size_t eq = tok.find('=');
            if (eq == std::string::npos) throw Error(r.where() + ": bad attribute '" + tok + "'");
            std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
            if (k == "order") {
                if (v != "?") g.order = parse_ll(v, r.where());
            } else if (k == "minindex") {
                minindex = parse_ll(v, r.where());
            } else if (k == "orderfrom") {
                orderfrom = parse_ll(v, r.where());
            } else if (k == "suspfrom") {
                if (v == "never") susp_never = true;
                else suspfrom = parse_ll(v, r.where());
            } else if (k == "susp") {
                if (v == "yes") susp_yes = true;
                else if (v == "no") susp_never = true;
                else throw Error(r.where() + ": susp must be yes or no");
            } else {
                throw Error(r.where() + ": unknown attribute '" + k + "'");
            }
        }
        g.family = minindex.has_value();
        if (g.family) {
            g.minindex = *minindex;
            g.order_from = orderfrom.value_or(g.minindex);
            g.susp_from = suspfrom;
            if (susp_yes) g.susp_from = g.minindex;
            if (susp_never) g.susp_from = std::nullopt;
            if (!g.dom.relative || !g.cod.relative)
                throw Error(r.where() + ": family generator needs pattern spaces");
        } else {
            if (g.dom.relative || g.cod.relative)
                throw Error(r.where() + ": fixed generator cannot use pattern spaces");
            g.fixed_is_susp = susp_yes;
            if (suspfrom) throw Error(r.where() + ": suspfrom needs a family");
        }
        if (map_signature(g.name))
            throw Error(r.where() + ": generator name collides with map '" + g.name + "'");
        if (g.name == "iota" || g.name == "iotaM" || g.name == "lift" || g.name == "sq" ||
            g.name == "rlift" || g.name == "E" || g.name == "P")
            throw Error(r.where() + ": reserved generator name '" + g.name + "'");
        if (!cat.gens_.emplace(g.name, g).second)
            throw Error(r.where() + ": duplicate generator '" + g.name + "'");
    }

    /* pass 2: group tables */
    for (const auto& r : raw) {
        if (r.kind != "group" && r.kind != "hom") continue;
        long long lo = r.has_range ? r.range_a : 0;
        long long hi = r.has_range ? std::min(r.range_b, kMaxIndex) : 0;
        for (long long n = lo; n <= hi; ++n) {
            std::string body = r.has_range ? subst_n(r.body, n) : r.body;
            if (has_pattern(body))
                throw Error(r.where() + ": pattern brace without a range clause");
            HomKey key;
            std::string rhs;
            if (r.kind == "group") {
                std::istringstream is(body);
                std::string pi, idx_s, space_s;
                is >> pi >> idx_s >> space_s;
                if (pi != "pi") throw Error(r.where() + ": group record must start with 'pi'");
                auto sp = parse_space(space_s);
                if (!sp) throw Error(r.where() + ": bad space '" + space_s + "'");
                key = HomKey{SpaceRef::sphere(parse_ll(idx_s, r.where())), *sp};
                size_t eq = body.find('=');
                if (eq == std::string::npos) throw Error(r.where() + ": group needs '='");
                rhs = trim(body.substr(eq + 1));
            } else {
                size_t eq = find_top(body, "=");
                if (eq == std::string::npos) throw Error(r.where() + ": hom needs '='");
                std::string lhs = trim(body.substr(0, eq));
                rhs = trim(body.substr(eq + 1));
                if (lhs.size() < 2 || lhs.front() != '[' || lhs.back() != ']')
                    throw Error(r.where() + ": hom key must be [X, Y]");
                auto parts = split_top(lhs.substr(1, lhs.size() - 2), ',');
                if (parts.size() != 2) throw Error(r.where() + ": hom key must be [X, Y]");
                auto d = parse_space(parts[0]), c = parse_space(parts[1]);
                if (!d || !c) throw Error(r.where() + ": bad hom key '" + lhs + "'");
                key = HomKey{*d, *c};
            }
            GroupTable gt;
            gt.key = key;
            gt.prov = r.prov;
            gt.source = r.where();
            std::vector<long long> factors;
            std::vector<std::string> labels;
            if (rhs != "0") {
                /* factor list: Z<k>{expr} joined by top-level '+' */
                size_t i = 0;
                while (i < rhs.size()) {
                    while (i < rhs.size() && (std::isspace((unsigned char)rhs[i]) || rhs[i] == '+')) ++i;
                    if (i >= rhs.size()) break;
                    if (rhs[i] != 'Z') throw Error(r.where() + ": factor must start with Z");
                    ++i;
                    long long f = 0;
                    size_t d0 = i;
                    while (i < rhs.size() && std::isdigit((unsigned char)rhs[i])) ++i;
                    if (i > d0) f = std::stoll(rhs.substr(d0, i - d0));
                    if (i >= rhs.size() || rhs[i] != '{')
                        throw Error(r.where() + ": factor needs a {generator}");
                    int depth = 1;
                    size_t j = i + 1;
                    while (j < rhs.size() && depth) {
                        if (rhs[j] == '{') ++depth;
                        if (rhs[j] == '}') --depth;
                        ++j;
                    }
                    if (depth) throw Error(r.where() + ": unbalanced braces in factor");
                    std::string expr_text = rhs.substr(i + 1, j - i - 2);
                    i = j;
                    Expr ge;
                    try {
                        ge = parse_expr(expr_text);
                    } catch (const Error& e) {
                        throw Error(r.where() + ": " + e.msg);
                    }
                    gt.gens.push_back(ge);
                    factors.push_back(f);
                    labels.push_back(print_expr(ge));
                }
                if (factors.empty()) throw Error(r.where() + ": empty group right-hand side");
            }
            try {
                gt.group = std::make_shared<const AbelianGroup>(factors, labels);
            } catch (const Error& e) {
                throw Error(r.where() + ": " + e.msg);
            }
            auto ins = cat.groups_.emplace(key, gt);
            if (!ins.second)
                throw Error(r.where() + ": duplicate table for " + key.to_string() +
                            " (also " + ins.first->second.source + ")");
        }
    }

    /* pass 3: everything needing full resolution */
    auto parse_checked = [&](const std::string& text, const std::string& where) -> Expr {
        try {
            return parse_expr(text);
        } catch (const Error& e) {
            throw Error(where + ": " + e.msg);
        }
    };
    auto hom_checked = [&](const Expr& e, const std::string& where) -> HomInfo {
        try {
            return homset_of(e, cat);
        } catch (const Error& err) {
            throw Error(where + ": " + err.msg);
        }
    };

    /* group label validation (needs gen records) */
    for (auto& [key, gt] : cat.groups_) {
        for (size_t i = 0; i < gt.gens.size(); ++i) {
            HomInfo h = hom_checked(gt.gens[i], gt.source);
            if (!h.key() || !(*h.key() == key))
                throw Error(gt.source + ": generator '" + print_expr(gt.gens[i]) +
                            "' lives in " + (h.key() ? h.key()->to_string() : "an ambiguous hom-set") +
                            ", not " + key.to_string());
            /* order coherence for bare generator labels */
            const Expr& g = gt.gens[i];
            if (g->kind == NodeKind::Gen) {
                auto ord = cat.gen_order(g->name, g->index);
                long long f = gt.group->factors()[i];
                if (ord && *ord != f && f != 0)
                    throw Error(gt.source + ": generator '" + print_expr(g) + "' has declared order " +
                                std::to_string(*ord) + " (" + cat.gens_.at(g->name).source +
                                ") but heads a Z" + std::to_string(f) + " factor");
            }
        }
    }

    for (const auto& r : raw) {
        if (r.kind == "gen" || r.kind == "group" || r.kind == "hom") continue;
        long long lo = r.has_range ? r.range_a : 0;
        long long hi = r.has_range ? std::min(r.range_b, kMaxIndex) : 0;
        for (long long n = lo; n <= hi; ++n) {
            std::string body = r.has_range ? subst_n(r.body, n) : r.body;
            if (has_pattern(body))
                throw Error(r.where() + ": pattern brace without a range clause");

            if (r.kind == "rel") {
                Rule rule;
                rule.prov = r.prov;
                rule.source = r.where();
                size_t neq = find_top(body, " != ");
                if (neq != std::string::npos) {
                    std::string rhs = trim(body.substr(neq + 4));
                    if (rhs != "0") throw Error(r.where() + ": '!=' only supports 0");
                    rule.mode = RelMode::Nonzero;
                    rule.lhs = parse_checked(trim(body.substr(0, neq)), r.where());
                    rule.rhs = mk_zero();
                    hom_checked(rule.lhs, r.where());
                    rule.id = print_expr(rule.lhs) + " != 0";
                } else {
                    size_t eq = find_top(body, " = ");
                    if (eq == std::string::npos) throw Error(r.where() + ": rel needs ' = '");
                    std::string rhs_text = trim(body.substr(eq + 3));
                    if (rhs_text.rfind("+-", 0) == 0) {
                        rule.mode = RelMode::UpToSign;
                        rhs_text = trim(rhs_text.substr(2));
                    }
                    rule.lhs = parse_checked(trim(body.substr(0, eq)), r.where());
                    rule.rhs = parse_checked(rhs_text, r.where());
                    if (rule.lhs->kind == NodeKind::Zero)
                        throw Error(r.where() + ": rel left side cannot be 0");
                    HomInfo hl = hom_checked(rule.lhs, r.where());
                    HomInfo hr = hom_checked(rule.rhs, r.where());
                    if (hl.key() && hr.key() && !(*hl.key() == *hr.key()))
                        throw Error(r.where() + ": rel sides live in " + hl.key()->to_string() +
                                    " and " + hr.key()->to_string());
                    rule.id = print_expr(rule.lhs) + " = " +
                              std::string(rule.mode == RelMode::UpToSign ? "+-" : "") +
                              print_expr(rule.rhs);
                }
                if (!drop.empty() && rule.id.find(drop) != std::string::npos) continue;
                cat.rules_.push_back(std::move(rule));
            } else if (r.kind == "bracket") {
                size_t cpos = find_top(body, " contains ");
                if (cpos == std::string::npos) throw Error(r.where() + ": bracket needs ' contains '");
                Expr br = parse_checked(trim(body.substr(0, cpos)), r.where());
                if (br->kind != NodeKind::Bracket)
                    throw Error(r.where() + ": left side must be a bracket");
                std::string rest = trim(body.substr(cpos + 10));
                BracketRule b;
                b.prov = r.prov;
                b.source = r.where();
                b.a = br->args[0];
                b.b = br->args[1];
                b.c = br->args[2];
                b.t = br->k;
                size_t mpos = find_top(rest, " mod ");
                std::string rep_text = rest;
                if (mpos != std::string::npos) {
                    rep_text = trim(rest.substr(0, mpos));
                    for (auto& m : split_top(trim(rest.substr(mpos + 5)), ';')) {
                        Expr me = parse_checked(m, r.where());
                        hom_checked(me, r.where());
                        b.modulo.push_back(me);
                    }
                }
                if (rep_text.rfind("+-", 0) == 0) {
                    b.up_to_sign = true;
                    rep_text = trim(rep_text.substr(2));
                }
                b.rep = parse_checked(rep_text, r.where());
                HomInfo hb = hom_checked(br, r.where());
                HomInfo hr2 = hom_checked(b.rep, r.where());
                if (hb.key() && hr2.key() && !(*hb.key() == *hr2.key()))
                    throw Error(r.where() + ": bracket lives in " + hb.key()->to_string() +
                                " but representative in " + hr2.key()->to_string());
                b.id = print_expr(br) + " contains " + (b.up_to_sign ? "+-" : "") + print_expr(b.rep);
                if (!drop.empty() && b.id.find(drop) != std::string::npos) continue;
                cat.bracket_rules_.push_back(std::move(b));
            } else if (r.kind == "delta") {
                size_t eq = find_top(body, " = ");
                if (eq == std::string::npos) throw Error(r.where() + ": delta needs ' = '");
                DeltaRule d;
                d.prov = r.prov;
                d.source = r.where();
                d.lhs = parse_checked(trim(body.substr(0, eq)), r.where());
                if (d.lhs->kind != NodeKind::MapApp)
                    throw Error(r.where() + ": delta left side must apply a map");
                std::string rest = trim(body.substr(eq + 3));
                size_t mpos = find_top(rest, " mod ");
                std::string rhs_text = rest;
                if (mpos != std::string::npos) {
                    rhs_text = trim(rest.substr(0, mpos));
                    for (auto& m : split_top(trim(rest.substr(mpos + 5)), ';')) {
                        Expr me = parse_checked(m, r.where());
                        hom_checked(me, r.where());
                        d.modulo.push_back(me);
                    }
                }
                if (rhs_text.rfind("+-", 0) == 0) {
                    d.up_to_sign = true;
                    rhs_text = trim(rhs_text.substr(2));
                }
                d.rhs = parse_checked(rhs_text, r.where());
                HomInfo hl = hom_checked(d.lhs, r.where());
                HomInfo hr3 = hom_checked(d.rhs, r.where());
                if (hl.key() && hr3.key() && !(*hl.key() == *hr3.key()))
                    throw Error(r.where() + ": delta sides live in " + hl.key()->to_string() +
                                " and " + hr3.key()->to_string());
                d.id = print_expr(d.lhs) + " = " + (d.up_to_sign ? "+-" : "") + print_expr(d.rhs);
                if (!drop.empty() && d.id.find(drop) != std::string::npos) continue;
                cat.delta_rules_.push_back(std::move(d));
            } else if (r.kind == "seq") {
                std::string rest = body;
                if (rest.rfind("fibration ", 0) != 0)
                    throw Error(r.where() + ": seq must declare a fibration");
                rest = trim(rest.substr(10));
                size_t maps = rest.find(" maps ");
                if (maps == std::string::npos) throw Error(r.where() + ": seq needs ' maps '");
                std::string spaces = trim(rest.substr(0, maps));
                std::vector<std::string> names;
                size_t pos = 0;
                while (true) {
                    size_t arrow = spaces.find("->", pos);
                    if (arrow == std::string::npos) {
                        names.push_back(trim(spaces.substr(pos)));
                        break;
                    }
                    names.push_back(trim(spaces.substr(pos, arrow - pos)));
                    pos = arrow + 2;
                }
                if (names.size() != 3) throw Error(r.where() + ": seq needs F -> E -> B");
                Fibration fib;
                fib.prov = r.prov;
                fib.source = r.where();
                auto f = parse_space(names[0]), e = parse_space(names[1]), bsp = parse_space(names[2]);
                if (!f || !e || !bsp) throw Error(r.where() + ": bad space in seq");
                fib.fiber = *f;
                fib.total = *e;
                fib.base = *bsp;
                auto mnames = split_top(trim(rest.substr(maps + 6)), ',');
                if (mnames.size() != 3) throw Error(r.where() + ": seq needs three maps");
                fib.imap = mnames[0];
                fib.pmap = mnames[1];
                fib.dmap = mnames[2];
                auto check_map = [&](const std::string& nm, SpaceRef in, SpaceRef out, long long shift) {
                    const MapSig* s = map_signature(nm);
                    if (!s) throw Error(r.where() + ": unknown map '" + nm + "'");
                    if (!(s->cod_in == in) || !(s->cod_out == out) || s->dom_shift != shift)
                        throw Error(r.where() + ": map '" + nm + "' does not fit the fibration");
                };
                check_map(fib.imap, fib.fiber, fib.total, 0);
                check_map(fib.pmap, fib.total, fib.base, 0);
                check_map(fib.dmap, fib.base, fib.fiber, -1);
                cat.fibrations_.push_back(std::move(fib));
            } else {
                throw Error(r.where() + ": unknown record kind '" + r.kind + "'");
            }
        }
    }
    return cat;
}

Catalog Catalog::load_dir(const std::string& dir, const std::string& drop) {
    std::vector<std::string> paths;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.path().extension() == ".cat") paths.push_back(entry.path().string());
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw Error("no .cat files in " + dir);
    return load_files(paths, drop);
}

/* ---------------- queries ---------------- */

std::optional<GenSig> Catalog::gen_signature(const std::string& name, long long index) const {
    auto it = gens_.find(name);
    if (it == gens_.end()) return std::nullopt;
    const GenRecord& g = it->second;
    if (g.family) {
        if (index < g.minindex) return std::nullopt;
        return GenSig{g.dom.at(index), g.cod.at(index)};
    }
    if (index >= 0) return std::nullopt;
    return GenSig{g.dom.abs, g.cod.abs};
}

const GenRecord* Catalog::gen_record(const std::string& name) const {
    auto it = gens_.find(name);
    return it == gens_.end() ? nullptr : &it->second;
}

std::optional<long long> Catalog::gen_order(const std::string& name, long long index) const {
    auto it = gens_.find(name);
    if (it == gens_.end()) return std::nullopt;
    const GenRecord& g = it->second;
    if (!g.order) return std::nullopt;
    if (g.family && index < g.order_from) return std::nullopt;
    return g.order;
}

bool Catalog::gen_is_suspension(const std::string& name, long long index) const {
    auto it = gens_.find(name);
    if (it == gens_.end()) return false;
    const GenRecord& g = it->second;
    if (g.family) return g.susp_from && index >= *g.susp_from;
    return g.fixed_is_susp;
}

const GroupTable* Catalog::group_of(const HomKey& key) const {
    auto it = groups_.find(key);
    return it == groups_.end() ? nullptr : &it->second;
}

std::string Catalog::serialize() const {
    std::ostringstream os;
    for (const auto& [name, g] : gens_) {
        os << "gen " << name << " : " << g.dom.to_string() << " -> " << g.cod.to_string()
           << " order=" << (g.order ? std::to_string(*g.order) : "?");
        if (g.family) {
            os << " minindex=" << g.minindex << " orderfrom=" << g.order_from;
            if (g.susp_from) os << " suspfrom=" << *g.susp_from;
        } else if (g.fixed_is_susp) {
            os << " susp=yes";
        }
        os << " @ \"" << g.prov << "\"\n";
    }
    for (const auto& [key, gt] : groups_) {
        os << "hom " << key.to_string() << " = ";
        if (gt.group->is_trivial()) os << "0";
        else os << gt.group->to_string();
        os << " @ \"" << gt.prov << "\"\n";
    }
    for (const auto& r : rules_)
        os << "rel " << r.id << " @ \"" << r.prov << "\"\n";
    for (const auto& b : bracket_rules_)
        os << "bracket " << b.id << " @ \"" << b.prov << "\"\n";
    for (const auto& d : delta_rules_)
        os << "delta " << d.id << " @ \"" << d.prov << "\"\n";
    for (const auto& f : fibrations_)
        os << "seq fibration " << f.fiber.to_string() << " -> " << f.total.to_string() << " -> "
           << f.base.to_string() << " maps " << f.imap << ", " << f.pmap << ", " << f.dmap
           << " @ \"" << f.prov << "\"\n";
    return os.str();
}

}  // namespace htcalc
