#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "htcalc/expr.hpp"

#include <random>

using namespace htcalc;

namespace {

/* small hand-rolled signature table, enough to exercise degree checking */
struct StubResolver : Resolver {
    std::optional<GenSig> gen_signature(const std::string& name, long long index) const override {
        auto sphere_family = [&](long long shift, long long min) -> std::optional<GenSig> {
            if (index < min) return std::nullopt;
            return GenSig{SpaceRef::sphere(index + shift), SpaceRef::sphere(index)};
        };
        if (name == "eta") return sphere_family(1, 3);
        if (name == "nu") return sphere_family(3, 4);
        if (name == "nusq") return sphere_family(6, 5);
        if (name == "sigma") return sphere_family(7, 8);
        if (name == "zeta") return sphere_family(11, 5);
        if (name == "kappa") return sphere_family(14, 7);
        if (name == "eps") return sphere_family(8, 3);
        if (name == "p'" && index >= 2)
            return GenSig{SpaceRef::moore(index), SpaceRef::sphere(index)};
        if (name == "i'" && index >= 2)
            return GenSig{SpaceRef::sphere(index - 1), SpaceRef::moore(index)};
        if (name == "barnusq" && index >= 5)
            return GenSig{SpaceRef::moore(index + 7), SpaceRef::sphere(index)};
        if (name == "theta" && index < 0)
            return GenSig{SpaceRef::sphere(23), SpaceRef::sphere(12)};
        if (name == "rho''" && index < 0)
            return GenSig{SpaceRef::sphere(22), SpaceRef::sphere(7)};
        return std::nullopt;
    }
};

Expr rt(const std::string& s) {
    Expr e = parse_expr(s);
    Expr e2 = parse_expr(print_expr(e));
    REQUIRE(expr_equal(e, e2));
    return e;
}

}  // namespace

TEST_CASE("space parsing and printing") {
    CHECK(parse_space("S23")->to_string() == "S23");
    CHECK(parse_space("M22")->to_string() == "M22");
    CHECK(parse_space("SU3")->kind == SpaceKind::SU3);
    CHECK(parse_space("SU2")->to_string() == "S3");  // alias
    CHECK(parse_space("G2")->kind == SpaceKind::G2);
    CHECK(parse_space("V72")->kind == SpaceKind::V72);
    CHECK(parse_space("SO6")->kind == SpaceKind::SO6);
    CHECK(parse_space("SO7")->kind == SpaceKind::SO7);
    CHECK_FALSE(parse_space("S0").has_value());
    CHECK_FALSE(parse_space("M1").has_value());
    CHECK_FALSE(parse_space("Sx").has_value());
    CHECK_FALSE(parse_space("").has_value());
    CHECK(SpaceRef::sphere(7).shifted(2) == SpaceRef::sphere(9));
    CHECK_THROWS_AS(SpaceRef::fixed(SpaceKind::G2).shifted(1), Error);
    CHECK_THROWS_AS(SpaceRef::sphere(1).shifted(-1), Error);
}

TEST_CASE("parsing the basic node kinds") {
    Expr e = rt("nu_6 . kappa_9");
    REQUIRE(e->kind == NodeKind::Compose);
    REQUIRE(e->args.size() == 2);
    CHECK(e->args[0]->name == "nu");
    CHECK(e->args[0]->index == 6);
    CHECK(e->args[1]->name == "kappa");
    CHECK(e->args[1]->index == 9);

    Expr b = rt("{sigma_12, nu_19, eta_22}_3");
    REQUIRE(b->kind == NodeKind::Bracket);
    CHECK(b->k == 3);
    CHECK(b->args[2]->index == 22);

    Expr s = rt("P(E(theta)) + nu_6 . kappa_9");
    REQUIRE(s->kind == NodeKind::Sum);
    REQUIRE(s->args.size() == 2);
    CHECK(s->args[0]->kind == NodeKind::Wh);
    CHECK(s->args[0]->args[0]->kind == NodeKind::Susp);
    CHECK(s->args[1]->kind == NodeKind::Compose);
}

TEST_CASE("identifiers with primes and embedded digits") {
    CHECK(rt("nu'")->name == "nu'");
    CHECK(rt("sigma'''")->name == "sigma'''");
    CHECK(rt("rho''")->name == "rho''");
    Expr e = rt("i'_7");
    CHECK(e->name == "i'");
    CHECK(e->index == 7);
    CHECK(rt("i''")->name == "i''");
    CHECK(rt("barsigma3sigma12")->name == "barsigma3sigma12");
    CHECK(rt("mfrak")->name == "mfrak");
}

TEST_CASE("scalars, zero, iota") {
    Expr e = rt("2*eta_6 . eta_7");
    REQUIRE(e->kind == NodeKind::Scalar);
    CHECK(e->k == 2);
    CHECK(e->args[0]->kind == NodeKind::Compose);

    CHECK(rt("0")->kind == NodeKind::Zero);
    CHECK(rt("-1*eta_3")->k == -1);
    CHECK(rt("iota_5")->kind == NodeKind::Iota);
    CHECK(rt("iotaM_6")->kind == NodeKind::IotaM);
    CHECK(rt("4*iota_15")->kind == NodeKind::Scalar);
    CHECK(rt("2*0")->kind == NodeKind::Scalar);
}

TEST_CASE("suspension powers, lifts, map applications") {
    Expr e = rt("E^3(nu')");
    CHECK(e->k == 3);
    CHECK(rt("E(eta_6)")->k == 1);

    Expr l = rt("lift<P(E(theta)) + nu_6 . kappa_9>");
    CHECK(l->kind == NodeKind::Lift);
    CHECK(l->name == "lift");

    Expr q = rt("sq[nu_5 . bareps_8]");
    CHECK(q->name == "sq");
    Expr rl = rt("rlift[nu_4 . rho'']");
    CHECK(rl->name == "rlift");

    Expr m = rt("delta(P(E(theta)))");
    CHECK(m->kind == NodeKind::MapApp);
    CHECK(m->name == "delta");
    CHECK(rt("pU(delta(mu_6 . sigma_15))")->name == "pU");
    CHECK(rt("iG(sq[nu_5 . bareps_8])")->name == "iG");
    CHECK(rt("r3(delta(nu_6))")->name == "r3");
}

TEST_CASE("nested structures round-trip through the printer") {
    rt("(eta_6 + nu_6 . eta_9) . p'_10");
    rt("2*(eta_6 + eta_6)");
    rt("{eta_7, nu_8, bareta_11}_1 . E(p'_12)");
    rt("E^2(sigma''' . eta_12) + 8*P(iota_13)");
    rt("P(E(theta)) + nu_6 . kappa_9 + 0");
    rt("{i'' . tildemu_5, 4*iota_15, 4*sigma_15}_2");
    rt("eta_6 . (2*nu_7)");
}

TEST_CASE("random asts round-trip through the printer") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> leaf(0, 6), inner(0, 7), coin(0, 1);
    auto leaf_of = [&]() -> Expr {
        switch (leaf(rng)) {
            case 0: return mk_gen("eta", 5);
            case 1: return mk_gen("nu'");
            case 2: return mk_gen("p'", 7);
            case 3: return mk_iota(3);
            case 4: return mk_iota_m(4);
            case 5: return mk_zero();
            default: return mk_gen("theta'");
        }
    };
    auto build = [&](auto&& self, int depth) -> Expr {
        if (depth <= 0) return leaf_of();
        switch (inner(rng)) {
            case 0: return mk_compose({self(self, depth - 1), self(self, depth - 1)});
            case 1: return mk_sum({self(self, depth - 1), self(self, depth - 1)});
            case 2: return mk_scalar(coin(rng) ? 2 : -3, self(self, depth - 1));
            case 3: return mk_susp(1 + coin(rng), self(self, depth - 1));
            case 4: return mk_wh(self(self, depth - 1));
            case 5: return mk_bracket(self(self, depth - 1), leaf_of(), leaf_of(), coin(rng));
            case 6: return mk_lift(coin(rng) ? "lift" : "sq", self(self, depth - 1));
            default: return mk_map(coin(rng) ? "delta" : "pG", self(self, depth - 1));
        }
    };
    for (int i = 0; i < 1000; ++i) {
        Expr e = build(build, 5);
        Expr back = parse_expr(print_expr(e));
        REQUIRE(expr_equal(e, back));
        REQUIRE(print_expr(back) == print_expr(e));
    }
}

TEST_CASE("parse errors carry positions") {
    auto fails_at = [](const std::string& s, const std::string& needle) {
        try {
            parse_expr(s);
            FAIL("expected parse error for: " << s);
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("parse error at") != std::string::npos);
            if (!needle.empty())
                CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    fails_at("nu_6 . ", "");
    fails_at("{eta_3, nu_6}", "','");
    fails_at("2*", "");
    fails_at("eta_6 extra", "trailing");
    fails_at("eta_", "subscript");
    fails_at("", "");
    fails_at("delta eta_6", "'('");
    fails_at("iota", "subscript");
}

TEST_CASE("degree checking of composites") {
    StubResolver r;
    auto hom = [&](const std::string& s) { return homset_of(parse_expr(s), r); };

    auto h = hom("eta_6 . nu_7");
    CHECK(h.key()->to_string() == "[S10, S6]");

    CHECK_THROWS_WITH_AS(hom("eta_6 . nu_8"),
                         doctest::Contains("eta_6 . nu_8"), Error);

    CHECK(hom("eps_5 . barnusq_13").key()->to_string() == "[M20, S5]");
    CHECK(hom("nu_6 . kappa_9").key()->to_string() == "[S23, S6]");
    CHECK(hom("2*eta_6 . eta_7").key()->to_string() == "[S8, S6]");
    CHECK(hom("eta_3 + 0").key()->to_string() == "[S4, S3]");
    CHECK_FALSE(hom("0").key().has_value());
    CHECK_THROWS_AS(hom("eta_3 + nu_4"), Error);
    CHECK_THROWS_AS(hom("eta_2"), Error);  // below the family's minimum index
}

TEST_CASE("degree checking of operators") {
    StubResolver r;
    auto hom = [&](const std::string& s) { return homset_of(parse_expr(s), r); };

    CHECK(hom("{sigma_12, nu_19, eta_22}_3").key()->to_string() == "[S24, S12]");
    CHECK_THROWS_AS(hom("{sigma_12, nu_20, eta_23}"), Error);

    CHECK(hom("E(eta_6)").key()->to_string() == "[S8, S7]");
    CHECK(hom("E^2(eps_5 . barnusq_13)").key()->to_string() == "[M22, S7]");
    CHECK(hom("P(iota_13)").key()->to_string() == "[S11, S6]");
    CHECK(hom("P(E(theta))").key()->to_string() == "[S22, S6]");
    CHECK_THROWS_AS(hom("P(iota_12)"), Error);  // even-sphere codomain

    CHECK(hom("lift<nu_6 . kappa_9>").key()->to_string() == "[S23, G2]");
    CHECK_THROWS_AS(hom("lift<eta_5>"), Error);  // not a class into S6
    CHECK(hom("sq[zeta_5 . sigma_16]").key()->to_string() == "[S23, SU3]");
    CHECK(hom("rlift[nu_4 . rho'']").key()->to_string() == "[S22, SO6]");

    CHECK(hom("delta(nu_6)").key()->to_string() == "[S8, SU3]");
    CHECK(hom("pU(delta(nu_6))").key()->to_string() == "[S8, S5]");
    CHECK(hom("iG(delta(nu_6))").key()->to_string() == "[S8, G2]");
    CHECK(hom("r3(delta(nu_6))").key()->to_string() == "[S8, SO6]");
    CHECK(hom("deltaU(zeta_5)").key()->to_string() == "[S15, S3]");
    CHECK_THROWS_AS(hom("delta(eta_5)"), Error);  // needs a class into S6
    CHECK_THROWS_AS(hom("E(lift<nu_6 . kappa_9>)"), Error);  // G2 cannot suspend
}
