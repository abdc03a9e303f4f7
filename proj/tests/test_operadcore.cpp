#include "doctest.h"

#include "opd/operad.hpp"

using namespace opd;

namespace {
FieldSpec Q = FieldSpec::rationals();
}

TEST_CASE("ass over finite sets satisfies the operad axioms")
{
    Operad ass = builtin_operad("ass", BaseTag::finset());
    CHECK(ass.entry_ob(3).finset_ob().size == 6);
    CheckReport r = check_operad(ass, 4);
    INFO(r.summary());
    CHECK(r.ok);
    CHECK(r.notices.empty());
}

TEST_CASE("ass over the rationals satisfies the operad axioms")
{
    Operad ass = builtin_operad("ass", BaseTag::vec(Q));
    CheckReport r = check_operad(ass, 4);
    INFO(r.summary());
    CHECK(r.ok);
}

TEST_CASE("com satisfies the operad axioms and has unit entries")
{
    Operad com = builtin_operad("com", BaseTag::vec(Q));
    for (int n = 0; n <= 4; ++n)
        CHECK(com.entry_ob(n).vec_ob().dim == 1);
    CheckReport r = check_operad(com, 4);
    INFO(r.summary());
    CHECK(r.ok);
    Operad comf = builtin_operad("com", BaseTag::finset());
    CHECK(check_operad(comf, 4).ok);
}

TEST_CASE("the initial operad has the unit at arity 1 only")
{
    Operad init = builtin_operad("initial", BaseTag::finset());
    CHECK(init.entry_ob(1).finset_ob().size == 1);
    CHECK(init.entry_ob(0).total_dim() == 0);
    CHECK(init.entry_ob(2).total_dim() == 0);
    CHECK(check_operad(init, 3).ok);
    Operad initq = builtin_operad("initial", BaseTag::chain(Q));
    CHECK(check_operad(initq, 3).ok);
}

TEST_CASE("injected faults in the ass table are detected")
{
    Operad ass = builtin_operad("ass", BaseTag::finset());
    // wrap gamma, transposing one entry of the (2; 2, 1) table
    Operad bad("ass-mutated", ass.collection(), ass.unit(), [ass](const std::vector<int>& ns) {
        BaseMorphism g = ass.gamma(ns);
        if (ns == std::vector<int>{2, 1}) {
            auto t = g.table();
            std::swap(t[0], t[1]);
            return BaseMorphism::finset_map(g.src(), g.dst(), std::move(t));
        }
        return g;
    });
    CheckReport r = check_operad(bad, 3);
    CHECK_FALSE(r.ok);
    CHECK(!r.failures.empty());
}

TEST_CASE("endomorphism operad of a 2-element set")
{
    BaseObject a = BaseObject::finset(2);
    Operad end = endomorphism_operad(a);
    CHECK(end.entry_ob(2).finset_ob().size == 16);
    CHECK(end.entry_ob(0).finset_ob().size == 2);
    CheckReport r = check_operad(end, 3);
    INFO(r.summary());
    CHECK(r.ok);
}

TEST_CASE("endomorphism operad gamma is literal substitution")
{
    BaseObject a = BaseObject::finset(2);
    Operad end = endomorphism_operad(a);
    // arity (2; 1, 1): phi(b1(x), b2(y)) for all table triples
    BaseMorphism g = end.gamma({1, 1});
    auto dec2 = [](int f, std::vector<int>& t) {  // binary function on {0,1}
        t = {f / 8 % 2 * 0, 0, 0, 0};
        for (int i = 0; i < 4; ++i)
            t[3 - i] = (f >> i) & 1;
    };
    auto dec1 = [](int f, std::vector<int>& t) {
        t = {(f >> 1) & 1, f & 1};
    };
    for (int phi = 0; phi < 16; ++phi)
        for (int b1 = 0; b1 < 4; ++b1)
            for (int b2 = 0; b2 < 4; ++b2) {
                int src = (phi * 4 + b1) * 4 + b2;
                int out = g.table()[src];
                std::vector<int> tp, t1, t2, to;
                dec2(phi, tp);
                dec1(b1, t1);
                dec1(b2, t2);
                dec2(out, to);
                for (int x = 0; x < 2; ++x)
                    for (int y = 0; y < 2; ++y)
                        CHECK(to[x * 2 + y] == tp[t1[x] * 2 + t2[y]]);
            }
}

TEST_CASE("endomorphism operad of a vector space")
{
    BaseObject v = BaseObject::vec(Q, 2);
    Operad end = endomorphism_operad(v);
    CHECK(end.entry_ob(2).vec_ob().dim == 8);
    CHECK(check_operad(end, 3).ok);
    // over the unit object every entry is I-sized
    Operad endi = endomorphism_operad(BaseObject::unit(BaseTag::vec(Q)));
    for (int n = 0; n <= 3; ++n)
        CHECK(endi.entry_ob(n).total_dim() == 1);
}

TEST_CASE("coendomorphism operad")
{
    BaseObject b = BaseObject::finset(2);
    Operad coend = coendomorphism_operad(b);
    CHECK(coend.entry_ob(2).finset_ob().size == 16);  // 4^2 functions
    CheckReport r = check_operad(coend, 3);
    INFO(r.summary());
    CHECK(r.ok);
    Operad coendv = coendomorphism_operad(BaseObject::vec(Q, 2));
    CHECK(coendv.entry_ob(2).vec_ob().dim == 8);
    CHECK(check_operad(coendv, 2).ok);
}

TEST_CASE("product operad")
{
    Operad ass = builtin_operad("ass", BaseTag::vec(Q));
    Operad com = builtin_operad("com", BaseTag::vec(Q));
    Operad pc = product_operad(ass, com);
    for (int n = 0; n <= 3; ++n)
        CHECK(pc.entry_ob(n).vec_ob().dim == ass.entry_ob(n).vec_ob().dim);
    Operad aa = product_operad(ass, ass);
    CHECK(aa.entry_ob(2).vec_ob().dim == 4);
    CheckReport r = check_operad(aa, 3);
    INFO(r.summary());
    CHECK(r.ok);
    // the diagonal ass -> ass⊗ass is an operad map
    CheckReport rm = check_operad_map(ass_diagonal(ass, aa), 3);
    INFO(rm.summary());
    CHECK(rm.ok);
}

TEST_CASE("sigma-split predicate")
{
    CHECK(sigma_split(builtin_operad("com", BaseTag::vec(Q)), 4));
    CHECK(sigma_split(builtin_operad("com", BaseTag::chain(Q)), 4));
    std::string why;
    CHECK_FALSE(sigma_split(builtin_operad("com", BaseTag::finset()), 4, &why));
    CHECK(!why.empty());
    CHECK(sigma_split(builtin_operad("ass", BaseTag::finset()), 4));  // free actions
    CHECK_FALSE(sigma_split(builtin_operad("com", BaseTag::vec(FieldSpec::prime(3))), 4));
    CHECK(sigma_split(builtin_operad("com", BaseTag::vec(FieldSpec::prime(5))), 4));
}

TEST_CASE("pair product operad with projections")
{
    Operad ass = builtin_operad("ass", BaseTag::vec(Q));
    Operad com = builtin_operad("com", BaseTag::vec(Q));
    auto pp = pair_product_with_projections(ass, com);
    CHECK(pp.prod.entry_ob(2).vec_ob().dim == 3);
    CheckReport r = check_operad(pp.prod, 3);
    INFO(r.summary());
    CHECK(r.ok);
    CHECK(check_operad_map(pp.pr1, 3).ok);
    CHECK(check_operad_map(pp.pr2, 3).ok);
}
