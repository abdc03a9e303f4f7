#include "doctest.h"

#include "opd/action.hpp"
#include "opd/tree.hpp"

using namespace opd;

namespace {
FieldSpec Q = FieldSpec::rationals();
const char* PAPER_TREE = "(* (() (* * *) *))";
}

TEST_CASE("symmetric actions satisfy the right-action law")
{
    BaseObject v = BaseObject::vec(Q, 2);
    std::string why;
    CHECK(check_action(SymmetricAction::tensor_power(v, 3), &why));
    CHECK(check_action(SymmetricAction::regular(BaseTag::finset(), 3), &why));
    CHECK(check_action(SymmetricAction::regular(BaseTag::vec(Q), 3), &why));
    auto conj = SymmetricAction::conjugation(SymmetricAction::tensor_power(v, 2),
                                             SymmetricAction::regular(BaseTag::vec(Q), 2));
    CHECK(check_action(conj, &why));
}

TEST_CASE("coinvariants of the regular representation")
{
    auto reg = SymmetricAction::regular(BaseTag::vec(Q), 2);
    auto ci = coinvariants(reg);
    CHECK(ci.object.vec_ob().dim == 1);
    CHECK(ci.proj * ci.sect == BaseMorphism::identity(ci.object));
    // projection coequalizes the action
    for (const auto& g : Permutation::generators(2))
        CHECK(ci.proj * reg.act_on(g) == ci.proj);
}

TEST_CASE("coinvariants of the symmetric square")
{
    auto sq = SymmetricAction::tensor_power(BaseObject::vec(Q, 2), 2);
    auto ci = coinvariants(sq);
    CHECK(ci.object.vec_ob().dim == 3);
    // over F2 the dimension is also 3 (quotient, not invariants)
    auto sq2 = SymmetricAction::tensor_power(BaseObject::vec(FieldSpec::prime(2), 2), 2);
    CHECK(coinvariants(sq2).object.vec_ob().dim == 3);
}

TEST_CASE("coinvariants in FinSet are orbit sets")
{
    auto sq = SymmetricAction::tensor_power(BaseObject::finset(2), 2);
    auto ci = coinvariants(sq);
    CHECK(ci.object.finset_ob().size == 3);  // multisets of size 2 over 2 letters
    // trivial group: identity projection
    auto tv = coinvariants_by(BaseObject::finset(4), {});
    CHECK(tv.object.finset_ob().size == 4);
    CHECK(tv.proj == BaseMorphism::identity(BaseObject::finset(4)));
}

TEST_CASE("induction along a group homomorphism")
{
    // trivial group, dim x = 2, n = 3: free induction of dimension 2 * 3!
    auto ind = induce(BaseObject::vec(Q, 2), {}, 3);
    CHECK(ind.action.object.vec_ob().dim == 12);
    std::string why;
    CHECK(check_action(ind.action, &why));
    // FinSet singleton with full Sigma_2 twisting: single orbit
    std::vector<TwistedGenerator> gens;
    gens.push_back({BaseMorphism::identity(BaseObject::finset(1)),
                    Permutation::transposition(2, 0, 1)});
    auto ind2 = induce(BaseObject::finset(1), gens, 2);
    CHECK(ind2.action.object.finset_ob().size == 1);
    // sign action of Sigma_2 on a line, n = 2: quotient of 2 copies by (v, s) ~ (-v, ts)
    Matrix neg(Q, 1, 1);
    neg.set(0, 0, -Scalar::one(Q));
    std::vector<TwistedGenerator> sgens;
    sgens.push_back({BaseMorphism::vec_map(BaseObject::vec(Q, 1), BaseObject::vec(Q, 1), neg),
                     Permutation::transposition(2, 0, 1)});
    auto ind3 = induce(BaseObject::vec(Q, 1), sgens, 2);
    CHECK(ind3.action.object.vec_ob().dim == 1);
    CHECK(check_action(ind3.action, &why));
}

TEST_CASE("tree grammar parses and prints")
{
    Tree t = Tree::parse(PAPER_TREE);
    CHECK(t.str() == PAPER_TREE);
    CHECK(Tree::parse("*").is_leaf());
    CHECK(Tree::parse("()").valence() == 0);
    CHECK(Tree::parse("[* *]").coloured());
    CHECK_THROWS_WITH_AS(Tree::parse("((**"), doctest::Contains("offset 4"), error);
    CHECK_THROWS_AS(Tree::parse("(*))"), error);
    CHECK(Tree::parse("(*(**))") == Tree::parse("(* (* *))"));
}

TEST_CASE("tree stats match the documented figure")
{
    TreeStats s = tree_stats(Tree::parse(PAPER_TREE));
    CHECK(s.vertices == 4);
    CHECK(s.internal_edges == 3);
    CHECK(s.inputs == 5);
    CHECK(s.root_valence == 2);
    CHECK(s.stumps == 1);
    TreeStats leaf = tree_stats(Tree::leaf());
    CHECK(leaf.vertices == 0);
    CHECK(leaf.inputs == 1);
    CHECK(leaf.root_valence == -1);
    TreeStats stump = tree_stats(Tree::parse("()"));
    CHECK(stump.vertices == 1);
    CHECK(stump.inputs == 0);
    CHECK(stump.stumps == 1);
}

TEST_CASE("grafting and root splitting")
{
    Tree t2 = graft({Tree::leaf(), Tree::leaf()});
    CHECK(t2.str() == "(* *)");
    auto [n, parts] = root_split(t2);
    CHECK(n == 2);
    CHECK(parts[0].is_leaf());
    // grafting the figure tree from its pieces
    Tree inner = graft({Tree::parse("()"), Tree::parse("(* * *)"), Tree::leaf()});
    Tree fig = graft({Tree::leaf(), inner});
    CHECK(fig == Tree::parse(PAPER_TREE));
}

TEST_CASE("canonical form identifies non-planar isomorphic trees")
{
    CHECK(canonical_form(Tree::parse("(* (* *))")) == canonical_form(Tree::parse("((* *) *)")));
    CHECK(canonical_form(Tree::leaf()) == "*");
    // colourings distinguish classes
    Tree fig = Tree::parse(PAPER_TREE);
    Tree figc = fig.with_colours({{1}});
    CHECK(canonical_form(fig) != canonical_form(figc));
    CHECK(figc.coloured_count() == 1);
    CHECK(figc.colour_addresses() == std::vector<std::vector<int>>{{1}});
}

TEST_CASE("canonicalization produces a valid isomorphism")
{
    for (const char* txt : {"((* *) *)", "(* (() (* * *) *))", "(() * (* (* *)))",
                            "[(* *) [* *]]", "(((* * *)) ())"}) {
        Tree t = Tree::parse(txt);
        CanonResult c = canonicalize(t);
        CHECK(c.canon == canonical_tree(t));
        CHECK(iso_valid(t, c.canon, c.iso));
    }
}

TEST_CASE("automorphism groups: order formula against brute force")
{
    auto count = [](const char* txt) {
        Tree c = canonical_tree(Tree::parse(txt));
        return automorphism_group(c).order;
    };
    CHECK(count("(* *)") == 2);
    CHECK(count("(* * * *)") == 24);
    CHECK(count("((* *) *)") == 2);
    CHECK(count(PAPER_TREE) == 6);
    // brute force agreement on every enumerated tree with <= 6 vertices and <= 4 inputs
    EnumOptions opt;
    opt.allow_colours = true;
    int checked = 0;
    for (int n = 0; n <= 4; ++n)
        for (const auto& t : enumerate_trees(n, n == 0 ? 4 : 6, opt)) {
            Tree c = canonical_tree(t);
            auto grp = automorphism_group(c);
            auto all = all_isomorphisms(c, c);
            CHECK(grp.order == all.size());
            for (const auto& g : grp.generators)
                CHECK(iso_valid(c, c, g));
            ++checked;
            if (checked > 200)
                break;
        }
    CHECK(checked > 30);
}

TEST_CASE("numberings")
{
    CHECK(numberings(Tree::parse("(* *)")).size() == 2);
    CHECK(numberings(Tree::leaf()).size() == 1);
    CHECK(numberings(Tree::parse(PAPER_TREE)).size() == 120);
    auto addr = input_addresses(Tree::parse(PAPER_TREE));
    CHECK(addr.size() == 5);
    CHECK(addr[0] == std::vector<int>{0});
    CHECK(addr[1] == std::vector<int>{1, 1, 0});
}

TEST_CASE("admissibility")
{
    CHECK(is_admissible(Tree::parse("[* [* *]]")));
    CHECK(is_admissible(Tree::parse("(* [* *])")));
    CHECK_FALSE(is_admissible(Tree::parse("(* (* *))")));
    CHECK(is_admissible(Tree::parse("(* *)")));
    CHECK(is_admissible(Tree::leaf()));
    // internal edge between coloured parent and uncoloured child is fine
    CHECK(is_admissible(Tree::parse("[* (* *)]")));
}

TEST_CASE("tree enumeration matches documented counts")
{
    // n=2, up to 2 vertices, uncoloured: 4 classes
    auto cls = enumerate_trees(2, 2);
    CHECK(cls.size() == 4);
    // with c = 0 and admissibility, any n: only corollas and the unit tree
    EnumOptions adm;
    adm.admissible_only = true;
    adm.coloured_count = 0;
    adm.allow_colours = false;
    for (int n = 1; n <= 3; ++n) {
        auto a = enumerate_trees(n, 4, adm);
        for (const auto& t : a)
            CHECK(tree_stats(t).internal_edges == 0);
    }
    // n=3, binary vertices only, exactly 2 of them: the unique binary shape
    EnumOptions bin;
    bin.uncoloured_valences = std::vector<int>{2};
    auto b = enumerate_trees(3, 2, bin);
    CHECK(b.size() == 1);
    CHECK(b[0] == canonical_tree(Tree::parse("(* (* *))")));
}

TEST_CASE("iso composition and inverse are consistent")
{
    Tree c = canonical_tree(Tree::parse(PAPER_TREE));
    auto all = all_isomorphisms(c, c);
    REQUIRE(all.size() == 6);
    for (const auto& g : all)
        for (const auto& h : all) {
            TreeIso gh = compose_iso(g, h);
            CHECK(iso_valid(c, c, gh));
            // input permutations compose accordingly
            CHECK((gh.input_perm() == g.input_perm() * h.input_perm()));
        }
    for (const auto& g : all)
        CHECK(iso_valid(c, c, inverse_iso(g)));
}
