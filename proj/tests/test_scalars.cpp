#include "doctest.h"

#include "opd/field.hpp"
#include "opd/matrix.hpp"
#include "opd/perm.hpp"

using namespace opd;

TEST_CASE("rational scalars are exact")
{
    FieldSpec q = FieldSpec::rationals();
    Scalar a = Scalar::of_rational(q, mpq_class(1, 3));
    Scalar b = Scalar::of_rational(q, mpq_class(1, 6));
    CHECK((a + b).str() == "1/2");
    CHECK((a * b).str() == "1/18");
    CHECK((a - a).is_zero());
    CHECK(a.inverse().str() == "3");
    CHECK(Scalar::parse(q, "-7/2") * Scalar::parse(q, "-2/7") == Scalar::one(q));
}

TEST_CASE("prime field arithmetic")
{
    FieldSpec f5 = FieldSpec::prime(5);
    Scalar a = Scalar::of_int(f5, 3), b = Scalar::of_int(f5, 4);
    CHECK((a + b).residue() == 2);
    CHECK((a * b).residue() == 2);
    CHECK((-a).residue() == 2);
    CHECK((a.inverse() * a).is_one());
    CHECK(Scalar::of_int(f5, -1).residue() == 4);
    CHECK_THROWS_AS(FieldSpec::prime(6), error);
}

TEST_CASE("permutation composition, rank, blocks")
{
    Permutation a({1, 0, 2}), b({2, 0, 1});
    // (a*b)(i) = a(b(i))
    CHECK((a * b) == Permutation({2, 1, 0}));
    CHECK(a.inverse() * a == Permutation::identity(3));
    CHECK(Permutation::all(3).size() == 6);
    for (std::uint64_t r = 0; r < 24; ++r)
        CHECK(Permutation::from_lex_rank(4, r).lex_rank() == r);
    // all(n) is in lex order and matches from_lex_rank
    auto all3 = Permutation::all(3);
    for (size_t i = 0; i < all3.size(); ++i)
        CHECK(all3[i].lex_rank() == i);
    CHECK(block_sum({a, Permutation::identity(2)}) == Permutation({1, 0, 2, 3, 4}));
    // block permutation: two blocks of sizes 1,2 swapped by tau
    Permutation tau({1, 0});
    CHECK(block_permutation(tau, {1, 2}) == Permutation({2, 0, 1}));
    CHECK(block_permutation(tau, {2, 1}) == Permutation({1, 2, 0}));
    CHECK(Permutation({1, 0, 2}).sign() == -1);
}

TEST_CASE("block permutation composes like a homomorphism on blocks of equal size")
{
    auto perms = Permutation::all(3);
    std::vector<int> sizes{2, 2, 2};
    for (const auto& s : perms)
        for (const auto& t : perms)
            CHECK(block_permutation(s * t, sizes) ==
                  block_permutation(s, sizes) * block_permutation(t, sizes));
}

TEST_CASE("matrix basics")
{
    FieldSpec q = FieldSpec::rationals();
    Matrix a = Matrix::from_dense(
        q, {{Scalar::of_int(q, 1), Scalar::of_int(q, 2)}, {Scalar::of_int(q, 3), Scalar::of_int(q, 4)}});
    CHECK(a.rank() == 2);
    CHECK(a.inverse_of_square() * a == Matrix::identity(q, 2));
    Matrix b = Matrix::from_dense(
        q, {{Scalar::of_int(q, 1), Scalar::of_int(q, 2)}, {Scalar::of_int(q, 2), Scalar::of_int(q, 4)}});
    CHECK(b.rank() == 1);
    CHECK(b.kernel().cols() == 1);
    // kernel really is the kernel
    CHECK((b * b.kernel()).is_zero());
    // solve
    auto x = a.solve(Matrix::identity(q, 2));
    REQUIRE(x.has_value());
    CHECK(a * *x == Matrix::identity(q, 2));
    // kron shape and value
    Matrix k = a.kron(Matrix::identity(q, 2));
    CHECK(k.rows() == 4);
    CHECK(k.at(0, 0) == Scalar::of_int(q, 1));
    CHECK(k.at(1, 3) == Scalar::of_int(q, 2));
}

TEST_CASE("quotient by span")
{
    FieldSpec q = FieldSpec::rationals();
    // quotient k^2 by span{(1,-1)}: dimension 1, proj equalizes the swapped basis
    Matrix w(q, 2, 1);
    w.set(0, 0, Scalar::one(q));
    w.set(1, 0, -Scalar::one(q));
    auto qd = quotient_by_span(q, 2, w);
    CHECK(qd.proj.rows() == 1);
    CHECK((qd.proj * w).is_zero());
    CHECK(qd.proj * qd.sect == Matrix::identity(q, 1));
    CHECK(qd.proj.at(0, 0) == qd.proj.at(0, 1));
}

TEST_CASE("quotient in characteristic p")
{
    FieldSpec f2 = FieldSpec::prime(2);
    // regular F2[S2]: quotient by span{e - t} has dim 1 (coinvariants work in any char)
    Matrix w(f2, 2, 1);
    w.set(0, 0, Scalar::one(f2));
    w.set(1, 0, Scalar::one(f2));  // -1 = 1 mod 2
    auto qd = quotient_by_span(f2, 2, w);
    CHECK(qd.proj.rows() == 1);
    CHECK((qd.proj * w).is_zero());
}
