#ifndef OPD_ACTION_HPP
#define OPD_ACTION_HPP

#include "opd/tensor.hpp"

namespace opd {

/* An object with a right Sigma_n action: act(id) = id and act(s)∘act(p) = act(p*s). */
struct SymmetricAction {
    BaseObject object;
    int degree = 0;
    std::function<BaseMorphism(const Permutation&)> act;

    BaseMorphism act_on(const Permutation& s) const
    {
        require(s.size() == degree, "permutation degree mismatch: ", s.size(), " vs ", degree);
        return act(s);
    }

    static SymmetricAction trivial(BaseObject x, int n);
    /* X^{⊗n} with slot j of the output holding input factor s(j). */
    static SymmetricAction tensor_power(const BaseObject& x, int n);
    /* I[Sigma_n]: one unit summand per permutation in lex-rank order; right translation. */
    static SymmetricAction regular(const BaseTag& t, int n);
    /* Conjugation action on hom(C, P): f -> act_P(s) ∘ f ∘ act_C(s)^{-1}. */
    static SymmetricAction conjugation(const SymmetricAction& exponent,
                                       const SymmetricAction& target);
    /* Precomposition-only action on hom(C, Y) for a plain target Y. */
    static SymmetricAction exponent_only(const SymmetricAction& exponent, const BaseObject& y);
    /* Postcomposition-only action on hom(X, P) for a plain source X. */
    static SymmetricAction target_only(const BaseObject& x, const SymmetricAction& target);
    /* Diagonal action on a ⊗ b (same degree). */
    static SymmetricAction diagonal(const SymmetricAction& a, const SymmetricAction& b);
};

/* act(id) = id, act(s)act(p) = act(p*s) on generator pairs, all act(s) isomorphisms. */
bool check_action(const SymmetricAction& a, std::string* why = nullptr);

struct CoinvariantsData {
    BaseObject object;
    BaseMorphism proj;
    BaseMorphism sect;  // proj ∘ sect = id
};

/* Quotient of x by the subgroup generated by the given morphisms (orbits over FinSet,
 * span of (g - 1)-images over a field; exact in any characteristic). */
CoinvariantsData coinvariants_by(const BaseObject& x, const std::vector<BaseMorphism>& gens);
CoinvariantsData coinvariants(const SymmetricAction& a);

/* One generator of a finite group acting on x, together with its image in Sigma_n. */
struct TwistedGenerator {
    BaseMorphism on_object;
    Permutation input_perm;
};

struct InducedData {
    SymmetricAction action;  // residual Sigma_n action on the quotient
    BaseObject big;          // x ⊗ I[Sigma_n] = one copy of x per permutation, lex order
    BaseMorphism proj;       // big -> quotient
    BaseMorphism sect;
    /* Flat index of (copy at permutation s, basis j of x): s.lex_rank() * dim(x) + j
     * within a degree; see induced_block_index. */
};

/* x ⊗_G I[Sigma_n] for the group G given by generators; the quotient of ⊕_s x by
 * (v, s) ~ (v·g, u(g)^{-1} ∘ s), with residual right Sigma_n translation. */
InducedData induce(const BaseObject& x, const std::vector<TwistedGenerator>& gens, int n);

}  // namespace opd

#endif
