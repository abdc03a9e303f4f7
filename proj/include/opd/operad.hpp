#ifndef OPD_OPERAD_HPP
#define OPD_OPERAD_HPP

#include <map>
#include <memory>
#include <mutex>

#include "opd/action.hpp"

namespace opd {

/* Arity-indexed family of Sigma_n-objects.  Entries are produced on demand and
 * memoized; support_bound marks every higher arity as the initial object. */
class Collection {
  public:
    Collection() = default;
    Collection(BaseTag base, std::function<SymmetricAction(int)> entry,
               std::optional<int> support_bound = {}, bool reduced = false);

    const BaseTag& base() const { return base_; }
    std::optional<int> support_bound() const { return support_bound_; }
    bool reduced() const { return reduced_; }
    const SymmetricAction& entry(int n) const;
    BaseObject entry_ob(int n) const { return entry(n).object; }

  private:
    BaseTag base_;
    std::optional<int> support_bound_;
    bool reduced_ = false;
    struct Memo {
        std::function<SymmetricAction(int)> fn;
        std::map<int, SymmetricAction> cache;
        std::mutex mu;
    };
    std::shared_ptr<Memo> memo_;
};

/* Operad: collection + unit I -> P(1) + composition maps
 * gamma(ns) : P(k) ⊗ P(ns[0]) ⊗ … ⊗ P(ns[k-1]) -> P(sum ns), k = ns.size().
 * gamma({}) is the identity of P(0). */
class Operad {
  public:
    Operad() = default;
    Operad(std::string name, Collection coll, BaseMorphism unit,
           std::function<BaseMorphism(const std::vector<int>&)> gamma);

    const std::string& name() const { return name_; }
    const Collection& collection() const { return coll_; }
    const BaseTag& base() const { return coll_.base(); }
    const SymmetricAction& entry(int n) const { return coll_.entry(n); }
    BaseObject entry_ob(int n) const { return coll_.entry_ob(n); }
    const BaseMorphism& unit() const { return unit_; }
    BaseMorphism gamma(const std::vector<int>& ns) const;
    /* Layout of gamma's source: [P(k), P(ns[0]), …]. */
    TensorLayout gamma_source(const std::vector<int>& ns) const;
    /* Partial composition P(k) ⊗ P(m) -> P(k+m-1) plugging into the given slot. */
    BaseMorphism partial_comp(int k, int m, int slot) const;

  private:
    std::string name_;
    Collection coll_;
    BaseMorphism unit_;
    struct Memo {
        std::function<BaseMorphism(const std::vector<int>&)> fn;
        std::map<std::vector<int>, BaseMorphism> cache;
        std::mutex mu;
    };
    std::shared_ptr<Memo> memo_;
};

/* Cooperad: counit C(1) -> I and decomposition maps
 * delta(ns) : C(sum ns) -> C(k) ⊗ C(ns[0]) ⊗ … ⊗ C(ns[k-1]). */
class Cooperad {
  public:
    Cooperad() = default;
    Cooperad(std::string name, Collection coll, BaseMorphism counit,
             std::function<BaseMorphism(const std::vector<int>&)> delta);

    const std::string& name() const { return name_; }
    const Collection& collection() const { return coll_; }
    const BaseTag& base() const { return coll_.base(); }
    const SymmetricAction& entry(int n) const { return coll_.entry(n); }
    BaseObject entry_ob(int n) const { return coll_.entry_ob(n); }
    const BaseMorphism& counit() const { return counit_; }
    BaseMorphism delta(const std::vector<int>& ns) const;
    TensorLayout delta_target(const std::vector<int>& ns) const;

  private:
    std::string name_;
    Collection coll_;
    BaseMorphism counit_;
    struct Memo {
        std::function<BaseMorphism(const std::vector<int>&)> fn;
        std::map<std::vector<int>, BaseMorphism> cache;
        std::mutex mu;
    };
    std::shared_ptr<Memo> memo_;
};

/* Map of operads: per-arity components commuting with units/gamma/actions. */
class OperadMap {
  public:
    OperadMap() = default;
    OperadMap(Operad src, Operad dst, std::function<BaseMorphism(int)> component);
    const Operad& src() const { return *src_; }
    const Operad& dst() const { return *dst_; }
    BaseMorphism component(int n) const;

  private:
    std::shared_ptr<Operad> src_, dst_;
    struct Memo {
        std::function<BaseMorphism(int)> fn;
        std::map<int, BaseMorphism> cache;
        std::mutex mu;
    };
    std::shared_ptr<Memo> memo_;
};

/* --- axiom checking -------------------------------------------------------------- */

struct CheckOptions {
    long long column_budget = 1 << 20;  // skip (with notice) any identity whose source is larger
    bool unit_laws = true;
    bool equivariance = true;
    bool associativity = true;
};

struct CheckReport {
    bool ok = true;
    int checks = 0;
    std::vector<std::string> failures;  // each carries a witness
    std::vector<std::string> notices;   // skipped/unverifiable items
    std::string summary() const;
};

/* Unit laws, equivariance on transposition generators, associativity squares for all
 * composable (k; m_i; n_ij) with total <= max_arity.  Squares whose source exceeds the
 * column budget are replaced by the complete family of partial-composition relations
 * (a∘b)∘c (nested and disjoint), which generate the same axioms; every skip is noticed. */
CheckReport check_operad(const Operad& p, int max_arity, const CheckOptions& opt = {});
CheckReport check_cooperad(const Cooperad& c, int max_arity, const CheckOptions& opt = {});
CheckReport check_operad_map(const OperadMap& f, int max_arity, const CheckOptions& opt = {});

/* --- built-in operads --------------------------------------------------------------- */

/* initial | ass | com | permutation (permutation = ass over FinSet). */
Operad builtin_operad(const std::string& name, const BaseTag& base);
/* Arity-wise tensor product of operads (the Hopf pairing P ⊗ Q). */
Operad product_operad(const Operad& p, const Operad& q);
/* Categorical product P × Q (entrywise biproduct; linear bases). */
Operad pair_product_operad(const Operad& p, const Operad& q);
struct PairProjections {
    Operad prod;
    OperadMap pr1, pr2;
};
PairProjections pair_product_with_projections(const Operad& p, const Operad& q);
/* Endomorphism operad E_A(n) = hom(A^{⊗n}, A). */
Operad endomorphism_operad(const BaseObject& a);
/* Coendomorphism operad E^op_B(n) = hom(B, B^{⊗n}). */
Operad coendomorphism_operad(const BaseObject& b);
/* Diagonal map of operads P -> P⊗P for P with entrywise comonoid structure;
 * provided for ass/com where the diagonal is basis-wise. */
OperadMap ass_diagonal(const Operad& ass, const Operad& ass_sq);

/* Sigma-split predicate: is P a retract of P ⊗ Ass, verified arity-wise up to the
 * bound by exhibiting the canonical section/retraction pair. */
bool sigma_split(const Operad& p, int max_arity, std::string* why = nullptr);

/* Equality of morphisms with a columnwise witness on failure. */
bool equal_with_witness(const BaseMorphism& a, const BaseMorphism& b, std::string* witness);

}  // namespace opd

#endif
