#ifndef OPD_TENSOR_HPP
#define OPD_TENSOR_HPP

#include "opd/base.hpp"
#include "opd/perm.hpp"

namespace opd {

/* Iterated-left tensor product of a list of factors, with basis bookkeeping.
 * All multi-factor constructions in the library route through this layout, so
 * associators never need to be materialized separately: the flat index of a
 * basis tuple is what ((F_1 ⊗ F_2) ⊗ ...) ⊗ F_k assigns to it. */
class TensorLayout {
  public:
    TensorLayout() = default;
    explicit TensorLayout(std::vector<BaseObject> factors, std::optional<BaseTag> tag = {});

    const BaseObject& total() const { return total_; }
    int arity() const { return (int)factors_.size(); }
    const BaseObject& factor(int i) const { return factors_[i]; }
    const std::vector<BaseObject>& factors() const { return factors_; }
    const BaseTag& tag() const { return tag_; }

    struct Elem {
        std::vector<int> degs;
        std::vector<int> idxs;
    };
    Elem decode(int n, int flat) const;
    int encode(const std::vector<int>& degs, const std::vector<int>& idxs,
               int* total_deg = nullptr) const;
    /* Visit every basis element of degree n (n = 0 for FinSet/Vec) in flat order. */
    void for_each(int n, const std::function<void(const Elem&, int flat)>& fn) const;
    void for_each_all(const std::function<void(int n, const Elem&, int flat)>& fn) const;

    /* Factor shuffle: result maps total -> ⊗ factors[rho(j)], sending a tuple t to the
     * tuple with slot j = t[rho(j)], with the Koszul sign of the crossing. */
    BaseMorphism permute(const Permutation& rho) const;
    /* Apply f : factors[pos] ⊗ … ⊗ factors[pos+len-1] -> Y inside the product. */
    BaseMorphism promote(int pos, int len, const BaseMorphism& f) const;
    /* Reindexing total -> (⊗ group 1) ⊗ (⊗ group 2) ⊗ …, no signs. */
    BaseMorphism regroup(const std::vector<int>& group_sizes) const;
    BaseMorphism ungroup(const std::vector<int>& group_sizes) const;

  private:
    std::vector<BaseObject> factors_;
    std::vector<BaseObject> prefix_;
    BaseObject total_;
    BaseTag tag_;
};

/* Canonical map hom(A_1,B_1) ⊗ … ⊗ hom(A_m,B_m) -> hom(A_1⊗…⊗A_m, B_1⊗…⊗B_m),
 * with the Koszul signs of moving maps past arguments. */
BaseMorphism hom_tensor_assemble(const std::vector<BaseObject>& srcs,
                                 const std::vector<BaseObject>& dsts);

}  // namespace opd

#endif
