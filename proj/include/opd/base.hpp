#ifndef OPD_BASE_HPP
#define OPD_BASE_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "opd/matrix.hpp"

namespace opd {

/* Which of the three base categories a value lives in. */
struct BaseTag {
    enum class Cat { FinSet, Vec, Chain };
    Cat cat = Cat::FinSet;
    FieldSpec field;  // meaningful for Vec/Chain only

    static BaseTag finset() { return {Cat::FinSet, FieldSpec::rationals()}; }
    static BaseTag vec(FieldSpec f) { return {Cat::Vec, f}; }
    static BaseTag chain(FieldSpec f) { return {Cat::Chain, f}; }
    bool operator==(const BaseTag& o) const
    {
        if (cat != o.cat)
            return false;
        return cat == Cat::FinSet || field == o.field;
    }
    bool operator!=(const BaseTag& o) const { return !(*this == o); }
    bool linear() const { return cat != Cat::FinSet; }
    std::string str() const;
};

/* Finite set {0..size-1}; labels are presentation-only and ignored by equality. */
struct FinSetOb {
    int size = 0;
    std::vector<std::string> labels;
};

struct VecOb {
    FieldSpec field;
    int dim = 0;
};

/* Bounded chain complex: degrees lo..lo+dims.size()-1, diff[i] : C_{lo+i+1} -> C_{lo+i}.
 * Normalized so the extreme degrees have nonzero dimension (empty complex: dims empty). */
struct ChainOb {
    FieldSpec field;
    int lo = 0;
    std::vector<int> dims;
    std::vector<Matrix> diff;
};

class BaseObject {
  public:
    BaseObject() : v_(FinSetOb{}) {}
    BaseObject(FinSetOb x) : v_(std::move(x)) { validate(); }
    BaseObject(VecOb x) : v_(std::move(x)) { validate(); }
    BaseObject(ChainOb x) : v_(std::move(x)) { validate(); }

    static BaseObject finset(int size, std::vector<std::string> labels = {});
    static BaseObject vec(FieldSpec f, int dim);
    static BaseObject chain(FieldSpec f, int lo, std::vector<int> dims, std::vector<Matrix> diff);
    /* The monoidal unit I of the given base. */
    static BaseObject unit(const BaseTag& t);
    /* The initial object (empty set / zero space / zero complex). */
    static BaseObject initial(const BaseTag& t);

    BaseTag tag() const;
    bool is_finset() const { return std::holds_alternative<FinSetOb>(v_); }
    bool is_vec() const { return std::holds_alternative<VecOb>(v_); }
    bool is_chain() const { return std::holds_alternative<ChainOb>(v_); }
    const FinSetOb& finset_ob() const { return std::get<FinSetOb>(v_); }
    const VecOb& vec_ob() const { return std::get<VecOb>(v_); }
    const ChainOb& chain_ob() const { return std::get<ChainOb>(v_); }

    /* Total element count / dimension across all degrees. */
    long long total_dim() const;
    bool is_initial() const { return total_dim() == 0; }
    /* Degree range; FinSet/Vec are concentrated in degree 0. */
    int lo() const;
    int hi() const;
    int dim_at(int q) const;
    /* Differential C_q -> C_{q-1} (zero-shaped outside range); FinSet not allowed. */
    Matrix diff_at(int q) const;

    bool operator==(const BaseObject& o) const;
    bool operator!=(const BaseObject& o) const { return !(*this == o); }
    std::string str() const;

  private:
    void validate();
    std::variant<FinSetOb, VecOb, ChainOb> v_;
};

struct FinSetMapData {
    std::vector<int> table;
};
struct VecMapData {
    Matrix m;
};
struct ChainMapData {
    int lo = 0;                 // = src.lo
    std::vector<Matrix> mats;   // mats[q-lo] : src_q -> dst_q over src's degree range
};

class BaseMorphism {
  public:
    BaseMorphism() = default;
    static BaseMorphism finset_map(BaseObject src, BaseObject dst, std::vector<int> table);
    static BaseMorphism vec_map(BaseObject src, BaseObject dst, Matrix m);
    static BaseMorphism chain_map(BaseObject src, BaseObject dst, std::vector<Matrix> mats);
    static BaseMorphism identity(const BaseObject& x);
    /* Linear map given column-by-column: col(q, j) is the image of basis j in degree q. */
    static BaseMorphism linear(BaseObject src, BaseObject dst,
                               const std::function<SparseCol(int q, int j)>& col);
    /* The unique map out of the initial object. */
    static BaseMorphism from_initial(const BaseObject& dst, const BaseTag& t);

    const BaseObject& src() const { return src_; }
    const BaseObject& dst() const { return dst_; }
    bool is_finset() const { return std::holds_alternative<FinSetMapData>(d_); }
    const std::vector<int>& table() const { return std::get<FinSetMapData>(d_).table; }
    const Matrix& matrix() const { return std::get<VecMapData>(d_).m; }
    /* Per-degree component (any base; FinSet forbidden). */
    Matrix mat_at(int q) const;

    BaseMorphism compose(const BaseMorphism& inner) const;  // this ∘ inner
    BaseMorphism operator*(const BaseMorphism& inner) const { return compose(inner); }
    BaseMorphism operator+(const BaseMorphism& o) const;
    BaseMorphism operator-(const BaseMorphism& o) const;
    bool operator==(const BaseMorphism& o) const;
    bool operator!=(const BaseMorphism& o) const { return !(*this == o); }
    bool is_iso() const;
    BaseMorphism inverse() const;
    /* Surjective in every degree (linear) / onto (FinSet). */
    bool is_surjective() const;

    /* Image of one source basis element (degree q, index j) as a sparse target vector;
     * FinSet maps report the single image index with coefficient one. */
    SparseCol image_of(int q, int j) const;

    std::string str() const;

  private:
    void validate();
    BaseObject src_, dst_;
    std::variant<FinSetMapData, VecMapData, ChainMapData> d_;
};

/* --- monoidal structure ------------------------------------------------- */

BaseObject tensor(const BaseObject& x, const BaseObject& y);
BaseMorphism tensor(const BaseMorphism& f, const BaseMorphism& g);

/* Canonical isomorphisms I⊗X -> X and X⊗I -> X. */
BaseMorphism unit_left(const BaseObject& x);
BaseMorphism unit_right(const BaseObject& x);

/* Symmetry isomorphism x⊗y -> y⊗x; Koszul sign (-1)^{pq} on chain blocks. */
BaseMorphism symmetry(const BaseObject& x, const BaseObject& y);

/* Binary tensor basis layout: flat index of (a in degree p of x, b in degree q of y). */
int pair_index(const BaseObject& x, const BaseObject& y, int p, int q, int a, int b);

/* --- closed structure ---------------------------------------------------- */

BaseObject internal_hom(const BaseObject& x, const BaseObject& y);
/* Basis conventions of internal_hom:
 *  FinSet: function f: x->y has index sum f(i) * |y|^{|x|-1-i} (lexicographic in the
 *          value sequence f(0), f(1), ...).
 *  Vec:    basis element j*dimY + i is the map e_j -> e_i.
 *  Chain:  degree-q part is the sum over p of Hom(X_p, Y_{p+q}), p ascending, with
 *          j*dim(Y_{p+q}) + i inside a block; differential f -> d∘f - (-1)^q f∘d.
 * hom_index returns the flat index of the basis map e_j (degree p) -> e_i (degree p+q);
 * q and p are ignored for FinSet/Vec. */
int hom_index(const BaseObject& x, const BaseObject& y, int q, int p, int j, int i);

/* Evaluation x ⊗ hom(x,y) -> y, on elements (a, f) -> (-1)^{|a||f|} f(a). */
BaseMorphism eval_morphism(const BaseObject& x, const BaseObject& y);
/* Transpose of g : z⊗x -> y along the closed structure: z -> hom(x,y). */
BaseMorphism transpose_hom(const BaseMorphism& g, const BaseObject& z, const BaseObject& x,
                           const BaseObject& y);
BaseMorphism untranspose_hom(const BaseMorphism& h, const BaseObject& z, const BaseObject& x,
                             const BaseObject& y);
/* Functoriality: (pre: X'->X, post: Y->Y') induce hom(X,Y) -> hom(X',Y'). */
BaseMorphism hom_functorial(const BaseMorphism& pre, const BaseMorphism& post);
/* Composition map hom(b,c) ⊗ hom(a,b) -> hom(a,c). */
BaseMorphism hom_compose(const BaseObject& a, const BaseObject& b, const BaseObject& c);
/* Canonical isomorphism X -> hom(I, X) and its inverse. */
BaseMorphism hom_from_unit(const BaseObject& x);
BaseMorphism hom_from_unit_inv(const BaseObject& x);

/* --- (co)limits ----------------------------------------------------------- */

struct SumData {
    BaseObject total;
    std::vector<BaseMorphism> inj;
    std::vector<BaseMorphism> proj;  // linear bases only
};
SumData coproduct(const std::vector<BaseObject>& parts);
/* Map out of a coproduct assembled from maps out of the parts. */
BaseMorphism copair(const SumData& sum, const std::vector<BaseMorphism>& legs);

struct PullbackData {
    BaseObject obj;
    BaseMorphism pr1, pr2;
    /* Mediating morphism for a cone (h1: W->X, h2: W->Y) with f∘h1 = g∘h2. */
    std::function<BaseMorphism(const BaseMorphism&, const BaseMorphism&)> mediate;
};
PullbackData pullback(const BaseMorphism& f, const BaseMorphism& g);

/* --- change of flavour ---------------------------------------------------- */

/* Free linearization of a finite set: basis indexed by elements. */
BaseObject linearize(const BaseObject& finset, const FieldSpec& f);
BaseMorphism linearize(const BaseMorphism& finset_map, const FieldSpec& f);
/* A vector space as a chain complex concentrated in degree 0 (and the map version). */
BaseObject vec_as_chain(const BaseObject& v);
BaseMorphism vec_as_chain(const BaseMorphism& f);

/* --- homology ------------------------------------------------------------- */

std::map<int, int> homology_dims(const BaseObject& c);

struct QuasiIsoReport {
    bool ok = false;
    std::map<int, std::pair<int, int>> dims;  // degree -> (H src, H dst)
    std::map<int, bool> degree_ok;
    std::string detail;
};
QuasiIsoReport is_quasi_iso(const BaseMorphism& f);

}  // namespace opd

#endif
