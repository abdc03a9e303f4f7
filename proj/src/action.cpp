#include "opd/action.hpp"

namespace opd {

SymmetricAction SymmetricAction::trivial(BaseObject x, int n)
{
    SymmetricAction a;
    a.object = std::move(x);
    a.degree = n;
    BaseObject ob = a.object;
    a.act = [ob](const Permutation&) { return BaseMorphism::identity(ob); };
    return a;
}

SymmetricAction SymmetricAction::tensor_power(const BaseObject& x, int n)
{
    SymmetricAction a;
    a.degree = n;
    auto layout = std::make_shared<TensorLayout>(std::vector<BaseObject>(n, x), x.tag());
    a.object = layout->total();
    a.act = [layout](const Permutation& s) { return layout->permute(s); };
    return a;
}

SymmetricAction SymmetricAction::regular(const BaseTag& t, int n)
{
    SymmetricAction a;
    a.degree = n;
    int f = (int)factorial(n);
    switch (t.cat) {
        case BaseTag::Cat::FinSet: a.object = BaseObject::finset(f); break;
        case BaseTag::Cat::Vec: a.object = BaseObject::vec(t.field, f); break;
        default: a.object = BaseObject::chain(t.field, 0, {f}, {});
    }
    BaseObject ob = a.object;
    a.act = [ob, n, t](const Permutation& p) {
        auto perms = Permutation::all(n);
        std::vector<int> target(perms.size());
        for (size_t i = 0; i < perms.size(); ++i)
            target[i] = (int)(perms[i] * p).lex_rank();
        if (t.cat == BaseTag::Cat::FinSet)
            return BaseMorphism::finset_map(ob, ob, std::move(target));
        return BaseMorphism::linear(ob, ob, [&target, &t](int, int j) -> SparseCol {
            return {{target[j], Scalar::one(t.field)}};
        });
    };
    return a;
}

SymmetricAction SymmetricAction::conjugation(const SymmetricAction& exponent,
                                             const SymmetricAction& target)
{
    require(exponent.degree == target.degree, "conjugation degree mismatch");
    SymmetricAction a;
    a.degree = exponent.degree;
    a.object = internal_hom(exponent.object, target.object);
    SymmetricAction e = exponent, p = target;
    a.act = [e, p](const Permutation& s) {
        return hom_functorial(e.act_on(s.inverse()), p.act_on(s));
    };
    return a;
}

SymmetricAction SymmetricAction::exponent_only(const SymmetricAction& exponent,
                                               const BaseObject& y)
{
    return conjugation(exponent, SymmetricAction::trivial(y, exponent.degree));
}

SymmetricAction SymmetricAction::target_only(const BaseObject& x, const SymmetricAction& target)
{
    return conjugation(SymmetricAction::trivial(x, target.degree), target);
}

SymmetricAction SymmetricAction::diagonal(const SymmetricAction& a, const SymmetricAction& b)
{
    require(a.degree == b.degree, "diagonal degree mismatch");
    SymmetricAction d;
    d.degree = a.degree;
    d.object = tensor(a.object, b.object);
    SymmetricAction ac = a, bc = b;
    d.act = [ac, bc](const Permutation& s) { return tensor(ac.act_on(s), bc.act_on(s)); };
    return d;
}

bool check_action(const SymmetricAction& a, std::string* why)
{
    auto note = [&](const std::string& s) {
        if (why)
            *why = s;
        return false;
    };
    if (!(a.act_on(Permutation::identity(a.degree)) == BaseMorphism::identity(a.object)))
        return note("act(id) != id");
    auto gens = Permutation::generators(a.degree);
    for (const auto& g : gens)
        if (!a.act_on(g).is_iso())
            return note("act(" + g.str() + ") is not an isomorphism");
    for (const auto& s : gens)
        for (const auto& p : gens)
            if (!(a.act_on(s) * a.act_on(p) == a.act_on(p * s)))
                return note("act(" + s.str() + ")act(" + p.str() + ") != act(" + (p * s).str() +
                            ")");
    return true;
}

/* --- coinvariants ------------------------------------------------------------ */

namespace {
struct UnionFind {
    std::vector<int> up;
    explicit UnionFind(int n) : up(n)
    {
        for (int i = 0; i < n; ++i)
            up[i] = i;
    }
    int find(int i) { return up[i] == i ? i : up[i] = find(up[i]); }
    void unite(int a, int b) { up[find(a)] = find(b); }
};
}  // namespace

CoinvariantsData coinvariants_by(const BaseObject& x, const std::vector<BaseMorphism>& gens)
{
    CoinvariantsData out;
    if (x.is_finset()) {
        int n = x.finset_ob().size;
        UnionFind uf(n);
        for (const auto& g : gens)
            for (int i = 0; i < n; ++i)
                uf.unite(i, g.table()[i]);
        std::vector<int> rep;        // orbit -> minimal element
        std::vector<int> orbit(n, -1);
        for (int i = 0; i < n; ++i) {
            int r = uf.find(i);
            bool seen = false;
            for (size_t k = 0; k < rep.size(); ++k)
                if (uf.find(rep[k]) == r) {
                    orbit[i] = (int)k;
                    seen = true;
                    break;
                }
            if (!seen) {
                orbit[i] = (int)rep.size();
                rep.push_back(i);
            }
        }
        out.object = BaseObject::finset((int)rep.size());
        out.proj = BaseMorphism::finset_map(x, out.object, orbit);
        out.sect = BaseMorphism::finset_map(out.object, x, rep);
        return out;
    }
    FieldSpec f = x.tag().field;
    if (x.is_vec()) {
        int d = x.vec_ob().dim;
        Matrix span(f, d, 0);
        for (const auto& g : gens)
            span = span.hcat(g.matrix() - Matrix::identity(f, d));
        auto qd = quotient_by_span(f, d, span);
        out.object = BaseObject::vec(f, qd.proj.rows());
        out.proj = BaseMorphism::vec_map(x, out.object, qd.proj);
        out.sect = BaseMorphism::vec_map(out.object, x, qd.sect);
        return out;
    }
    // chain: degreewise quotient, induced differential proj∘d∘sect
    std::vector<QuotientData> qs;
    std::vector<int> dims;
    for (int q = x.lo(); q <= x.hi(); ++q) {
        int d = x.dim_at(q);
        Matrix span(f, d, 0);
        for (const auto& g : gens)
            span = span.hcat(g.mat_at(q) - Matrix::identity(f, d));
        qs.push_back(quotient_by_span(f, d, span));
        dims.push_back(qs.back().proj.rows());
    }
    std::vector<Matrix> diff;
    for (int q = x.lo() + 1; q <= x.hi(); ++q)
        diff.push_back(qs[q - 1 - x.lo()].proj * x.diff_at(q) * qs[q - x.lo()].sect);
    out.object = BaseObject::chain(f, x.lo(), dims, diff);
    // assemble proj/sect padded to the (possibly trimmed) quotient object
    std::vector<Matrix> pm, sm;
    for (int q = x.lo(); q <= x.hi(); ++q) {
        const auto& qd = qs[q - x.lo()];
        Matrix p(f, out.object.dim_at(q), x.dim_at(q));
        for (int j = 0; j < x.dim_at(q); ++j)
            p.set_col(j, qd.proj.col(j));
        pm.push_back(std::move(p));
    }
    for (int q = out.object.lo(); q <= out.object.hi(); ++q) {
        const auto& qd = qs[q - x.lo()];
        Matrix s(f, x.dim_at(q), out.object.dim_at(q));
        for (int j = 0; j < out.object.dim_at(q); ++j)
            s.set_col(j, qd.sect.col(j));
        sm.push_back(std::move(s));
    }
    out.proj = BaseMorphism::chain_map(x, out.object, std::move(pm));
    out.sect = BaseMorphism::chain_map(out.object, x, std::move(sm));
    return out;
}

CoinvariantsData coinvariants(const SymmetricAction& a)
{
    std::vector<BaseMorphism> gens;
    for (const auto& g : Permutation::generators(a.degree))
        gens.push_back(a.act_on(g));
    return coinvariants_by(a.object, gens);
}

/* --- induction ----------------------------------------------------------------- */

InducedData induce(const BaseObject& x, const std::vector<TwistedGenerator>& gens, int n)
{
    InducedData out;
    int nf = (int)factorial(n);
    auto perms = Permutation::all(n);
    SumData sum = coproduct(std::vector<BaseObject>(nf, x));
    out.big = sum.total;

    auto translate = [sum, nf, perms](const std::optional<Permutation>& left_inv,
                                      const std::optional<Permutation>& right,
                                      const BaseMorphism& inner) {
        // copy at s goes to copy at (left_inv ∘ s ∘ right) through `inner`
        std::vector<BaseMorphism> legs;
        for (int r = 0; r < nf; ++r) {
            Permutation target = perms[r];
            if (left_inv)
                target = *left_inv * target;
            if (right)
                target = target * *right;
            legs.push_back(sum.inj[target.lex_rank()] * inner);
        }
        return copair(sum, legs);
    };

    std::vector<BaseMorphism> gen_actions;
    for (const auto& g : gens) {
        require(g.on_object.src() == x && g.on_object.dst() == x, "generator must act on x");
        require(g.input_perm.size() == n, "generator input permutation degree mismatch");
        gen_actions.push_back(translate(g.input_perm.inverse(), std::nullopt, g.on_object));
    }
    CoinvariantsData ci = coinvariants_by(out.big, gen_actions);
    out.proj = ci.proj;
    out.sect = ci.sect;
    out.action.object = ci.object;
    out.action.degree = n;
    BaseMorphism proj = ci.proj, sect = ci.sect;
    BaseMorphism idx = BaseMorphism::identity(x);
    auto tr = translate;
    out.action.act = [tr, proj, sect, idx](const Permutation& p) {
        return proj * tr(std::nullopt, p, idx) * sect;
    };
    return out;
}

}  // namespace opd
