#include "opd/tensor.hpp"

#include <algorithm>

namespace opd {

TensorLayout::TensorLayout(std::vector<BaseObject> factors, std::optional<BaseTag> tag)
    : factors_(std::move(factors))
{
    if (factors_.empty()) {
        require(tag.has_value(), "empty tensor layout needs an explicit base tag");
        tag_ = *tag;
        total_ = BaseObject::unit(tag_);
        return;
    }
    tag_ = factors_[0].tag();
    prefix_.reserve(factors_.size());
    prefix_.push_back(factors_[0]);
    for (size_t i = 1; i < factors_.size(); ++i)
        prefix_.push_back(tensor(prefix_.back(), factors_[i]));
    total_ = prefix_.back();
}

TensorLayout::Elem TensorLayout::decode(int n, int flat) const
{
    const int k = arity();
    Elem e;
    e.degs.assign(k, 0);
    e.idxs.assign(k, 0);
    require(k > 0, "decode on empty layout");
    int deg = n, idx = flat;
    for (int i = k - 1; i >= 1; --i) {
        const BaseObject& pre = prefix_[i - 1];
        const BaseObject& f = factors_[i];
        int m = pre.lo(), rem = idx;
        for (;; ++m) {
            require(m <= pre.hi(), "decode: flat index out of range");
            long long block = (long long)pre.dim_at(m) * f.dim_at(deg - m);
            if (rem < block)
                break;
            rem -= (int)block;
        }
        int fd = f.dim_at(deg - m);
        e.degs[i] = deg - m;
        e.idxs[i] = rem % fd;
        idx = rem / fd;
        deg = m;
    }
    e.degs[0] = deg;
    e.idxs[0] = idx;
    require(idx >= 0 && idx < factors_[0].dim_at(deg), "decode: leading index out of range");
    return e;
}

int TensorLayout::encode(const std::vector<int>& degs, const std::vector<int>& idxs,
                         int* total_deg) const
{
    const int k = arity();
    require((int)degs.size() == k && (int)idxs.size() == k, "encode arity mismatch");
    if (k == 0) {
        if (total_deg)
            *total_deg = 0;
        return 0;
    }
    int deg = degs[0], idx = idxs[0];
    for (int i = 1; i < k; ++i) {
        idx = pair_index(prefix_[i - 1], factors_[i], deg, degs[i], idx, idxs[i]);
        deg += degs[i];
    }
    if (total_deg)
        *total_deg = deg;
    return idx;
}

void TensorLayout::for_each(int n, const std::function<void(const Elem&, int flat)>& fn) const
{
    int d = total_.dim_at(n);
    for (int flat = 0; flat < d; ++flat) {
        Elem e = decode(n, flat);
        fn(e, flat);
    }
}

void TensorLayout::for_each_all(const std::function<void(int, const Elem&, int)>& fn) const
{
    for (int n = total_.lo(); n <= total_.hi(); ++n)
        for_each(n, [&](const Elem& e, int flat) { fn(n, e, flat); });
}

namespace {
/* Koszul sign of reordering: output slot j receives input factor rho(j). */
int koszul_sign(const Permutation& rho, const std::vector<int>& degs)
{
    int sign = 1;
    for (int i = 0; i < rho.size(); ++i)
        for (int j = i + 1; j < rho.size(); ++j)
            if (rho(i) > rho(j) && (degs[rho(i)] % 2) && (degs[rho(j)] % 2))
                sign = -sign;
    return sign;
}
}  // namespace

BaseMorphism TensorLayout::permute(const Permutation& rho) const
{
    require(rho.size() == arity(), "permute arity mismatch");
    std::vector<BaseObject> pf;
    pf.reserve(arity());
    for (int j = 0; j < arity(); ++j)
        pf.push_back(factors_[rho(j)]);
    TensorLayout target(std::move(pf), tag_);
    if (tag_.cat == BaseTag::Cat::FinSet) {
        std::vector<int> table(total_.finset_ob().size);
        for_each(0, [&](const Elem& e, int flat) {
            std::vector<int> idxs(arity());
            for (int j = 0; j < arity(); ++j)
                idxs[j] = e.idxs[rho(j)];
            table[flat] = target.encode(e.degs, idxs);
        });
        return BaseMorphism::finset_map(total_, target.total(), std::move(table));
    }
    FieldSpec fld = tag_.field;
    return BaseMorphism::linear(total_, target.total(), [&, target](int n, int flat) -> SparseCol {
        Elem e = decode(n, flat);
        std::vector<int> degs(arity()), idxs(arity());
        for (int j = 0; j < arity(); ++j) {
            degs[j] = e.degs[rho(j)];
            idxs[j] = e.idxs[rho(j)];
        }
        Scalar s = Scalar::of_int(fld, koszul_sign(rho, e.degs));
        return {{target.encode(degs, idxs), s}};
    });
}

BaseMorphism TensorLayout::promote(int pos, int len, const BaseMorphism& f) const
{
    require(pos >= 0 && len >= 0 && pos + len <= arity(), "promote range out of bounds");
    std::vector<BaseObject> mid(factors_.begin() + pos, factors_.begin() + pos + len);
    TensorLayout mid_layout(mid, tag_);
    require(f.src() == mid_layout.total(), "promote: map source is not the factor range, ",
            f.src().str(), " vs ", mid_layout.total().str());
    std::vector<BaseObject> out_factors(factors_.begin(), factors_.begin() + pos);
    out_factors.push_back(f.dst());
    out_factors.insert(out_factors.end(), factors_.begin() + pos + len, factors_.end());
    TensorLayout target(out_factors, tag_);

    if (tag_.cat == BaseTag::Cat::FinSet) {
        std::vector<int> table(total_.finset_ob().size);
        for_each(0, [&](const Elem& e, int flat) {
            std::vector<int> mdeg(e.degs.begin() + pos, e.degs.begin() + pos + len);
            std::vector<int> midx(e.idxs.begin() + pos, e.idxs.begin() + pos + len);
            int mflat = mid_layout.encode(mdeg, midx);
            int img = f.table()[mflat];
            std::vector<int> degs(e.degs.begin(), e.degs.begin() + pos);
            std::vector<int> idxs(e.idxs.begin(), e.idxs.begin() + pos);
            degs.push_back(0);
            idxs.push_back(img);
            degs.insert(degs.end(), e.degs.begin() + pos + len, e.degs.end());
            idxs.insert(idxs.end(), e.idxs.begin() + pos + len, e.idxs.end());
            table[flat] = target.encode(degs, idxs);
        });
        return BaseMorphism::finset_map(total_, target.total(), std::move(table));
    }
    return BaseMorphism::linear(total_, target.total(), [this, pos, len, f, mid_layout, target](
                                                            int n, int flat) -> SparseCol {
        Elem e = decode(n, flat);
        std::vector<int> mdeg(e.degs.begin() + pos, e.degs.begin() + pos + len);
        std::vector<int> midx(e.idxs.begin() + pos, e.idxs.begin() + pos + len);
        int mdeg_total = 0;
        int mflat = mid_layout.encode(mdeg, midx, &mdeg_total);
        SparseCol out;
        for (const auto& [img, v] : f.image_of(mdeg_total, mflat)) {
            std::vector<int> degs(e.degs.begin(), e.degs.begin() + pos);
            std::vector<int> idxs(e.idxs.begin(), e.idxs.begin() + pos);
            degs.push_back(mdeg_total);
            idxs.push_back(img);
            degs.insert(degs.end(), e.degs.begin() + pos + len, e.degs.end());
            idxs.insert(idxs.end(), e.idxs.begin() + pos + len, e.idxs.end());
            out.push_back({target.encode(degs, idxs), v});
        }
        std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.first < b.first; });
        return out;
    });
}

BaseMorphism TensorLayout::regroup(const std::vector<int>& group_sizes) const
{
    int sum = 0;
    for (int g : group_sizes)
        sum += g;
    require(sum == arity(), "regroup sizes must cover all factors");
    std::vector<TensorLayout> groups;
    std::vector<BaseObject> grouped;
    int off = 0;
    for (int g : group_sizes) {
        std::vector<BaseObject> part(factors_.begin() + off, factors_.begin() + off + g);
        groups.emplace_back(part, tag_);
        grouped.push_back(groups.back().total());
        off += g;
    }
    TensorLayout target(grouped, tag_);
    if (tag_.cat == BaseTag::Cat::FinSet) {
        std::vector<int> table(total_.finset_ob().size);
        for_each(0, [&](const Elem& e, int flat) {
            std::vector<int> degs, idxs;
            int o = 0;
            for (size_t gi = 0; gi < groups.size(); ++gi) {
                int g = group_sizes[gi];
                std::vector<int> gd(e.degs.begin() + o, e.degs.begin() + o + g);
                std::vector<int> gx(e.idxs.begin() + o, e.idxs.begin() + o + g);
                degs.push_back(0);
                idxs.push_back(groups[gi].encode(gd, gx));
                o += g;
            }
            table[flat] = target.encode(degs, idxs);
        });
        return BaseMorphism::finset_map(total_, target.total(), std::move(table));
    }
    return BaseMorphism::linear(
        total_, target.total(), [this, group_sizes, groups, target](int n, int flat) -> SparseCol {
            Elem e = decode(n, flat);
            std::vector<int> degs, idxs;
            int o = 0;
            for (size_t gi = 0; gi < groups.size(); ++gi) {
                int g = group_sizes[gi];
                std::vector<int> gd(e.degs.begin() + o, e.degs.begin() + o + g);
                std::vector<int> gx(e.idxs.begin() + o, e.idxs.begin() + o + g);
                int gdeg = 0;
                int gflat = groups[gi].encode(gd, gx, &gdeg);
                degs.push_back(gdeg);
                idxs.push_back(gflat);
                o += g;
            }
            return {{target.encode(degs, idxs), Scalar::one(tag_.field)}};
        });
}

BaseMorphism TensorLayout::ungroup(const std::vector<int>& group_sizes) const
{
    return regroup(group_sizes).inverse();
}

BaseMorphism hom_tensor_assemble(const std::vector<BaseObject>& srcs,
                                 const std::vector<BaseObject>& dsts)
{
    require(srcs.size() == dsts.size() && !srcs.empty(), "assemble needs matching factor lists");
    const int m = (int)srcs.size();
    BaseTag t = srcs[0].tag();
    std::vector<BaseObject> homs;
    for (int i = 0; i < m; ++i)
        homs.push_back(internal_hom(srcs[i], dsts[i]));
    TensorLayout hl(homs, t);
    TensorLayout sl(srcs, t), dl(dsts, t);
    BaseObject big = internal_hom(sl.total(), dl.total());

    if (t.cat == BaseTag::Cat::FinSet) {
        std::vector<int> table(hl.total().finset_ob().size);
        int total_src = sl.total().finset_ob().size;
        int total_dst = dl.total().finset_ob().size;
        hl.for_each(0, [&](const TensorLayout::Elem& e, int flat) {
            // decode each factor function, build the product function
            std::vector<std::vector<int>> fs(m);
            for (int i = 0; i < m; ++i) {
                int xs = srcs[i].finset_ob().size, ys = dsts[i].finset_ob().size;
                fs[i].resize(xs);
                int idx = e.idxs[i];
                for (int a = xs - 1; a >= 0; --a) {
                    fs[i][a] = idx % ys;
                    idx /= ys;
                }
            }
            std::vector<int> prod(total_src);
            for (int a = 0; a < total_src; ++a) {
                TensorLayout::Elem ae = sl.decode(0, a);
                std::vector<int> outs(m), zero(m, 0);
                for (int i = 0; i < m; ++i)
                    outs[i] = fs[i][ae.idxs[i]];
                prod[a] = dl.encode(zero, outs);
            }
            long long idx = 0;
            for (int a = 0; a < total_src; ++a)
                idx = idx * total_dst + prod[a];
            table[flat] = (int)idx;
        });
        return BaseMorphism::finset_map(hl.total(), big, std::move(table));
    }

    FieldSpec fld = t.field;
    return BaseMorphism::linear(hl.total(), big, [=](int q, int flat) -> SparseCol {
        TensorLayout::Elem e = hl.decode(q, flat);
        // each slot i: hom basis element of degree e.degs[i], decode into (p_i, j_i, i_i)
        std::vector<int> ps(m), js(m), is(m), qs(m);
        for (int i = 0; i < m; ++i) {
            qs[i] = e.degs[i];
            int rem = e.idxs[i], p = srcs[i].lo();
            for (;; ++p) {
                int block = srcs[i].dim_at(p) * dsts[i].dim_at(p + qs[i]);
                if (rem < block)
                    break;
                rem -= block;
            }
            ps[i] = p;
            js[i] = rem / dsts[i].dim_at(p + qs[i]);
            is[i] = rem % dsts[i].dim_at(p + qs[i]);
        }
        // sign: sum over t < s of q_s * p_t
        long long sgn = 0;
        for (int s = 1; s < m; ++s)
            for (int tt = 0; tt < s; ++tt)
                sgn += (long long)(qs[s] % 2) * (ps[tt] % 2);
        Scalar sign = (sgn % 2 == 0) ? Scalar::one(fld) : -Scalar::one(fld);
        std::vector<int> dst_degs(m);
        for (int i = 0; i < m; ++i)
            dst_degs[i] = ps[i] + qs[i];
        int src_deg = 0, dst_deg = 0;
        int jflat = sl.encode(ps, js, &src_deg);
        int iflat = dl.encode(dst_degs, is, &dst_deg);
        int target = hom_index(sl.total(), dl.total(), dst_deg - src_deg, src_deg, jflat, iflat);
        return {{target, sign}};
    });
}

}  // namespace opd
