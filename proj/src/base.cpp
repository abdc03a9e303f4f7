#include "opd/base.hpp"

#include <algorithm>
#include <sstream>

namespace opd {

std::string BaseTag::str() const
{
    switch (cat) {
        case Cat::FinSet: return "finset";
        case Cat::Vec: return "vec/" + field.str();
        default: return "chain/" + field.str();
    }
}

/* --- BaseObject ----------------------------------------------------------- */

BaseObject BaseObject::finset(int size, std::vector<std::string> labels)
{
    return BaseObject(FinSetOb{size, std::move(labels)});
}

BaseObject BaseObject::vec(FieldSpec f, int dim) { return BaseObject(VecOb{f, dim}); }

BaseObject BaseObject::chain(FieldSpec f, int lo, std::vector<int> dims, std::vector<Matrix> diff)
{
    return BaseObject(ChainOb{f, lo, std::move(dims), std::move(diff)});
}

BaseObject BaseObject::unit(const BaseTag& t)
{
    switch (t.cat) {
        case BaseTag::Cat::FinSet: return finset(1);
        case BaseTag::Cat::Vec: return vec(t.field, 1);
        default: return chain(t.field, 0, {1}, {});
    }
}

BaseObject BaseObject::initial(const BaseTag& t)
{
    switch (t.cat) {
        case BaseTag::Cat::FinSet: return finset(0);
        case BaseTag::Cat::Vec: return vec(t.field, 0);
        default: return chain(t.field, 0, {}, {});
    }
}

void BaseObject::validate()
{
    if (is_finset()) {
        auto& x = std::get<FinSetOb>(v_);
        require(x.size >= 0, "negative set size");
        require(x.labels.empty() || (int)x.labels.size() == x.size, "label count mismatch");
        return;
    }
    if (is_vec()) {
        require(std::get<VecOb>(v_).dim >= 0, "negative dimension");
        return;
    }
    auto& c = std::get<ChainOb>(v_);
    require(c.diff.size() == (c.dims.size() > 1 ? c.dims.size() - 1 : 0),
            "differential count mismatch");
    for (size_t i = 0; i < c.diff.size(); ++i) {
        require(c.diff[i].rows() == c.dims[i] && c.diff[i].cols() == c.dims[i + 1],
                "differential shape mismatch at degree ", c.lo + (int)i + 1);
        require(c.diff[i].field() == c.field, "differential field mismatch");
    }
    for (size_t i = 0; i + 1 < c.diff.size(); ++i)
        require((c.diff[i] * c.diff[i + 1]).is_zero(), "d∘d != 0 at degree ", c.lo + (int)i + 2);
    // normalize: trim zero-dimensional extremes
    while (!c.dims.empty() && c.dims.front() == 0) {
        c.dims.erase(c.dims.begin());
        if (!c.diff.empty())
            c.diff.erase(c.diff.begin());
        ++c.lo;
    }
    while (!c.dims.empty() && c.dims.back() == 0) {
        c.dims.pop_back();
        if (!c.diff.empty())
            c.diff.pop_back();
    }
    if (c.dims.empty()) {
        c.lo = 0;
        c.diff.clear();
    }
}

BaseTag BaseObject::tag() const
{
    if (is_finset())
        return BaseTag::finset();
    if (is_vec())
        return BaseTag::vec(vec_ob().field);
    return BaseTag::chain(chain_ob().field);
}

long long BaseObject::total_dim() const
{
    if (is_finset())
        return finset_ob().size;
    if (is_vec())
        return vec_ob().dim;
    long long t = 0;
    for (int d : chain_ob().dims)
        t += d;
    return t;
}

int BaseObject::lo() const { return is_chain() ? chain_ob().lo : 0; }

int BaseObject::hi() const
{
    if (!is_chain())
        return 0;
    const auto& c = chain_ob();
    return c.lo + (int)c.dims.size() - 1;  // empty complex: lo-1
}

int BaseObject::dim_at(int q) const
{
    if (!is_chain())
        return q == 0 ? (int)total_dim() : 0;
    const auto& c = chain_ob();
    if (q < c.lo || q >= c.lo + (int)c.dims.size())
        return 0;
    return c.dims[q - c.lo];
}

Matrix BaseObject::diff_at(int q) const
{
    require(!is_finset(), "differential of a finite set");
    FieldSpec f = is_vec() ? vec_ob().field : chain_ob().field;
    if (is_vec())
        return Matrix::zero(f, q == 1 ? vec_ob().dim : 0, q == 0 ? vec_ob().dim : 0);
    const auto& c = chain_ob();
    int i = q - c.lo - 1;
    if (i >= 0 && i < (int)c.diff.size())
        return c.diff[i];
    return Matrix::zero(f, dim_at(q - 1), dim_at(q));
}

bool BaseObject::operator==(const BaseObject& o) const
{
    if (v_.index() != o.v_.index())
        return false;
    if (is_finset())
        return finset_ob().size == o.finset_ob().size;
    if (is_vec())
        return vec_ob().field == o.vec_ob().field && vec_ob().dim == o.vec_ob().dim;
    const auto& a = chain_ob();
    const auto& b = o.chain_ob();
    return a.field == b.field && a.lo == b.lo && a.dims == b.dims && a.diff == b.diff;
}

std::string BaseObject::str() const
{
    std::ostringstream os;
    if (is_finset())
        os << "finset(" << finset_ob().size << ")";
    else if (is_vec())
        os << "vec(" << vec_ob().dim << ")/" << vec_ob().field.str();
    else {
        const auto& c = chain_ob();
        os << "chain[";
        for (size_t i = 0; i < c.dims.size(); ++i)
            os << (i ? "," : "") << c.dims[i];
        os << "]@" << c.lo << "/" << c.field.str();
    }
    return os.str();
}

/* --- BaseMorphism ---------------------------------------------------------- */

void BaseMorphism::validate()
{
    require(src_.tag() == dst_.tag(), "morphism across different bases: ", src_.tag().str(),
            " vs ", dst_.tag().str());
    if (std::holds_alternative<FinSetMapData>(d_)) {
        const auto& t = std::get<FinSetMapData>(d_).table;
        require((int)t.size() == src_.finset_ob().size, "table size mismatch");
        for (int v : t)
            require(v >= 0 && v < dst_.finset_ob().size, "table value ", v, " out of range");
        return;
    }
    if (std::holds_alternative<VecMapData>(d_)) {
        const auto& m = std::get<VecMapData>(d_).m;
        require(m.rows() == dst_.vec_ob().dim && m.cols() == src_.vec_ob().dim,
                "matrix shape mismatch: ", m.rows(), "x", m.cols(), " for ", src_.str(), " -> ",
                dst_.str());
        return;
    }
    auto& cm = std::get<ChainMapData>(d_);
    const auto& sc = src_.chain_ob();
    cm.lo = sc.lo;
    require(cm.mats.size() == sc.dims.size(), "chain map component count mismatch");
    for (size_t i = 0; i < cm.mats.size(); ++i) {
        int q = sc.lo + (int)i;
        require(cm.mats[i].rows() == dst_.dim_at(q) && cm.mats[i].cols() == sc.dims[i],
                "chain map shape mismatch at degree ", q);
    }
    for (int q = src_.lo(); q <= src_.hi(); ++q) {
        Matrix lhs = dst_.diff_at(q) * mat_at(q);
        Matrix rhs = mat_at(q - 1) * src_.diff_at(q);
        require(lhs == rhs, "not a chain map at degree ", q);
    }
}

BaseMorphism BaseMorphism::finset_map(BaseObject src, BaseObject dst, std::vector<int> table)
{
    BaseMorphism m;
    m.src_ = std::move(src);
    m.dst_ = std::move(dst);
    m.d_ = FinSetMapData{std::move(table)};
    m.validate();
    return m;
}

BaseMorphism BaseMorphism::vec_map(BaseObject src, BaseObject dst, Matrix mat)
{
    BaseMorphism m;
    m.src_ = std::move(src);
    m.dst_ = std::move(dst);
    m.d_ = VecMapData{std::move(mat)};
    m.validate();
    return m;
}

BaseMorphism BaseMorphism::chain_map(BaseObject src, BaseObject dst, std::vector<Matrix> mats)
{
    BaseMorphism m;
    m.src_ = std::move(src);
    m.dst_ = std::move(dst);
    m.d_ = ChainMapData{0, std::move(mats)};
    m.validate();
    return m;
}

BaseMorphism BaseMorphism::identity(const BaseObject& x)
{
    if (x.is_finset()) {
        std::vector<int> t(x.finset_ob().size);
        for (int i = 0; i < (int)t.size(); ++i)
            t[i] = i;
        return finset_map(x, x, std::move(t));
    }
    if (x.is_vec())
        return vec_map(x, x, Matrix::identity(x.vec_ob().field, x.vec_ob().dim));
    std::vector<Matrix> mats;
    for (int q = x.lo(); q <= x.hi(); ++q)
        mats.push_back(Matrix::identity(x.chain_ob().field, x.dim_at(q)));
    return chain_map(x, x, std::move(mats));
}

BaseMorphism BaseMorphism::linear(BaseObject src, BaseObject dst,
                                  const std::function<SparseCol(int, int)>& col)
{
    require(!src.is_finset(), "linear() needs a linear base");
    if (src.is_vec()) {
        FieldSpec f = src.vec_ob().field;
        Matrix m(f, dst.vec_ob().dim, src.vec_ob().dim);
        for (int j = 0; j < src.vec_ob().dim; ++j)
            m.set_col(j, col(0, j));
        return vec_map(std::move(src), std::move(dst), std::move(m));
    }
    FieldSpec f = src.chain_ob().field;
    std::vector<Matrix> mats;
    for (int q = src.lo(); q <= src.hi(); ++q) {
        Matrix m(f, dst.dim_at(q), src.dim_at(q));
        for (int j = 0; j < src.dim_at(q); ++j)
            m.set_col(j, col(q, j));
        mats.push_back(std::move(m));
    }
    return chain_map(std::move(src), std::move(dst), std::move(mats));
}

BaseMorphism BaseMorphism::from_initial(const BaseObject& dst, const BaseTag& t)
{
    BaseObject z = BaseObject::initial(t);
    if (t.cat == BaseTag::Cat::FinSet)
        return finset_map(z, dst, {});
    if (t.cat == BaseTag::Cat::Vec)
        return vec_map(z, dst, Matrix::zero(t.field, dst.vec_ob().dim, 0));
    return chain_map(z, dst, {});
}

Matrix BaseMorphism::mat_at(int q) const
{
    require(!src_.is_finset(), "mat_at on a finite-set map");
    if (src_.is_vec()) {
        if (q == 0)
            return std::get<VecMapData>(d_).m;
        return Matrix::zero(src_.vec_ob().field, dst_.dim_at(q), src_.dim_at(q));
    }
    const auto& cm = std::get<ChainMapData>(d_);
    int i = q - cm.lo;
    if (i >= 0 && i < (int)cm.mats.size())
        return cm.mats[i];
    return Matrix::zero(src_.chain_ob().field, dst_.dim_at(q), src_.dim_at(q));
}

BaseMorphism BaseMorphism::compose(const BaseMorphism& inner) const
{
    require(inner.dst_ == src_, "composition mismatch: ", inner.dst_.str(), " vs ", src_.str());
    if (is_finset()) {
        std::vector<int> t(inner.table().size());
        for (size_t i = 0; i < t.size(); ++i)
            t[i] = table()[inner.table()[i]];
        return finset_map(inner.src_, dst_, std::move(t));
    }
    if (src_.is_vec())
        return vec_map(inner.src_, dst_, matrix() * inner.matrix());
    std::vector<Matrix> mats;
    for (int q = inner.src_.lo(); q <= inner.src_.hi(); ++q)
        mats.push_back(mat_at(q) * inner.mat_at(q));
    return chain_map(inner.src_, dst_, std::move(mats));
}

BaseMorphism BaseMorphism::operator+(const BaseMorphism& o) const
{
    require(src_ == o.src_ && dst_ == o.dst_, "sum of maps with different ends");
    require(!is_finset(), "sum of finite-set maps");
    if (src_.is_vec())
        return vec_map(src_, dst_, matrix() + o.matrix());
    std::vector<Matrix> mats;
    for (int q = src_.lo(); q <= src_.hi(); ++q)
        mats.push_back(mat_at(q) + o.mat_at(q));
    return chain_map(src_, dst_, std::move(mats));
}

BaseMorphism BaseMorphism::operator-(const BaseMorphism& o) const
{
    require(src_ == o.src_ && dst_ == o.dst_, "difference of maps with different ends");
    require(!is_finset(), "difference of finite-set maps");
    if (src_.is_vec())
        return vec_map(src_, dst_, matrix() - o.matrix());
    std::vector<Matrix> mats;
    for (int q = src_.lo(); q <= src_.hi(); ++q)
        mats.push_back(mat_at(q) - o.mat_at(q));
    return chain_map(src_, dst_, std::move(mats));
}

bool BaseMorphism::operator==(const BaseMorphism& o) const
{
    if (!(src_ == o.src_) || !(dst_ == o.dst_))
        return false;
    if (is_finset())
        return table() == o.table();
    if (src_.is_vec())
        return matrix() == o.matrix();
    for (int q = src_.lo(); q <= src_.hi(); ++q)
        if (!(mat_at(q) == o.mat_at(q)))
            return false;
    return true;
}

bool BaseMorphism::is_iso() const
{
    if (is_finset()) {
        if (src_.finset_ob().size != dst_.finset_ob().size)
            return false;
        std::vector<char> seen(dst_.finset_ob().size, 0);
        for (int v : table()) {
            if (seen[v])
                return false;
            seen[v] = 1;
        }
        return true;
    }
    for (int q = std::min(src_.lo(), dst_.lo()); q <= std::max(src_.hi(), dst_.hi()); ++q) {
        if (src_.dim_at(q) != dst_.dim_at(q))
            return false;
        if (mat_at(q).rank() != src_.dim_at(q))
            return false;
    }
    return true;
}

BaseMorphism BaseMorphism::inverse() const
{
    require(is_iso(), "not an isomorphism");
    if (is_finset()) {
        std::vector<int> t(dst_.finset_ob().size);
        for (int i = 0; i < (int)table().size(); ++i)
            t[table()[i]] = i;
        return finset_map(dst_, src_, std::move(t));
    }
    if (src_.is_vec())
        return vec_map(dst_, src_, matrix().inverse_of_square());
    std::vector<Matrix> mats;
    for (int q = dst_.lo(); q <= dst_.hi(); ++q)
        mats.push_back(mat_at(q).inverse_of_square());
    return chain_map(dst_, src_, std::move(mats));
}

bool BaseMorphism::is_surjective() const
{
    if (is_finset()) {
        std::vector<char> seen(dst_.finset_ob().size, 0);
        for (int v : table())
            seen[v] = 1;
        for (char c : seen)
            if (!c)
                return false;
        return true;
    }
    for (int q = dst_.lo(); q <= dst_.hi(); ++q)
        if (mat_at(q).rank() != dst_.dim_at(q))
            return false;
    return true;
}

SparseCol BaseMorphism::image_of(int q, int j) const
{
    if (is_finset())
        return {{table()[j], Scalar::one(FieldSpec::rationals())}};
    return mat_at(q).col(j);
}

std::string BaseMorphism::str() const
{
    std::ostringstream os;
    os << src_.str() << " -> " << dst_.str() << " ";
    if (is_finset()) {
        os << "[";
        for (size_t i = 0; i < table().size(); ++i)
            os << (i ? "," : "") << table()[i];
        os << "]";
    }
    else if (src_.is_vec())
        os << matrix().str();
    else {
        for (int q = src_.lo(); q <= src_.hi(); ++q)
            os << "@" << q << ":" << mat_at(q).str() << " ";
    }
    return os.str();
}

/* --- tensor ----------------------------------------------------------------- */

int pair_index(const BaseObject& x, const BaseObject& y, int p, int q, int a, int b)
{
    int n = p + q;
    int off = 0;
    for (int pp = x.lo(); pp < p; ++pp)
        off += x.dim_at(pp) * y.dim_at(n - pp);
    return off + a * y.dim_at(q) + b;
}

BaseObject tensor(const BaseObject& x, const BaseObject& y)
{
    require(x.tag() == y.tag(), "tensor across bases: ", x.tag().str(), " vs ", y.tag().str());
    if (x.is_finset()) {
        long long s = (long long)x.finset_ob().size * y.finset_ob().size;
        require(s <= (1 << 28), "finite set too large: ", s);
        return BaseObject::finset((int)s);
    }
    if (x.is_vec())
        return BaseObject::vec(x.vec_ob().field, x.vec_ob().dim * y.vec_ob().dim);
    const FieldSpec f = x.chain_ob().field;
    if (x.is_initial() || y.is_initial())
        return BaseObject::initial(BaseTag::chain(f));
    int lo = x.lo() + y.lo(), hi = x.hi() + y.hi();
    std::vector<int> dims(hi - lo + 1, 0);
    for (int n = lo; n <= hi; ++n)
        for (int p = x.lo(); p <= x.hi(); ++p)
            dims[n - lo] += x.dim_at(p) * y.dim_at(n - p);
    std::vector<Matrix> diff;
    for (int n = lo + 1; n <= hi; ++n) {
        Matrix d(f, dims[n - 1 - lo], dims[n - lo]);
        for (int p = x.lo(); p <= x.hi(); ++p) {
            int q = n - p;
            if (x.dim_at(p) == 0 || y.dim_at(q) == 0)
                continue;
            Matrix dx = x.diff_at(p), dy = y.diff_at(q);
            Scalar sign = (p % 2 == 0) ? Scalar::one(f) : -Scalar::one(f);
            for (int a = 0; a < x.dim_at(p); ++a)
                for (int b = 0; b < y.dim_at(q); ++b) {
                    int col = pair_index(x, y, p, q, a, b);
                    for (const auto& [r, v] : dx.col(a))
                        d.add_to(pair_index(x, y, p - 1, q, r, b), col, v);
                    for (const auto& [r, v] : dy.col(b))
                        d.add_to(pair_index(x, y, p, q - 1, a, r), col, sign * v);
                }
        }
        diff.push_back(std::move(d));
    }
    return BaseObject::chain(f, lo, std::move(dims), std::move(diff));
}

BaseMorphism tensor(const BaseMorphism& f, const BaseMorphism& g)
{
    BaseObject src = tensor(f.src(), g.src());
    BaseObject dst = tensor(f.dst(), g.dst());
    if (f.src().is_finset()) {
        int gy = g.src().finset_ob().size;
        int gdy = g.dst().finset_ob().size;
        std::vector<int> t(src.finset_ob().size);
        for (int a = 0; a < f.src().finset_ob().size; ++a)
            for (int b = 0; b < gy; ++b)
                t[a * gy + b] = f.table()[a] * gdy + g.table()[b];
        return BaseMorphism::finset_map(std::move(src), std::move(dst), std::move(t));
    }
    if (f.src().is_vec())
        return BaseMorphism::vec_map(std::move(src), std::move(dst),
                                     f.matrix().kron(g.matrix()));
    // chain: degree-0 maps carry no Koszul sign
    FieldSpec fld = src.chain_ob().field;
    std::vector<Matrix> mats;
    for (int n = src.lo(); n <= src.hi(); ++n) {
        Matrix m(fld, dst.dim_at(n), src.dim_at(n));
        for (int p = f.src().lo(); p <= f.src().hi(); ++p) {
            int q = n - p;
            for (int a = 0; a < f.src().dim_at(p); ++a) {
                auto fa = f.mat_at(p).col(a);
                if (fa.empty())
                    continue;
                for (int b = 0; b < g.src().dim_at(q); ++b) {
                    auto gb = g.mat_at(q).col(b);
                    if (gb.empty())
                        continue;
                    int col = pair_index(f.src(), g.src(), p, q, a, b);
                    for (const auto& [r1, v1] : fa)
                        for (const auto& [r2, v2] : gb)
                            m.add_to(pair_index(f.dst(), g.dst(), p, q, r1, r2), col, v1 * v2);
                }
            }
        }
        mats.push_back(std::move(m));
    }
    return BaseMorphism::chain_map(std::move(src), std::move(dst), std::move(mats));
}

BaseMorphism unit_left(const BaseObject& x)
{
    BaseObject src = tensor(BaseObject::unit(x.tag()), x);
    // flat index of (unit, b) equals b in every base
    if (x.is_finset()) {
        std::vector<int> t(x.finset_ob().size);
        for (int i = 0; i < (int)t.size(); ++i)
            t[i] = i;
        return BaseMorphism::finset_map(std::move(src), x, std::move(t));
    }
    return BaseMorphism::linear(std::move(src), x, [&](int, int j) -> SparseCol {
        return {{j, Scalar::one(x.tag().field)}};
    });
}

BaseMorphism unit_right(const BaseObject& x)
{
    BaseObject src = tensor(x, BaseObject::unit(x.tag()));
    if (x.is_finset()) {
        std::vector<int> t(x.finset_ob().size);
        for (int i = 0; i < (int)t.size(); ++i)
            t[i] = i;
        return BaseMorphism::finset_map(std::move(src), x, std::move(t));
    }
    return BaseMorphism::linear(std::move(src), x, [&](int, int j) -> SparseCol {
        return {{j, Scalar::one(x.tag().field)}};
    });
}

BaseMorphism symmetry(const BaseObject& x, const BaseObject& y)
{
    BaseObject src = tensor(x, y);
    BaseObject dst = tensor(y, x);
    if (x.is_finset()) {
        int ny = y.finset_ob().size, nx = x.finset_ob().size;
        std::vector<int> t(src.finset_ob().size);
        for (int a = 0; a < nx; ++a)
            for (int b = 0; b < ny; ++b)
                t[a * ny + b] = b * nx + a;
        return BaseMorphism::finset_map(std::move(src), std::move(dst), std::move(t));
    }
    FieldSpec f = x.tag().field;
    if (x.is_vec()) {
        Matrix m(f, dst.vec_ob().dim, src.vec_ob().dim);
        int ny = y.vec_ob().dim, nx = x.vec_ob().dim;
        for (int a = 0; a < nx; ++a)
            for (int b = 0; b < ny; ++b)
                m.set(b * nx + a, a * ny + b, Scalar::one(f));
        return BaseMorphism::vec_map(std::move(src), std::move(dst), std::move(m));
    }
    std::vector<Matrix> mats;
    for (int n = src.lo(); n <= src.hi(); ++n) {
        Matrix m(f, dst.dim_at(n), src.dim_at(n));
        for (int p = x.lo(); p <= x.hi(); ++p) {
            int q = n - p;
            Scalar sign = (p * q) % 2 == 0 ? Scalar::one(f) : -Scalar::one(f);
            for (int a = 0; a < x.dim_at(p); ++a)
                for (int b = 0; b < y.dim_at(q); ++b)
                    m.set(pair_index(y, x, q, p, b, a), pair_index(x, y, p, q, a, b), sign);
        }
        mats.push_back(std::move(m));
    }
    return BaseMorphism::chain_map(std::move(src), std::move(dst), std::move(mats));
}

/* --- internal hom ------------------------------------------------------------ */

namespace {
long long ipow(long long b, int e)
{
    long long r = 1;
    for (int i = 0; i < e; ++i) {
        r *= b;
        require(r <= (1 << 28), "function set too large");
    }
    return r;
}

/* FinSet function encoding: index = sum f(i) * |y|^{|x|-1-i}. */
int encode_fun(const std::vector<int>& f, int ysize)
{
    long long idx = 0;
    for (int v : f)
        idx = idx * ysize + v;
    return (int)idx;
}

std::vector<int> decode_fun(int idx, int xsize, int ysize)
{
    std::vector<int> f(xsize);
    for (int i = xsize - 1; i >= 0; --i) {
        f[i] = idx % ysize;
        idx /= ysize;
    }
    return f;
}
}  // namespace

BaseObject internal_hom(const BaseObject& x, const BaseObject& y)
{
    require(x.tag() == y.tag(), "hom across bases");
    if (x.is_finset())
        return BaseObject::finset((int)ipow(y.finset_ob().size, x.finset_ob().size));
    if (x.is_vec())
        return BaseObject::vec(x.vec_ob().field, x.vec_ob().dim * y.vec_ob().dim);
    FieldSpec f = x.chain_ob().field;
    if (x.is_initial())
        return BaseObject::initial(BaseTag::chain(f));
    if (y.is_initial())
        return BaseObject::initial(BaseTag::chain(f));
    int lo = y.lo() - x.hi(), hi = y.hi() - x.lo();
    std::vector<int> dims(hi - lo + 1, 0);
    for (int q = lo; q <= hi; ++q)
        for (int p = x.lo(); p <= x.hi(); ++p)
            dims[q - lo] += x.dim_at(p) * y.dim_at(p + q);
    std::vector<Matrix> diff;
    for (int q = lo + 1; q <= hi; ++q) {
        // d : Hom_q -> Hom_{q-1}, f -> d∘f - (-1)^q f∘d
        Matrix d(f, dims[q - 1 - lo], dims[q - lo]);
        Scalar sign = (q % 2 == 0) ? -Scalar::one(f) : Scalar::one(f);  // -(-1)^q
        for (int p = x.lo(); p <= x.hi(); ++p) {
            int yd = y.dim_at(p + q);
            if (x.dim_at(p) == 0 || yd == 0)
                continue;
            Matrix dy = y.diff_at(p + q);
            Matrix dx = x.diff_at(p + 1);
            for (int j = 0; j < x.dim_at(p); ++j)
                for (int i = 0; i < yd; ++i) {
                    int col;
                    {
                        int off = 0;
                        for (int pp = x.lo(); pp < p; ++pp)
                            off += x.dim_at(pp) * y.dim_at(pp + q);
                        col = off + j * yd + i;
                    }
                    for (const auto& [r, v] : dy.col(i)) {
                        int off = 0;
                        for (int pp = x.lo(); pp < p; ++pp)
                            off += x.dim_at(pp) * y.dim_at(pp + q - 1);
                        d.add_to(off + j * y.dim_at(p + q - 1) + r, col, v);
                    }
                    // -(-1)^q f∘d : component at block p+1
                    for (int s = 0; s < x.dim_at(p + 1); ++s) {
                        Scalar c = dx.at(j, s);
                        if (c.is_zero())
                            continue;
                        int off = 0;
                        for (int pp = x.lo(); pp < p + 1; ++pp)
                            off += x.dim_at(pp) * y.dim_at(pp + q - 1);
                        d.add_to(off + s * y.dim_at(p + q) + i, col, sign * c);
                    }
                }
        }
        diff.push_back(std::move(d));
    }
    return BaseObject::chain(f, lo, std::move(dims), std::move(diff));
}

int hom_index(const BaseObject& x, const BaseObject& y, int q, int p, int j, int i)
{
    require(!x.is_finset(), "hom_index is for linear bases; finite sets encode whole functions");
    if (!x.is_chain())
        return j * (int)y.total_dim() + i;
    int off = 0;
    for (int pp = x.lo(); pp < p; ++pp)
        off += x.dim_at(pp) * y.dim_at(pp + q);
    return off + j * y.dim_at(p + q) + i;
}

namespace {
int chain_hom_index(const BaseObject& x, const BaseObject& y, int q, int p, int j, int i)
{
    return hom_index(x, y, q, p, j, i);
}
}  // namespace

BaseMorphism eval_morphism(const BaseObject& x, const BaseObject& y)
{
    BaseObject h = internal_hom(x, y);
    BaseObject src = tensor(x, h);
    if (x.is_finset()) {
        int xs = x.finset_ob().size, ys = y.finset_ob().size, hs = h.finset_ob().size;
        std::vector<int> t((size_t)xs * hs);
        for (int a = 0; a < xs; ++a)
            for (int fi = 0; fi < hs; ++fi)
                t[a * hs + fi] = decode_fun(fi, xs, ys)[a];
        return BaseMorphism::finset_map(std::move(src), y, std::move(t));
    }
    FieldSpec fld = x.tag().field;
    if (x.is_vec()) {
        int xs = x.vec_ob().dim, ys = y.vec_ob().dim;
        Matrix m(fld, ys, xs * xs * ys);
        for (int a = 0; a < xs; ++a)
            for (int j = 0; j < xs; ++j)
                for (int i = 0; i < ys; ++i)
                    if (a == j)
                        m.set(i, a * (xs * ys) + j * ys + i, Scalar::one(fld));
        return BaseMorphism::vec_map(std::move(src), y, std::move(m));
    }
    std::vector<Matrix> mats;
    for (int n = src.lo(); n <= src.hi(); ++n) {
        Matrix m(fld, y.dim_at(n), src.dim_at(n));
        for (int p = x.lo(); p <= x.hi(); ++p) {
            int q = n - p;  // hom degree
            if (x.dim_at(p) == 0 || h.dim_at(q) == 0)
                continue;
            Scalar sign = (p * q) % 2 == 0 ? Scalar::one(fld) : -Scalar::one(fld);
            for (int a = 0; a < x.dim_at(p); ++a)
                for (int i = 0; i < y.dim_at(p + q); ++i) {
                    int hidx = chain_hom_index(x, y, q, p, a, i);
                    m.set(i, pair_index(x, h, p, q, a, hidx), sign);
                }
        }
        mats.push_back(std::move(m));
    }
    return BaseMorphism::chain_map(std::move(src), y, std::move(mats));
}

BaseMorphism transpose_hom(const BaseMorphism& g, const BaseObject& z, const BaseObject& x,
                           const BaseObject& y)
{
    require(g.src() == tensor(z, x), "transpose: source is not z⊗x");
    require(g.dst() == y, "transpose: target mismatch");
    BaseObject h = internal_hom(x, y);
    if (z.is_finset()) {
        int xs = x.finset_ob().size, ys = y.finset_ob().size;
        std::vector<int> t(z.finset_ob().size);
        for (int c = 0; c < z.finset_ob().size; ++c) {
            std::vector<int> f(xs);
            for (int a = 0; a < xs; ++a)
                f[a] = g.table()[c * xs + a];
            t[c] = encode_fun(f, ys);
        }
        return BaseMorphism::finset_map(z, std::move(h), std::move(t));
    }
    return BaseMorphism::linear(z, h, [&](int r, int c) -> SparseCol {
        SparseCol out;
        for (int p = x.lo(); p <= x.hi(); ++p) {
            Matrix gm = g.mat_at(r + p);
            for (int a = 0; a < x.dim_at(p); ++a) {
                int src_idx = pair_index(z, x, r, p, c, a);
                for (const auto& [i, v] : gm.col(src_idx))
                    out.push_back({chain_hom_index(x, y, r, p, a, i), v});
            }
        }
        std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.first < b.first; });
        return out;
    });
}

BaseMorphism untranspose_hom(const BaseMorphism& h, const BaseObject& z, const BaseObject& x,
                             const BaseObject& y)
{
    require(h.src() == z && h.dst() == internal_hom(x, y), "untranspose: bad shape");
    BaseObject src = tensor(z, x);
    if (z.is_finset()) {
        int xs = x.finset_ob().size, ys = y.finset_ob().size;
        std::vector<int> t(src.finset_ob().size);
        for (int c = 0; c < z.finset_ob().size; ++c) {
            auto f = decode_fun(h.table()[c], xs, ys);
            for (int a = 0; a < xs; ++a)
                t[c * xs + a] = f[a];
        }
        return BaseMorphism::finset_map(std::move(src), y, std::move(t));
    }
    FieldSpec fld = z.tag().field;
    std::vector<Matrix> mats;
    if (src.is_vec()) {
        int xs = x.vec_ob().dim, ys = y.vec_ob().dim;
        Matrix m(fld, ys, src.vec_ob().dim);
        for (int c = 0; c < z.vec_ob().dim; ++c)
            for (const auto& [hij, v] : h.matrix().col(c)) {
                int j = hij / ys, i = hij % ys;
                m.add_to(i, c * xs + j, v);
            }
        return BaseMorphism::vec_map(std::move(src), y, std::move(m));
    }
    for (int n = src.lo(); n <= src.hi(); ++n) {
        Matrix m(fld, y.dim_at(n), src.dim_at(n));
        for (int r = z.lo(); r <= z.hi(); ++r) {
            int p = n - r;
            if (z.dim_at(r) == 0 || x.dim_at(p) == 0)
                continue;
            Matrix hm = h.mat_at(r);
            for (int c = 0; c < z.dim_at(r); ++c)
                for (const auto& [hidx, v] : hm.col(c)) {
                    // decode hom basis element of degree r: find block p', j, i
                    int rem = hidx;
                    int pp = x.lo();
                    for (;; ++pp) {
                        int block = x.dim_at(pp) * y.dim_at(pp + r);
                        if (rem < block)
                            break;
                        rem -= block;
                    }
                    if (pp != p)
                        continue;
                    int j = rem / y.dim_at(p + r), i = rem % y.dim_at(p + r);
                    for (int a = 0; a < x.dim_at(p); ++a)
                        if (a == j)
                            m.add_to(i, pair_index(z, x, r, p, c, a), v);
                }
        }
        mats.push_back(std::move(m));
    }
    return BaseMorphism::chain_map(std::move(src), y, std::move(mats));
}

BaseMorphism hom_functorial(const BaseMorphism& pre, const BaseMorphism& post)
{
    const BaseObject &xp = pre.src(), &x = pre.dst(), &y = post.src(), &yp = post.dst();
    BaseObject hsrc = internal_hom(x, y);
    BaseObject hdst = internal_hom(xp, yp);
    if (x.is_finset()) {
        int xs = x.finset_ob().size, ys = y.finset_ob().size;
        int xps = xp.finset_ob().size, yps = yp.finset_ob().size;
        std::vector<int> t(hsrc.finset_ob().size);
        for (int fi = 0; fi < hsrc.finset_ob().size; ++fi) {
            auto f = decode_fun(fi, xs, ys);
            std::vector<int> g(xps);
            for (int s = 0; s < xps; ++s)
                g[s] = post.table()[f[pre.table()[s]]];
            t[fi] = encode_fun(g, yps);
        }
        return BaseMorphism::finset_map(std::move(hsrc), std::move(hdst), std::move(t));
    }
    if (x.is_vec()) {
        FieldSpec fld = x.tag().field;
        int ys = y.vec_ob().dim, yps = yp.vec_ob().dim;
        Matrix m(fld, hdst.vec_ob().dim, hsrc.vec_ob().dim);
        for (int j = 0; j < x.vec_ob().dim; ++j)
            for (int i = 0; i < ys; ++i) {
                int col = j * ys + i;
                for (int s = 0; s < xp.vec_ob().dim; ++s) {
                    Scalar a = pre.matrix().at(j, s);
                    if (a.is_zero())
                        continue;
                    for (const auto& [r, b] : post.matrix().col(i))
                        m.add_to(s * yps + r, col, a * b);
                }
            }
        return BaseMorphism::vec_map(std::move(hsrc), std::move(hdst), std::move(m));
    }
    return BaseMorphism::linear(hsrc, hdst, [&, hsrc, hdst](int q, int cidx) -> SparseCol {
        // decode (p, j, i) from cidx at degree q
        int rem = cidx, p = x.lo();
        for (;; ++p) {
            int block = x.dim_at(p) * y.dim_at(p + q);
            if (rem < block)
                break;
            rem -= block;
        }
        int j = rem / y.dim_at(p + q), i = rem % y.dim_at(p + q);
        SparseCol out;
        Matrix prem = pre.mat_at(p);
        Matrix postm = post.mat_at(p + q);
        for (int s = 0; s < xp.dim_at(p); ++s) {
            Scalar a = prem.at(j, s);
            if (a.is_zero())
                continue;
            for (const auto& [r, b] : postm.col(i))
                out.push_back({chain_hom_index(xp, yp, q, p, s, r), a * b});
        }
        std::sort(out.begin(), out.end(), [](auto& l, auto& r) { return l.first < r.first; });
        return out;
    });
}

BaseMorphism hom_compose(const BaseObject& a, const BaseObject& b, const BaseObject& c)
{
    BaseObject hbc = internal_hom(b, c), hab = internal_hom(a, b), hac = internal_hom(a, c);
    BaseObject src = tensor(hbc, hab);
    if (a.is_finset()) {
        int as = a.finset_ob().size, bs = b.finset_ob().size, cs = c.finset_ob().size;
        std::vector<int> t(src.finset_ob().size);
        int nab = hab.finset_ob().size;
        for (int gi = 0; gi < hbc.finset_ob().size; ++gi) {
            auto g = decode_fun(gi, bs, cs);
            for (int fi = 0; fi < nab; ++fi) {
                auto f = decode_fun(fi, as, bs);
                std::vector<int> gf(as);
                for (int s = 0; s < as; ++s)
                    gf[s] = g[f[s]];
                t[gi * nab + fi] = encode_fun(gf, cs);
            }
        }
        return BaseMorphism::finset_map(std::move(src), std::move(hac), std::move(t));
    }
    FieldSpec fld = a.tag().field;
    if (a.is_vec()) {
        int as = a.vec_ob().dim, bs = b.vec_ob().dim, cs = c.vec_ob().dim;
        Matrix m(fld, hac.vec_ob().dim, src.vec_ob().dim);
        int nab = hab.vec_ob().dim;
        for (int j1 = 0; j1 < bs; ++j1)
            for (int i1 = 0; i1 < cs; ++i1)
                for (int j2 = 0; j2 < as; ++j2)
                    for (int i2 = 0; i2 < bs; ++i2)
                        if (j1 == i2)
                            m.set(j2 * cs + i1, (j1 * cs + i1) * nab + (j2 * bs + i2),
                                  Scalar::one(fld));
        return BaseMorphism::vec_map(std::move(src), std::move(hac), std::move(m));
    }
    std::vector<Matrix> mats;
    for (int n = src.lo(); n <= src.hi(); ++n) {
        Matrix m(fld, hac.dim_at(n), src.dim_at(n));
        for (int q1 = hbc.lo(); q1 <= hbc.hi(); ++q1) {
            int q2 = n - q1;
            if (hbc.dim_at(q1) == 0 || hab.dim_at(q2) == 0)
                continue;
            // enumerate blocks of each hom factor
            for (int p1 = b.lo(); p1 <= b.hi(); ++p1)
                for (int j1 = 0; j1 < b.dim_at(p1); ++j1)
                    for (int i1 = 0; i1 < c.dim_at(p1 + q1); ++i1) {
                        int g_idx = chain_hom_index(b, c, q1, p1, j1, i1);
                        for (int p2 = a.lo(); p2 <= a.hi(); ++p2) {
                            if (p2 + q2 != p1)
                                continue;
                            for (int j2 = 0; j2 < a.dim_at(p2); ++j2) {
                                int f_idx = chain_hom_index(a, b, q2, p2, j2, j1);
                                int col = pair_index(hbc, hab, q1, q2, g_idx, f_idx);
                                m.add_to(chain_hom_index(a, c, q1 + q2, p2, j2, i1), col,
                                         Scalar::one(fld));
                            }
                        }
                    }
        }
        mats.push_back(std::move(m));
    }
    return BaseMorphism::chain_map(std::move(src), std::move(hac), std::move(mats));
}

BaseMorphism hom_from_unit(const BaseObject& x)
{
    BaseObject h = internal_hom(BaseObject::unit(x.tag()), x);
    if (x.is_finset()) {
        std::vector<int> t(x.finset_ob().size);
        for (int i = 0; i < (int)t.size(); ++i)
            t[i] = i;
        return BaseMorphism::finset_map(x, std::move(h), std::move(t));
    }
    return BaseMorphism::linear(x, h, [&](int, int j) -> SparseCol {
        return {{j, Scalar::one(x.tag().field)}};
    });
}

BaseMorphism hom_from_unit_inv(const BaseObject& x) { return hom_from_unit(x).inverse(); }

/* --- sums ------------------------------------------------------------------- */

SumData coproduct(const std::vector<BaseObject>& parts)
{
    require(!parts.empty(), "empty coproduct needs a base tag; use BaseObject::initial");
    BaseTag t = parts[0].tag();
    for (const auto& p : parts)
        require(p.tag() == t, "coproduct across bases");
    SumData out;
    if (t.cat == BaseTag::Cat::FinSet) {
        int total = 0;
        for (const auto& p : parts)
            total += p.finset_ob().size;
        out.total = BaseObject::finset(total);
        int off = 0;
        for (const auto& p : parts) {
            std::vector<int> tab(p.finset_ob().size);
            for (int i = 0; i < (int)tab.size(); ++i)
                tab[i] = off + i;
            out.inj.push_back(BaseMorphism::finset_map(p, out.total, std::move(tab)));
            off += p.finset_ob().size;
        }
        return out;
    }
    if (t.cat == BaseTag::Cat::Vec) {
        int total = 0;
        for (const auto& p : parts)
            total += p.vec_ob().dim;
        out.total = BaseObject::vec(t.field, total);
        int off = 0;
        for (const auto& p : parts) {
            int d = p.vec_ob().dim;
            Matrix inj(t.field, total, d), proj(t.field, d, total);
            for (int i = 0; i < d; ++i) {
                inj.set(off + i, i, Scalar::one(t.field));
                proj.set(i, off + i, Scalar::one(t.field));
            }
            out.inj.push_back(BaseMorphism::vec_map(p, out.total, std::move(inj)));
            out.proj.push_back(BaseMorphism::vec_map(out.total, p, std::move(proj)));
            off += d;
        }
        return out;
    }
    // chain: degreewise
    int lo = 0, hi = -1;
    bool any = false;
    for (const auto& p : parts)
        if (!p.is_initial()) {
            if (!any) {
                lo = p.lo();
                hi = p.hi();
                any = true;
            }
            else {
                lo = std::min(lo, p.lo());
                hi = std::max(hi, p.hi());
            }
        }
    if (!any) {
        out.total = BaseObject::initial(t);
        for (const auto& p : parts) {
            out.inj.push_back(BaseMorphism::chain_map(p, out.total, {}));
            out.proj.push_back(BaseMorphism::chain_map(out.total, p, {}));
        }
        return out;
    }
    std::vector<int> dims(hi - lo + 1, 0);
    for (const auto& p : parts)
        for (int q = lo; q <= hi; ++q)
            dims[q - lo] += p.dim_at(q);
    std::vector<Matrix> diff;
    for (int q = lo + 1; q <= hi; ++q) {
        Matrix d(t.field, dims[q - 1 - lo], dims[q - lo]);
        int roff = 0, coff = 0;
        for (const auto& p : parts) {
            Matrix dq = p.diff_at(q);
            for (int j = 0; j < dq.cols(); ++j)
                for (const auto& [r, v] : dq.col(j))
                    d.set(roff + r, coff + j, v);
            roff += p.dim_at(q - 1);
            coff += p.dim_at(q);
        }
        diff.push_back(std::move(d));
    }
    out.total = BaseObject::chain(t.field, lo, std::move(dims), std::move(diff));
    // injections/projections per degree
    std::vector<int> offs(parts.size(), 0);
    for (const auto& pobj : parts) {
        size_t pi = &pobj - &parts[0];
        std::vector<Matrix> imats, pmats;
        for (int q = pobj.lo(); q <= pobj.hi(); ++q) {
            int off = 0;
            for (size_t k = 0; k < pi; ++k)
                off += parts[k].dim_at(q);
            Matrix inj(t.field, out.total.dim_at(q), pobj.dim_at(q));
            for (int i = 0; i < pobj.dim_at(q); ++i)
                inj.set(off + i, i, Scalar::one(t.field));
            imats.push_back(std::move(inj));
        }
        for (int q = out.total.lo(); q <= out.total.hi(); ++q) {
            int off = 0;
            for (size_t k = 0; k < pi; ++k)
                off += parts[k].dim_at(q);
            Matrix proj(t.field, pobj.dim_at(q), out.total.dim_at(q));
            for (int i = 0; i < pobj.dim_at(q); ++i)
                proj.set(i, off + i, Scalar::one(t.field));
            pmats.push_back(std::move(proj));
        }
        out.inj.push_back(BaseMorphism::chain_map(pobj, out.total, std::move(imats)));
        out.proj.push_back(BaseMorphism::chain_map(out.total, pobj, std::move(pmats)));
    }
    (void)offs;
    return out;
}

BaseMorphism copair(const SumData& sum, const std::vector<BaseMorphism>& legs)
{
    require(legs.size() == sum.inj.size(), "copair leg count mismatch");
    require(!legs.empty(), "copair needs at least one leg");
    const BaseObject& dst = legs[0].dst();
    if (sum.total.is_finset()) {
        std::vector<int> t;
        for (const auto& l : legs)
            t.insert(t.end(), l.table().begin(), l.table().end());
        return BaseMorphism::finset_map(sum.total, dst, std::move(t));
    }
    // linear: sum over legs of leg ∘ proj
    BaseMorphism acc = legs[0] * sum.proj[0];
    for (size_t i = 1; i < legs.size(); ++i)
        acc = acc + legs[i] * sum.proj[i];
    return acc;
}

/* --- pullback ----------------------------------------------------------------- */

PullbackData pullback(const BaseMorphism& f, const BaseMorphism& g)
{
    require(f.dst() == g.dst(), "pullback: targets differ");
    const BaseObject &X = f.src(), &Y = g.src();
    PullbackData out;
    if (X.is_finset()) {
        std::vector<int> t1, t2;
        std::map<std::pair<int, int>, int> where;
        for (int a = 0; a < X.finset_ob().size; ++a)
            for (int b = 0; b < Y.finset_ob().size; ++b)
                if (f.table()[a] == g.table()[b]) {
                    where[{a, b}] = (int)t1.size();
                    t1.push_back(a);
                    t2.push_back(b);
                }
        out.obj = BaseObject::finset((int)t1.size());
        out.pr1 = BaseMorphism::finset_map(out.obj, X, t1);
        out.pr2 = BaseMorphism::finset_map(out.obj, Y, t2);
        BaseObject P = out.obj;
        out.mediate = [P, X, Y, where](const BaseMorphism& h1,
                                       const BaseMorphism& h2) -> BaseMorphism {
            require(h1.src() == h2.src(), "mediate: sources differ");
            std::vector<int> t(h1.src().finset_ob().size);
            for (size_t w = 0; w < t.size(); ++w) {
                auto it = where.find({h1.table()[w], h2.table()[w]});
                require(it != where.end(), "mediate: cone does not commute");
                t[w] = it->second;
            }
            return BaseMorphism::finset_map(h1.src(), P, std::move(t));
        };
        return out;
    }
    FieldSpec fld = X.tag().field;
    // degreewise kernel of [f, -g] : X ⊕ Y -> Z
    int lo = std::min(X.lo(), Y.lo()), hi = std::max(X.hi(), Y.hi());
    std::vector<Matrix> kerq;  // kernel basis per degree, rows = dimX+dimY
    std::vector<int> dims;
    for (int q = lo; q <= hi; ++q) {
        Matrix m = f.mat_at(q).hcat(-g.mat_at(q));
        Matrix k = m.kernel();
        dims.push_back(k.cols());
        kerq.push_back(std::move(k));
    }
    if (X.is_vec()) {
        out.obj = BaseObject::vec(fld, dims[0]);
        Matrix k = kerq[0];
        Matrix p1(fld, X.dim_at(0), k.cols()), p2(fld, Y.dim_at(0), k.cols());
        for (int j = 0; j < k.cols(); ++j)
            for (const auto& [r, v] : k.col(j)) {
                if (r < X.dim_at(0))
                    p1.set(r, j, v);
                else
                    p2.set(r - X.dim_at(0), j, v);
            }
        out.pr1 = BaseMorphism::vec_map(out.obj, X, std::move(p1));
        out.pr2 = BaseMorphism::vec_map(out.obj, Y, std::move(p2));
        BaseObject P = out.obj;
        out.mediate = [P, k, fld](const BaseMorphism& h1, const BaseMorphism& h2) -> BaseMorphism {
            Matrix target = h1.matrix();
            // stack h1 over h2
            Matrix stacked(fld, h1.matrix().rows() + h2.matrix().rows(), h1.matrix().cols());
            for (int j = 0; j < h1.matrix().cols(); ++j) {
                SparseCol cl = h1.matrix().col(j);
                for (const auto& [r, v] : h2.matrix().col(j))
                    cl.push_back({r + h1.matrix().rows(), v});
                stacked.set_col(j, std::move(cl));
            }
            auto sol = k.solve(stacked);
            require(sol.has_value(), "mediate: cone does not factor");
            return BaseMorphism::vec_map(h1.src(), P, *sol);
        };
        return out;
    }
    // chain: induced differential D_q with K_{q-1} D_q = (dX ⊕ dY) K_q
    std::vector<Matrix> diff;
    for (int q = lo + 1; q <= hi; ++q) {
        Matrix big = X.diff_at(q).direct_sum(Y.diff_at(q));
        Matrix rhs = big * kerq[q - lo];
        auto D = kerq[q - 1 - lo].solve(rhs);
        require(D.has_value(), "pullback differential failed to lift");
        diff.push_back(*D);
    }
    out.obj = BaseObject::chain(fld, lo, dims, diff);
    // note: constructor normalization may trim degrees; rebuild helpers against the
    // untrimmed layout by using mat components padded from kerq
    std::vector<Matrix> p1m, p2m;
    for (int q = out.obj.lo(); q <= out.obj.hi(); ++q) {
        const Matrix& k = kerq[q - lo];
        Matrix p1(fld, X.dim_at(q), k.cols()), p2(fld, Y.dim_at(q), k.cols());
        for (int j = 0; j < k.cols(); ++j)
            for (const auto& [r, v] : k.col(j)) {
                if (r < X.dim_at(q))
                    p1.set(r, j, v);
                else
                    p2.set(r - X.dim_at(q), j, v);
            }
        p1m.push_back(std::move(p1));
        p2m.push_back(std::move(p2));
    }
    out.pr1 = BaseMorphism::chain_map(out.obj, X, std::move(p1m));
    out.pr2 = BaseMorphism::chain_map(out.obj, Y, std::move(p2m));
    BaseObject P = out.obj;
    int base_lo = lo;
    out.mediate = [P, kerq, fld, base_lo](const BaseMorphism& h1,
                                          const BaseMorphism& h2) -> BaseMorphism {
        std::vector<Matrix> mats;
        for (int q = h1.src().lo(); q <= h1.src().hi(); ++q) {
            Matrix m1 = h1.mat_at(q), m2 = h2.mat_at(q);
            Matrix stacked(fld, m1.rows() + m2.rows(), m1.cols());
            for (int j = 0; j < m1.cols(); ++j) {
                SparseCol cl = m1.col(j);
                for (const auto& [r, v] : m2.col(j))
                    cl.push_back({r + m1.rows(), v});
                stacked.set_col(j, std::move(cl));
            }
            int i = q - base_lo;
            Matrix k = (i >= 0 && i < (int)kerq.size()) ? kerq[i]
                                                        : Matrix::zero(fld, stacked.rows(), 0);
            auto sol = k.solve(stacked);
            require(sol.has_value(), "mediate: cone does not factor");
            Matrix s = *sol;
            // pad rows to P.dim_at(q)
            Matrix padded(fld, P.dim_at(q), s.cols());
            for (int j = 0; j < s.cols(); ++j)
                padded.set_col(j, s.col(j));
            mats.push_back(std::move(padded));
        }
        return BaseMorphism::chain_map(h1.src(), P, std::move(mats));
    };
    return out;
}

/* --- change of flavour ---------------------------------------------------------- */

BaseObject linearize(const BaseObject& finset, const FieldSpec& f)
{
    return BaseObject::vec(f, finset.finset_ob().size);
}

BaseMorphism linearize(const BaseMorphism& m, const FieldSpec& f)
{
    Matrix mat(f, m.dst().finset_ob().size, m.src().finset_ob().size);
    for (int j = 0; j < (int)m.table().size(); ++j)
        mat.set(m.table()[j], j, Scalar::one(f));
    return BaseMorphism::vec_map(linearize(m.src(), f), linearize(m.dst(), f), std::move(mat));
}

BaseObject vec_as_chain(const BaseObject& v)
{
    const auto& vo = v.vec_ob();
    if (vo.dim == 0)
        return BaseObject::initial(BaseTag::chain(vo.field));
    return BaseObject::chain(vo.field, 0, {vo.dim}, {});
}

BaseMorphism vec_as_chain(const BaseMorphism& f)
{
    BaseObject s = vec_as_chain(f.src()), d = vec_as_chain(f.dst());
    std::vector<Matrix> mats;
    if (!s.is_initial())
        mats.push_back(f.matrix());
    return BaseMorphism::chain_map(std::move(s), std::move(d), std::move(mats));
}

/* --- homology --------------------------------------------------------------------- */

std::map<int, int> homology_dims(const BaseObject& c)
{
    require(c.is_chain(), "homology of a non-complex");
    std::map<int, int> h;
    for (int q = c.lo(); q <= c.hi(); ++q) {
        int dq_rank = c.diff_at(q).rank();
        int dq1_rank = c.diff_at(q + 1).rank();
        h[q] = c.dim_at(q) - dq_rank - dq1_rank;
    }
    return h;
}

namespace {
struct HomologyBasis {
    Matrix reps;        // dim_q x h : cycle representatives
    Matrix boundaries;  // dim_q x b : boundary basis
};

HomologyBasis homology_basis(const BaseObject& c, int q)
{
    Matrix z = c.diff_at(q).kernel();          // dim_q x z
    Matrix dq1 = c.diff_at(q + 1);             // dim_q x dim_{q+1}
    std::vector<int> piv = dq1.pivot_columns();
    Matrix b = dq1.select_cols(piv);           // boundary basis
    // extend b to z inside the cycle space: pivot columns of [b | z] beyond b
    Matrix bz = b.hcat(z);
    std::vector<int> piv2 = bz.pivot_columns();
    std::vector<int> take;
    for (int p : piv2)
        if (p >= b.cols())
            take.push_back(p);
    Matrix reps = bz.select_cols(take);
    return {std::move(reps), std::move(b)};
}
}  // namespace

QuasiIsoReport is_quasi_iso(const BaseMorphism& f)
{
    QuasiIsoReport rep;
    require(f.src().is_chain() && f.dst().is_chain(), "quasi-isomorphism needs chain complexes");
    rep.ok = true;
    int lo = std::min(f.src().lo(), f.dst().lo());
    int hi = std::max(f.src().hi(), f.dst().hi());
    for (int q = lo; q <= hi; ++q) {
        HomologyBasis hs = homology_basis(f.src(), q);
        HomologyBasis hd = homology_basis(f.dst(), q);
        rep.dims[q] = {hs.reps.cols(), hd.reps.cols()};
        bool ok_q = hs.reps.cols() == hd.reps.cols();
        if (ok_q && hs.reps.cols() > 0) {
            Matrix img = f.mat_at(q) * hs.reps;
            Matrix sys = hd.reps.hcat(hd.boundaries);
            auto sol = sys.solve(img);
            if (!sol.has_value()) {
                ok_q = false;  // image not even a cycle combination: not a chain map image
            }
            else {
                std::vector<int> rows;
                for (int r = 0; r < hd.reps.cols(); ++r)
                    rows.push_back(r);
                Matrix induced = sol->select_rows(rows);
                ok_q = induced.rank() == induced.rows() && induced.rows() == induced.cols();
            }
        }
        rep.degree_ok[q] = ok_q;
        if (!ok_q) {
            rep.ok = false;
            rep.detail += "degree " + std::to_string(q) + ": H " +
                          std::to_string(rep.dims[q].first) + " vs " +
                          std::to_string(rep.dims[q].second) + " not matched by an iso; ";
        }
    }
    return rep;
}

}  // namespace opd
