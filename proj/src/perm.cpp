#include "opd/perm.hpp"

#include <algorithm>
#include <numeric>

namespace opd {

Permutation::Permutation(std::vector<int> images) : im_(std::move(images))
{
    std::vector<char> seen(im_.size(), 0);
    for (int v : im_) {
        require(v >= 0 && v < (int)im_.size(), "permutation image ", v, " out of range");
        require(!seen[v], "permutation image ", v, " repeated");
        seen[v] = 1;
    }
}

Permutation Permutation::identity(int n)
{
    std::vector<int> im(n);
    std::iota(im.begin(), im.end(), 0);
    return Permutation(std::move(im));
}

Permutation Permutation::transposition(int n, int i, int j)
{
    Permutation p = identity(n);
    std::swap(p.im_[i], p.im_[j]);
    return p;
}

std::vector<Permutation> Permutation::all(int n)
{
    std::vector<int> im(n);
    std::iota(im.begin(), im.end(), 0);
    std::vector<Permutation> out;
    out.reserve(factorial(n));
    do {
        out.push_back(Permutation(im));
    } while (std::next_permutation(im.begin(), im.end()));
    return out;
}

std::vector<Permutation> Permutation::generators(int n)
{
    std::vector<Permutation> gens;
    for (int i = 0; i + 1 < n; ++i)
        gens.push_back(transposition(n, i, i + 1));
    return gens;
}

Permutation Permutation::operator*(const Permutation& o) const
{
    require(size() == o.size(), "permutation size mismatch");
    std::vector<int> im(size());
    for (int i = 0; i < size(); ++i)
        im[i] = im_[o.im_[i]];
    return Permutation(std::move(im));
}

Permutation Permutation::inverse() const
{
    std::vector<int> im(size());
    for (int i = 0; i < size(); ++i)
        im[im_[i]] = i;
    return Permutation(std::move(im));
}

bool Permutation::is_identity() const
{
    for (int i = 0; i < size(); ++i)
        if (im_[i] != i)
            return false;
    return true;
}

int Permutation::sign() const
{
    int s = 1;
    for (int i = 0; i < size(); ++i)
        for (int j = i + 1; j < size(); ++j)
            if (im_[i] > im_[j])
                s = -s;
    return s;
}

std::uint64_t Permutation::lex_rank() const
{
    const int n = size();
    std::uint64_t rank = 0;
    for (int i = 0; i < n; ++i) {
        int smaller = 0;
        for (int j = i + 1; j < n; ++j)
            if (im_[j] < im_[i])
                ++smaller;
        rank += smaller * factorial(n - 1 - i);
    }
    return rank;
}

Permutation Permutation::from_lex_rank(int n, std::uint64_t rank)
{
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> im;
    im.reserve(n);
    for (int i = n - 1; i >= 0; --i) {
        std::uint64_t f = factorial(i);
        int idx = (int)(rank / f);
        rank %= f;
        im.push_back(pool[idx]);
        pool.erase(pool.begin() + idx);
    }
    return Permutation(std::move(im));
}

std::string Permutation::str() const
{
    std::string s = "[";
    for (int i = 0; i < size(); ++i) {
        if (i)
            s += ",";
        s += std::to_string(im_[i]);
    }
    return s + "]";
}

Permutation block_sum(const std::vector<Permutation>& parts)
{
    int n = 0;
    for (const auto& p : parts)
        n += p.size();
    std::vector<int> im(n);
    int off = 0;
    for (const auto& p : parts) {
        for (int j = 0; j < p.size(); ++j)
            im[off + j] = off + p(j);
        off += p.size();
    }
    return Permutation(std::move(im));
}

Permutation block_permutation(const Permutation& sigma, const std::vector<int>& sizes)
{
    const int k = sigma.size();
    require((int)sizes.size() == k, "block count mismatch");
    std::vector<int> in_off(k, 0);
    for (int b = 1; b < k; ++b)
        in_off[b] = in_off[b - 1] + sizes[b - 1];
    // slot t receives block sigma^{-1}(t)
    Permutation inv = sigma.inverse();
    std::vector<int> slot_off(k, 0);
    for (int t = 1; t < k; ++t)
        slot_off[t] = slot_off[t - 1] + sizes[inv(t - 1)];
    int n = in_off[k - 1] + sizes[k - 1];
    std::vector<int> im(n);
    for (int b = 0; b < k; ++b)
        for (int j = 0; j < sizes[b]; ++j)
            im[in_off[b] + j] = slot_off[sigma(b)] + j;
    return Permutation(std::move(im));
}

std::uint64_t factorial(int n)
{
    require(n >= 0 && n <= 20, "factorial out of range: ", n);
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i)
        f *= i;
    return f;
}

}  // namespace opd
