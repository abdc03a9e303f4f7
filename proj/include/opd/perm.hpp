#ifndef OPD_PERM_HPP
#define OPD_PERM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "opd/error.hpp"

namespace opd {

/* Permutation of {0..n-1}, stored as the image list im[i] = sigma(i).
 *
 * Products compose right-to-left: (a*b)(i) = a(b(i)), i.e. b acts first.
 * Right actions throughout the library satisfy act(a)∘act(b) = act(b*a). */
class Permutation {
  public:
    Permutation() = default;
    explicit Permutation(std::vector<int> images);
    static Permutation identity(int n);
    static Permutation transposition(int n, int i, int j);
    /* All n! permutations in lexicographic order of image lists. */
    static std::vector<Permutation> all(int n);
    /* Adjacent transpositions (i,i+1); generate Sigma_n. */
    static std::vector<Permutation> generators(int n);

    int size() const { return (int)im_.size(); }
    int operator()(int i) const { return im_[i]; }
    const std::vector<int>& images() const { return im_; }

    Permutation operator*(const Permutation& o) const;  // (a*b)(i) = a(b(i))
    Permutation inverse() const;
    bool is_identity() const;
    int sign() const;

    /* Lexicographic rank among all permutations of the same size. */
    std::uint64_t lex_rank() const;
    static Permutation from_lex_rank(int n, std::uint64_t rank);

    bool operator==(const Permutation& o) const { return im_ == o.im_; }
    bool operator!=(const Permutation& o) const { return !(*this == o); }
    bool operator<(const Permutation& o) const { return im_ < o.im_; }
    std::string str() const;

  private:
    std::vector<int> im_;
};

/* Block-diagonal sum: (t_1 ⊕ … ⊕ t_k)(o_b + j) = o_b + t_b(j), with o_b = n_1+…+n_{b-1}. */
Permutation block_sum(const std::vector<Permutation>& parts);

/* Block permutation sigma<n_1..n_k>: moves the whole b-th block (contiguous, size
 * sizes[b]) to the slot sigma(b), preserving the order inside each block. */
Permutation block_permutation(const Permutation& sigma, const std::vector<int>& sizes);

std::uint64_t factorial(int n);

}  // namespace opd

#endif
