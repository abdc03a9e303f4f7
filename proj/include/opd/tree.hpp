#ifndef OPD_TREE_HPP
#define OPD_TREE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "opd/perm.hpp"

namespace opd {

/* Finite rooted planar tree.  A node is either an input edge (leaf) or a vertex with an
 * ordered list of children; a vertex with no children is a stump.  The unit tree is a
 * bare leaf.  Vertices may be coloured.
 *
 * Text grammar (bit-exact): '*' input edge, '( ... )' uncoloured vertex, '[ ... ]'
 * coloured vertex, children separated by whitespace; '()' is an uncoloured stump. */
class Tree {
  public:
    static Tree leaf();
    static Tree vertex(std::vector<Tree> children, bool coloured = false);

    bool is_leaf() const { return leaf_; }
    bool coloured() const { return coloured_; }
    const std::vector<Tree>& children() const { return ch_; }
    int valence() const { return (int)ch_.size(); }

    static Tree parse(const std::string& text);
    std::string str() const;

    bool operator==(const Tree& o) const;
    bool operator!=(const Tree& o) const { return !(*this == o); }

    /* Attach colour flags at the given vertex addresses (child-index paths from the root). */
    Tree with_colours(const std::vector<std::vector<int>>& addrs) const;
    std::vector<std::vector<int>> colour_addresses() const;
    Tree uncoloured() const;  // strip all colour flags
    int coloured_count() const;

  private:
    bool leaf_ = true;
    bool coloured_ = false;
    std::vector<Tree> ch_;
};

struct TreeStats {
    int vertices = 0;
    int internal_edges = 0;
    int inputs = 0;
    int root_valence = -1;  // -1 for the unit tree
    int stumps = 0;
};
TreeStats tree_stats(const Tree& t);

/* Grafting: root corolla on the given subtrees (unit-tree arguments stay input edges). */
Tree graft(const std::vector<Tree>& subtrees);
/* Inverse decomposition of a non-unit tree: (root valence, subtrees). */
std::pair<int, std::vector<Tree>> root_split(const Tree& t);

/* Canonical representative of the isomorphism class: children sorted recursively by
 * canonical string.  Equal strings iff isomorphic as coloured trees. */
std::string canonical_form(const Tree& t);
Tree canonical_tree(const Tree& t);

/* DFS (pre-order) index of a tree's vertices and inputs. */
struct TreeIndex {
    struct VertexInfo {
        int valence = 0;
        bool coloured = false;
        int parent = -1;
        std::vector<int> child_vertex;  // DFS index of child subtree root, -1 for leaf child
        std::vector<int> child_input;   // planar input position of leaf child, -1 otherwise
        int subtree_vertices = 0;
        int subtree_inputs = 0;
        int first_input = 0;  // planar position of this subtree's first input
    };
    std::vector<VertexInfo> v;
    int inputs = 0;
};
TreeIndex index_tree(const Tree& t);

/* Isomorphism of coloured trees, recorded vertexwise: vertex_map on DFS indices,
 * per-source-vertex child-slot permutation, and the induced map on planar inputs. */
struct TreeIso {
    std::vector<int> vertex_map;
    std::vector<Permutation> child_perm;
    std::vector<int> input_map;

    Permutation input_perm() const { return Permutation(input_map); }
};
TreeIso identity_iso(const Tree& t);
TreeIso compose_iso(const TreeIso& second, const TreeIso& first);
TreeIso inverse_iso(const TreeIso& iso);
bool iso_valid(const Tree& src, const Tree& dst, const TreeIso& iso);

struct CanonResult {
    Tree canon;
    TreeIso iso;  // from the input tree to canon
};
CanonResult canonicalize(const Tree& t);

/* Automorphisms of a canonical coloured tree: order by the recursive product formula,
 * generators by transposing equal adjacent siblings (the G⋊Σ decomposition). */
struct AutGroup {
    std::uint64_t order = 1;
    std::vector<TreeIso> generators;
};
AutGroup automorphism_group(const Tree& canonical);

/* Every isomorphism t -> u (empty when none); brute-force, for small trees. */
std::vector<TreeIso> all_isomorphisms(const Tree& t, const Tree& u);

/* Planar input addresses (child-index paths), left to right. */
std::vector<std::vector<int>> input_addresses(const Tree& t);
/* All |T|! numberings as address lists, lexicographic in the image sequence. */
std::vector<std::vector<std::vector<int>>> numberings(const Tree& t);

/* Any internal edge has at least one coloured extremity. */
bool is_admissible(const Tree& t);

struct EnumOptions {
    std::optional<int> coloured_count;             // exact number of coloured vertices
    bool admissible_only = false;
    bool allow_colours = false;                    // enumerate colourings at all
    std::optional<std::vector<int>> uncoloured_valences;  // allowed valences
    std::optional<std::vector<int>> coloured_valences;
};
/* Duplicate-free canonical classes with the given number of inputs and at most
 * max_vertices vertices. */
std::vector<Tree> enumerate_trees(int inputs, int max_vertices, const EnumOptions& opt = {});

}  // namespace opd

#endif
