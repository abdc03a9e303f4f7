#include "opd/tree.hpp"

#include <algorithm>
#include <map>

#include "opd/error.hpp"

namespace opd {

Tree Tree::leaf()
{
    Tree t;
    t.leaf_ = true;
    return t;
}

Tree Tree::vertex(std::vector<Tree> children, bool coloured)
{
    Tree t;
    t.leaf_ = false;
    t.coloured_ = coloured;
    t.ch_ = std::move(children);
    return t;
}

namespace {
Tree parse_at(const std::string& s, size_t& pos)
{
    while (pos < s.size() && isspace((unsigned char)s[pos]))
        ++pos;
    require(pos < s.size(), "syntax error at offset ", pos, ": unexpected end of input");
    char c = s[pos];
    if (c == '*') {
        ++pos;
        return Tree::leaf();
    }
    if (c == '(' || c == '[') {
        char close = c == '(' ? ')' : ']';
        bool coloured = c == '[';
        ++pos;
        std::vector<Tree> ch;
        for (;;) {
            while (pos < s.size() && isspace((unsigned char)s[pos]))
                ++pos;
            require(pos < s.size(), "syntax error at offset ", pos, ": unbalanced brackets");
            if (s[pos] == close) {
                ++pos;
                return Tree::vertex(std::move(ch), coloured);
            }
            ch.push_back(parse_at(s, pos));
        }
    }
    fail("syntax error at offset ", pos, ": unexpected '", std::string(1, c), "'");
}
}  // namespace

Tree Tree::parse(const std::string& text)
{
    size_t pos = 0;
    Tree t = parse_at(text, pos);
    while (pos < text.size() && isspace((unsigned char)text[pos]))
        ++pos;
    require(pos == text.size(), "syntax error at offset ", pos, ": trailing input");
    return t;
}

std::string Tree::str() const
{
    if (leaf_)
        return "*";
    std::string s(1, coloured_ ? '[' : '(');
    for (size_t i = 0; i < ch_.size(); ++i) {
        if (i)
            s += ' ';
        s += ch_[i].str();
    }
    s += coloured_ ? ']' : ')';
    return s;
}

bool Tree::operator==(const Tree& o) const
{
    return leaf_ == o.leaf_ && coloured_ == o.coloured_ && ch_ == o.ch_;
}

Tree Tree::with_colours(const std::vector<std::vector<int>>& addrs) const
{
    Tree t = *this;
    for (const auto& a : addrs) {
        Tree* cur = &t;
        for (int step : a) {
            require(!cur->leaf_ && step >= 0 && step < (int)cur->ch_.size(),
                    "colour address refers to no vertex");
            cur = &cur->ch_[step];
        }
        require(!cur->leaf_, "colour address lands on an input edge");
        cur->coloured_ = true;
    }
    return t;
}

namespace {
void collect_colours(const Tree& t, std::vector<int>& path, std::vector<std::vector<int>>& out)
{
    if (t.is_leaf())
        return;
    if (t.coloured())
        out.push_back(path);
    for (int i = 0; i < (int)t.children().size(); ++i) {
        path.push_back(i);
        collect_colours(t.children()[i], path, out);
        path.pop_back();
    }
}
}  // namespace

std::vector<std::vector<int>> Tree::colour_addresses() const
{
    std::vector<std::vector<int>> out;
    std::vector<int> path;
    collect_colours(*this, path, out);
    return out;
}

Tree Tree::uncoloured() const
{
    if (leaf_)
        return *this;
    std::vector<Tree> ch;
    for (const auto& c : ch_)
        ch.push_back(c.uncoloured());
    return vertex(std::move(ch), false);
}

int Tree::coloured_count() const
{
    if (leaf_)
        return 0;
    int n = coloured_ ? 1 : 0;
    for (const auto& c : ch_)
        n += c.coloured_count();
    return n;
}

TreeStats tree_stats(const Tree& t)
{
    TreeStats s;
    if (t.is_leaf()) {
        s.inputs = 1;
        return s;
    }
    s.root_valence = t.valence();
    struct Walk {
        static void go(const Tree& t, TreeStats& s)
        {
            s.vertices += 1;
            if (t.valence() == 0)
                s.stumps += 1;
            for (const auto& c : t.children()) {
                if (c.is_leaf())
                    s.inputs += 1;
                else {
                    s.internal_edges += 1;
                    go(c, s);
                }
            }
        }
    };
    Walk::go(t, s);
    return s;
}

Tree graft(const std::vector<Tree>& subtrees) { return Tree::vertex(subtrees); }

std::pair<int, std::vector<Tree>> root_split(const Tree& t)
{
    require(!t.is_leaf(), "the unit tree has no root vertex");
    return {t.valence(), t.children()};
}

std::string canonical_form(const Tree& t) { return canonical_tree(t).str(); }

Tree canonical_tree(const Tree& t)
{
    if (t.is_leaf())
        return t;
    std::vector<Tree> ch;
    for (const auto& c : t.children())
        ch.push_back(canonical_tree(c));
    std::stable_sort(ch.begin(), ch.end(),
                     [](const Tree& a, const Tree& b) { return a.str() < b.str(); });
    return Tree::vertex(std::move(ch), t.coloured());
}

/* --- DFS index ------------------------------------------------------------------ */

namespace {
int index_walk(const Tree& t, TreeIndex& ix, int parent)
{
    int me = (int)ix.v.size();
    ix.v.push_back({});
    ix.v[me].valence = t.valence();
    ix.v[me].coloured = t.coloured();
    ix.v[me].parent = parent;
    ix.v[me].first_input = ix.inputs;
    for (const auto& c : t.children()) {
        if (c.is_leaf()) {
            ix.v[me].child_vertex.push_back(-1);
            ix.v[me].child_input.push_back(ix.inputs++);
        }
        else {
            int cv = index_walk(c, ix, me);
            ix.v[me].child_vertex.push_back(cv);
            ix.v[me].child_input.push_back(-1);
        }
    }
    ix.v[me].subtree_vertices = (int)ix.v.size() - me;
    ix.v[me].subtree_inputs = ix.inputs - ix.v[me].first_input;
    return me;
}
}  // namespace

TreeIndex index_tree(const Tree& t)
{
    TreeIndex ix;
    if (t.is_leaf()) {
        ix.inputs = 1;
        return ix;
    }
    index_walk(t, ix, -1);
    return ix;
}

/* --- isomorphisms ----------------------------------------------------------------- */

TreeIso identity_iso(const Tree& t)
{
    TreeIndex ix = index_tree(t);
    TreeIso iso;
    iso.vertex_map.resize(ix.v.size());
    for (size_t i = 0; i < ix.v.size(); ++i) {
        iso.vertex_map[i] = (int)i;
        iso.child_perm.push_back(Permutation::identity(ix.v[i].valence));
    }
    iso.input_map.resize(ix.inputs);
    for (int i = 0; i < ix.inputs; ++i)
        iso.input_map[i] = i;
    return iso;
}

TreeIso compose_iso(const TreeIso& second, const TreeIso& first)
{
    TreeIso out;
    out.vertex_map.resize(first.vertex_map.size());
    out.child_perm.resize(first.vertex_map.size(), Permutation());
    for (size_t v = 0; v < first.vertex_map.size(); ++v) {
        int mid = first.vertex_map[v];
        out.vertex_map[v] = second.vertex_map[mid];
        out.child_perm[v] = second.child_perm[mid] * first.child_perm[v];
    }
    out.input_map.resize(first.input_map.size());
    for (size_t i = 0; i < first.input_map.size(); ++i)
        out.input_map[i] = second.input_map[first.input_map[i]];
    return out;
}

TreeIso inverse_iso(const TreeIso& iso)
{
    TreeIso out;
    out.vertex_map.resize(iso.vertex_map.size());
    out.child_perm.resize(iso.vertex_map.size(), Permutation());
    for (size_t v = 0; v < iso.vertex_map.size(); ++v) {
        out.vertex_map[iso.vertex_map[v]] = (int)v;
        out.child_perm[iso.vertex_map[v]] = iso.child_perm[v].inverse();
    }
    out.input_map.resize(iso.input_map.size());
    for (size_t i = 0; i < iso.input_map.size(); ++i)
        out.input_map[iso.input_map[i]] = (int)i;
    return out;
}

bool iso_valid(const Tree& src, const Tree& dst, const TreeIso& iso)
{
    TreeIndex s = index_tree(src), d = index_tree(dst);
    if (s.v.size() != d.v.size() || s.inputs != d.inputs)
        return false;
    if (iso.vertex_map.size() != s.v.size() || iso.input_map.size() != (size_t)s.inputs)
        return false;
    for (size_t v = 0; v < s.v.size(); ++v) {
        int w = iso.vertex_map[v];
        if (w < 0 || w >= (int)d.v.size())
            return false;
        const auto& sv = s.v[v];
        const auto& dv = d.v[w];
        if (sv.valence != dv.valence || sv.coloured != dv.coloured)
            return false;
        if (iso.child_perm[v].size() != sv.valence)
            return false;
        for (int c = 0; c < sv.valence; ++c) {
            int tc = iso.child_perm[v](c);
            if (sv.child_vertex[c] >= 0) {
                if (dv.child_vertex[tc] < 0)
                    return false;
                if (iso.vertex_map[sv.child_vertex[c]] != dv.child_vertex[tc])
                    return false;
            }
            else {
                if (dv.child_input[tc] < 0)
                    return false;
                if (iso.input_map[sv.child_input[c]] != dv.child_input[tc])
                    return false;
            }
        }
    }
    // roots must correspond
    if (!s.v.empty() && iso.vertex_map[0] != 0)
        return false;
    return true;
}

namespace {
/* Assemble an isomorphism src -> dst from a root child assignment and child isos.
 * child_assign maps src child slots to dst child slots; child_isos[i] is the iso of the
 * src subtree at slot i onto the dst subtree at slot child_assign(i) (leaf slots need none). */
TreeIso assemble_iso(const Tree& src, const Tree& dst, const Permutation& child_assign,
                     const std::vector<std::optional<TreeIso>>& child_isos)
{
    TreeIndex s = index_tree(src), d = index_tree(dst);
    TreeIso out;
    out.vertex_map.assign(s.v.size(), -1);
    out.child_perm.assign(s.v.size(), Permutation());
    out.input_map.assign(s.inputs, -1);
    out.vertex_map[0] = 0;
    out.child_perm[0] = child_assign;
    for (int c = 0; c < (int)src.children().size(); ++c) {
        int tc = child_assign(c);
        if (s.v[0].child_vertex[c] < 0) {
            require(d.v[0].child_input[tc] >= 0, "assemble: leaf mapped to vertex");
            out.input_map[s.v[0].child_input[c]] = d.v[0].child_input[tc];
            continue;
        }
        int sv = s.v[0].child_vertex[c];
        int dv = d.v[0].child_vertex[tc];
        require(dv >= 0, "assemble: vertex mapped to leaf");
        const TreeIso& ci = *child_isos[c];
        int si = s.v[sv].first_input, di = d.v[dv].first_input;
        for (int k = 0; k < s.v[sv].subtree_vertices; ++k) {
            out.vertex_map[sv + k] = dv + ci.vertex_map[k];
            out.child_perm[sv + k] = ci.child_perm[k];
        }
        for (int p = 0; p < s.v[sv].subtree_inputs; ++p)
            out.input_map[si + p] = di + ci.input_map[p];
    }
    return out;
}
}  // namespace

CanonResult canonicalize(const Tree& t)
{
    if (t.is_leaf())
        return {t, identity_iso(t)};
    // canonicalize children, then stable-sort them by canonical string
    std::vector<CanonResult> kids;
    std::vector<std::string> keys;
    for (const auto& c : t.children()) {
        if (c.is_leaf()) {
            kids.push_back({c, identity_iso(c)});
            keys.push_back("*");
        }
        else {
            kids.push_back(canonicalize(c));
            keys.push_back(kids.back().canon.str());
        }
    }
    const int m = t.valence();
    std::vector<int> order(m);
    for (int i = 0; i < m; ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return keys[a] < keys[b]; });
    std::vector<Tree> sorted;
    for (int j = 0; j < m; ++j)
        sorted.push_back(kids[order[j]].canon);
    Tree canon = Tree::vertex(std::move(sorted), t.coloured());
    // child_assign: src slot i -> its sorted position
    std::vector<int> assign(m);
    for (int j = 0; j < m; ++j)
        assign[order[j]] = j;
    std::vector<std::optional<TreeIso>> cis(m);
    for (int i = 0; i < m; ++i)
        if (!t.children()[i].is_leaf())
            cis[i] = kids[i].iso;
    TreeIso iso = assemble_iso(t, canon, Permutation(assign), cis);
    return {std::move(canon), std::move(iso)};
}

/* --- automorphisms ------------------------------------------------------------------ */

namespace {
void aut_walk(const Tree& canon, const Tree& whole, const std::vector<int>& path_to_me,
              AutGroup& out);

/* Lift an automorphism of the subtree at child slot c of the vertex at `path` to the
 * whole tree. */
TreeIso lift_iso(const Tree& whole, const std::vector<int>& path, const TreeIso& inner)
{
    TreeIndex w = index_tree(whole);
    // locate DFS index and input offset of the subtree at `path`
    int v = 0;
    for (int step : path) {
        v = w.v[v].child_vertex[step];
        require(v >= 0, "lift: path goes through a leaf");
    }
    TreeIso out = identity_iso(whole);
    int fi = w.v[v].first_input;
    for (int k = 0; k < w.v[v].subtree_vertices; ++k) {
        out.vertex_map[v + k] = v + inner.vertex_map[k];
        out.child_perm[v + k] = inner.child_perm[k];
    }
    for (int p = 0; p < w.v[v].subtree_inputs; ++p)
        out.input_map[fi + p] = fi + inner.input_map[p];
    return out;
}

void aut_walk(const Tree& canon, const Tree& whole, const std::vector<int>& path, AutGroup& out)
{
    if (canon.is_leaf())
        return;
    const auto& ch = canon.children();
    const int m = (int)ch.size();
    // runs of equal children contribute sibling transpositions
    int run_start = 0;
    for (int i = 1; i <= m; ++i) {
        if (i == m || !(ch[i] == ch[run_start])) {
            int len = i - run_start;
            out.order *= factorial(len);
            for (int c = run_start; c + 1 < i; ++c) {
                // swap children c, c+1 of the vertex at `path`
                std::vector<std::optional<TreeIso>> cis(m);
                for (int k = 0; k < m; ++k)
                    if (!ch[k].is_leaf())
                        cis[k] = identity_iso(ch[k]);
                TreeIso swap_at_sub =
                    assemble_iso(canon, canon, Permutation::transposition(m, c, c + 1), cis);
                if (path.empty())
                    out.generators.push_back(swap_at_sub);
                else
                    out.generators.push_back(lift_iso(whole, path, swap_at_sub));
            }
            run_start = i;
        }
    }
    for (int c = 0; c < m; ++c) {
        if (ch[c].is_leaf())
            continue;
        std::vector<int> sub_path = path;
        sub_path.push_back(c);
        AutGroup inner;
        aut_walk(ch[c], whole, sub_path, inner);
        out.order *= inner.order;
        for (auto& g : inner.generators)
            out.generators.push_back(std::move(g));
    }
}
}  // namespace

AutGroup automorphism_group(const Tree& canonical)
{
    require(canonical == canonical_tree(canonical), "automorphism_group needs a canonical tree");
    AutGroup out;
    aut_walk(canonical, canonical, {}, out);
    return out;
}

std::vector<TreeIso> all_isomorphisms(const Tree& t, const Tree& u)
{
    if (t.is_leaf() || u.is_leaf()) {
        if (t.is_leaf() && u.is_leaf()) {
            TreeIso id;
            id.input_map = {0};
            return {id};
        }
        return {};
    }
    if (t.coloured() != u.coloured() || t.valence() != u.valence())
        return {};
    const int m = t.valence();
    // candidate target slots per source slot (matching canonical class)
    std::vector<std::string> tkey(m), ukey(m);
    for (int i = 0; i < m; ++i) {
        tkey[i] = canonical_form(t.children()[i]);
        ukey[i] = canonical_form(u.children()[i]);
    }
    std::vector<TreeIso> out;
    std::vector<int> assign(m, -1);
    std::vector<char> used(m, 0);
    std::vector<std::vector<std::vector<TreeIso>>> child_choices(m);
    // precompute per (source slot, target slot) isomorphism lists
    for (int i = 0; i < m; ++i) {
        child_choices[i].resize(m);
        for (int j = 0; j < m; ++j)
            if (tkey[i] == ukey[j]) {
                if (t.children()[i].is_leaf())
                    child_choices[i][j] = {TreeIso{}};  // leaf-to-leaf, trivial
                else
                    child_choices[i][j] = all_isomorphisms(t.children()[i], u.children()[j]);
            }
    }
    struct Rec {
        static void go(int i, int m, std::vector<int>& assign, std::vector<char>& used,
                       const std::vector<std::vector<std::vector<TreeIso>>>& cc, const Tree& t,
                       const Tree& u, std::vector<TreeIso>& out)
        {
            if (i == m) {
                // expand child iso choices
                std::vector<std::vector<const TreeIso*>> opts(m);
                struct Rec2 {
                    static void go2(int k, int m, const std::vector<int>& assign,
                                    const std::vector<std::vector<std::vector<TreeIso>>>& cc,
                                    std::vector<std::optional<TreeIso>>& chosen, const Tree& t,
                                    const Tree& u, std::vector<TreeIso>& out)
                    {
                        if (k == m) {
                            std::vector<int> av(assign.begin(), assign.end());
                            out.push_back(assemble_iso(t, u, Permutation(av), chosen));
                            return;
                        }
                        if (t.children()[k].is_leaf()) {
                            chosen[k] = std::nullopt;
                            go2(k + 1, m, assign, cc, chosen, t, u, out);
                            return;
                        }
                        for (const auto& ci : cc[k][assign[k]]) {
                            chosen[k] = ci;
                            go2(k + 1, m, assign, cc, chosen, t, u, out);
                        }
                    }
                };
                std::vector<std::optional<TreeIso>> chosen(m);
                Rec2::go2(0, m, assign, cc, chosen, t, u, out);
                return;
            }
            for (int j = 0; j < m; ++j) {
                if (used[j] || cc[i][j].empty())
                    continue;
                if (t.children()[i].is_leaf() && !u.children()[j].is_leaf())
                    continue;
                used[j] = 1;
                assign[i] = j;
                go(i + 1, m, assign, used, cc, t, u, out);
                used[j] = 0;
            }
        }
    };
    Rec::go(0, m, assign, used, child_choices, t, u, out);
    return out;
}

/* --- inputs and numberings ------------------------------------------------------------ */

namespace {
void input_walk(const Tree& t, std::vector<int>& path, std::vector<std::vector<int>>& out)
{
    if (t.is_leaf()) {
        out.push_back(path);
        return;
    }
    for (int i = 0; i < (int)t.children().size(); ++i) {
        path.push_back(i);
        input_walk(t.children()[i], path, out);
        path.pop_back();
    }
}
}  // namespace

std::vector<std::vector<int>> input_addresses(const Tree& t)
{
    std::vector<std::vector<int>> out;
    std::vector<int> path;
    input_walk(t, path, out);
    return out;
}

std::vector<std::vector<std::vector<int>>> numberings(const Tree& t)
{
    auto addr = input_addresses(t);
    int n = (int)addr.size();
    std::vector<std::vector<std::vector<int>>> out;
    for (const auto& s : Permutation::all(n)) {
        std::vector<std::vector<int>> numbered(n);
        for (int i = 0; i < n; ++i)
            numbered[i] = addr[s(i)];
        out.push_back(std::move(numbered));
    }
    return out;
}

bool is_admissible(const Tree& t)
{
    if (t.is_leaf())
        return true;
    for (const auto& c : t.children()) {
        if (c.is_leaf())
            continue;
        if (!t.coloured() && !c.coloured())
            return false;
        if (!is_admissible(c))
            return false;
    }
    return true;
}

/* --- enumeration ------------------------------------------------------------------------ */

namespace {
struct Enumerator {
    int max_vertices;
    int max_inputs;
    const EnumOptions& opt;
    /* Candidate children, kept sorted by canonical string so that rank order and the
     * canonical child order coincide. */
    std::vector<Tree> cand;
    std::vector<int> cand_v, cand_i;
    std::vector<std::string> cand_s;

    bool valence_ok(int m, bool coloured) const
    {
        const auto& f = coloured ? opt.coloured_valences : opt.uncoloured_valences;
        if (!f)
            return true;
        return std::find(f->begin(), f->end(), m) != f->end();
    }

    void insert_candidate(const Tree& t)
    {
        std::string s = t.str();
        auto it = std::lower_bound(cand_s.begin(), cand_s.end(), s);
        if (it != cand_s.end() && *it == s)
            return;
        size_t pos = it - cand_s.begin();
        TreeStats st = tree_stats(t);
        cand.insert(cand.begin() + pos, t);
        cand_s.insert(cand_s.begin() + pos, std::move(s));
        cand_v.insert(cand_v.begin() + pos, st.vertices);
        cand_i.insert(cand_i.begin() + pos, st.inputs);
    }

    /* Children lists sorted nondecreasing by canonical string, consuming exactly
     * vtx_budget vertices and at most input_budget inputs. */
    template <typename Fn>
    void gen_children(int vtx_budget, int input_budget, int min_rank, std::vector<Tree>& acc,
                      const Fn& emit)
    {
        if (vtx_budget == 0)
            emit(acc);  // the list may still be extended by further zero-vertex children
        for (int rank = min_rank; rank < (int)cand.size(); ++rank) {
            if (cand_v[rank] > vtx_budget || cand_i[rank] > input_budget)
                continue;
            acc.push_back(cand[rank]);
            gen_children(vtx_budget - cand_v[rank], input_budget - cand_i[rank], rank, acc, emit);
            acc.pop_back();
        }
    }

    std::vector<Tree> run()
    {
        insert_candidate(Tree::leaf());
        std::vector<std::vector<Tree>> pool(max_vertices + 1);
        for (int v = 1; v <= max_vertices; ++v) {
            std::vector<Tree> level;
            std::vector<Tree> acc;
            gen_children(v - 1, max_inputs, 0, acc, [&](const std::vector<Tree>& ch) {
                int m = (int)ch.size();
                if (valence_ok(m, false))
                    level.push_back(Tree::vertex(ch, false));
                if (opt.allow_colours && valence_ok(m, true))
                    level.push_back(Tree::vertex(ch, true));
            });
            for (const auto& t : level)
                insert_candidate(t);
            pool[v] = std::move(level);
        }
        std::vector<Tree> out;
        for (int v = 1; v <= max_vertices; ++v)
            out.insert(out.end(), pool[v].begin(), pool[v].end());
        return out;
    }
};
}  // namespace

std::vector<Tree> enumerate_trees(int inputs, int max_vertices, const EnumOptions& opt)
{
    require(inputs >= 0 && max_vertices >= 0, "enumeration bounds must be nonnegative");
    Enumerator e{max_vertices, inputs, opt, {}, {}, {}, {}};
    std::vector<Tree> all = e.run();
    std::vector<Tree> out;
    if (inputs == 1 && (!opt.coloured_count || *opt.coloured_count == 0))
        out.push_back(Tree::leaf());
    for (const auto& t : all) {
        if (tree_stats(t).inputs != inputs)
            continue;
        if (opt.coloured_count && t.coloured_count() != *opt.coloured_count)
            continue;
        if (opt.admissible_only && !is_admissible(t))
            continue;
        out.push_back(t);
    }
    std::sort(out.begin(), out.end(),
              [](const Tree& a, const Tree& b) { return a.str() < b.str(); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace opd
