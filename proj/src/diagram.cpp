#include "kh/diagram.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace kh {

namespace {

struct UnionFind {
    std::vector<int32_t> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int32_t find(int32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int32_t a, int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) parent[b] = a;  // least member as root keeps ids canonical
        else parent[a] = b;
    }
};

// Arc-end encoding helpers.
inline int32_t head(int32_t arc) { return 2 * arc + 1; }
inline int32_t tail(int32_t arc) { return 2 * arc; }

// end -> end of the next arc along the strand (crossings pass bl->tr, br->tl)
std::vector<int32_t> strand_connections(const PlanarDiagram& d) {
    std::vector<int32_t> conn(2 * d.n_arcs, -1);
    auto join = [&](int32_t e1, int32_t e2) {
        conn[e1] = e2;
        conn[e2] = e1;
    };
    for (const auto& c : d.crossings) {
        join(head(c.bl), tail(c.tr));
        join(head(c.br), tail(c.tl));
    }
    for (auto [e1, e2] : d.welds) join(e1, e2);
    return conn;
}

// Components + orientation by walking each circle. Each component is seeded
// at its least arc with direction +1; for a braid closure every connection is
// head-to-tail, so all directions come out +1.
void orient_and_component(PlanarDiagram& d) {
    auto conn = strand_connections(d);
    d.arc_component.assign(d.n_arcs, -1);
    d.arc_dir.assign(d.n_arcs, 0);
    int comps = 0;
    for (int32_t a = 0; a < d.n_arcs; ++a) {
        if (d.arc_component[a] >= 0) continue;
        int comp = comps++;
        d.arc_component[a] = comp;
        d.arc_dir[a] = 1;
        int32_t cur_arc = a;
        int8_t cur_dir = 1;
        for (;;) {
            int32_t exit_end = cur_dir > 0 ? head(cur_arc) : tail(cur_arc);
            int32_t nxt = conn[exit_end];
            if (nxt < 0) throw std::logic_error("open strand in diagram");
            int32_t narc = nxt / 2;
            int8_t ndir = (nxt % 2 == 0) ? 1 : -1;  // entering at tail: forward
            if (narc == a) break;
            if (d.arc_component[narc] >= 0) throw std::logic_error("bad orientation walk");
            d.arc_component[narc] = comp;
            d.arc_dir[narc] = ndir;
            cur_arc = narc;
            cur_dir = ndir;
        }
    }
    d.components = comps;
}

void count_signs(PlanarDiagram& d) {
    d.n_plus = d.n_minus = 0;
    for (const auto& c : d.crossings) (c.sign > 0 ? d.n_plus : d.n_minus)++;
}

}  // namespace

PlanarDiagram braid_closure(const BraidWord& w, SignConvention conv) {
    const int s = w.strands;
    const int n = w.crossings();
    PlanarDiagram d;
    d.strands = s;
    d.convention = conv;

    // events per strand position
    std::vector<std::vector<int>> events(s + 1);
    for (int t = 0; t < n; ++t) {
        int k = std::abs(w.letters[t]);
        events[k].push_back(t);
        events[k + 1].push_back(t);
    }
    // arcs: per position, one per gap between consecutive events (cyclically);
    // positions with no events close into free circles
    std::vector<int32_t> first_arc(s + 2, 0);
    int32_t acc = 0;
    for (int p = 1; p <= s; ++p) {
        first_arc[p] = acc;
        acc += events[p].empty() ? 1 : static_cast<int32_t>(events[p].size());
    }
    first_arc[s + 1] = acc;
    d.n_arcs = acc;

    auto seg_index = [&](int p, int t) {
        const auto& ev = events[p];
        return static_cast<int32_t>(std::lower_bound(ev.begin(), ev.end(), t) - ev.begin());
    };
    // arc above event t at position p is segment seg_index; below is the previous one
    auto arc_above = [&](int p, int t) { return first_arc[p] + seg_index(p, t); };
    auto arc_below = [&](int p, int t) {
        auto m = static_cast<int32_t>(events[p].size());
        return first_arc[p] + (seg_index(p, t) + m - 1) % m;
    };

    for (int t = 0; t < n; ++t) {
        int letter = w.letters[t];
        int k = std::abs(letter);
        Crossing c;
        c.bl = arc_below(k, t);
        c.br = arc_below(k + 1, t);
        c.tl = arc_above(k, t);
        c.tr = arc_above(k + 1, t);
        bool paper = conv == SignConvention::paper;
        c.sign = static_cast<int8_t>((letter > 0) == paper ? -1 : 1);
        // the 0-smoothing is the oriented (vertical) one exactly at positive crossings
        c.zero_is_vertical = c.sign > 0;
        c.letter = letter;
        d.crossings.push_back(c);
    }
    // free circles: close the untouched strands
    for (int p = 1; p <= s; ++p)
        if (events[p].empty()) d.welds.emplace_back(tail(first_arc[p]), head(first_arc[p]));

    orient_and_component(d);
    count_signs(d);
    return d;
}

int resolve_packed(const PlanarDiagram& d, uint64_t vertex, int32_t* scratch) {
    const int n = d.crossing_count();
    UnionFind uf(d.n_arcs);
    for (int t = 0; t < n; ++t) {
        const Crossing& c = d.crossings[t];
        bool one = (vertex >> t) & 1;
        bool vertical = one != c.zero_is_vertical;
        if (vertical) {
            uf.unite(c.bl, c.tl);
            uf.unite(c.br, c.tr);
        } else {
            uf.unite(c.bl, c.br);
            uf.unite(c.tl, c.tr);
        }
    }
    for (auto [e1, e2] : d.welds) uf.unite(e1 / 2, e2 / 2);
    // canonical circle ids in increasing least-arc order
    int circles = 0;
    for (int32_t a = 0; a < d.n_arcs; ++a) scratch[a] = -1;
    for (int32_t a = 0; a < d.n_arcs; ++a) {
        int32_t r = uf.find(a);
        if (scratch[r] < 0) scratch[r] = circles++;
    }
    std::vector<int32_t> root_id(d.n_arcs);
    for (int32_t a = 0; a < d.n_arcs; ++a) root_id[a] = scratch[a];
    for (int32_t a = 0; a < d.n_arcs; ++a) scratch[a] = root_id[uf.find(a)];
    return circles;
}

KauffmanState resolve(const PlanarDiagram& d, const std::vector<uint8_t>& vertex) {
    if (static_cast<int>(vertex.size()) != d.crossing_count())
        throw std::invalid_argument("resolve: vertex length must equal crossing count");
    uint64_t bits = 0;
    for (size_t t = 0; t < vertex.size(); ++t)
        if (vertex[t]) bits |= uint64_t(1) << t;
    KauffmanState st;
    st.vertex = vertex;
    st.arc_circle.assign(d.n_arcs, -1);
    st.circles = resolve_packed(d, bits, st.arc_circle.data());
    return st;
}

std::vector<std::vector<int64_t>> linking_numbers(const PlanarDiagram& d) {
    std::vector<std::vector<int64_t>> lk(d.components, std::vector<int64_t>(d.components, 0));
    std::vector<std::vector<int64_t>> twice(d.components, std::vector<int64_t>(d.components, 0));
    for (const auto& c : d.crossings) {
        int ca = d.arc_component[c.bl];
        int cb = d.arc_component[c.br];
        if (ca == cb) continue;
        twice[ca][cb] += c.sign;
        twice[cb][ca] += c.sign;
    }
    for (int a = 0; a < d.components; ++a)
        for (int b = 0; b < d.components; ++b) {
            if (twice[a][b] % 2 != 0) throw std::logic_error("odd inter-component crossing sum");
            lk[a][b] = twice[a][b] / 2;
        }
    return lk;
}

PlanarDiagram smooth_at(const PlanarDiagram& d, int index, int choice) {
    if (index < 0 || index >= d.crossing_count()) throw std::invalid_argument("smooth_at: bad index");
    if (choice != 0 && choice != 1) throw std::invalid_argument("smooth_at: choice must be 0 or 1");
    const Crossing& c = d.crossings[index];
    PlanarDiagram out;
    out.strands = d.strands;
    out.convention = d.convention;
    out.n_arcs = d.n_arcs;
    out.welds = d.welds;
    for (int t = 0; t < d.crossing_count(); ++t)
        if (t != index) out.crossings.push_back(d.crossings[t]);

    bool vertical = (choice == 1) != c.zero_is_vertical;
    if (vertical) {
        out.welds.emplace_back(head(c.bl), tail(c.tl));
        out.welds.emplace_back(head(c.br), tail(c.tr));
    } else {
        out.welds.emplace_back(head(c.bl), head(c.br));
        out.welds.emplace_back(tail(c.tl), tail(c.tr));
    }

    orient_and_component(out);
    // a crossing's sign flips once per strand traversed against construction
    // direction; divide out the parent's directions, apply the new ones
    for (auto& cr : out.crossings) {
        int fwd = cr.sign * d.arc_dir[cr.bl] * d.arc_dir[cr.br];
        cr.sign = static_cast<int8_t>(fwd * out.arc_dir[cr.bl] * out.arc_dir[cr.br]);
    }
    count_signs(out);
    return out;
}

}  // namespace kh
