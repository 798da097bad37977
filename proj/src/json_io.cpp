#include "kh/json_io.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace kh {

json to_json(const BigradedGroup& z) {
    json groups = json::array();
    for (auto& [ij, e] : z.groups) {
        json tor = json::array();
        for (auto& t : e.torsion) {
            if (t.fits_slong_p())
                tor.push_back(t.get_si());
            else
                tor.push_back(t.get_str());
        }
        groups.push_back({{"i", ij.first}, {"j", ij.second}, {"rank", e.rank}, {"torsion", tor}});
    }
    return {{"groups", groups}};
}

json to_json(const FieldTable& t) {
    json entries = json::array();
    for (auto& [ij, d] : t.dims)
        entries.push_back({{"i", ij.first}, {"j", ij.second}, {"dim", d}});
    return {{"field", t.field.name()}, {"entries", entries}};
}

json to_json(const LaurentPoly& p) {
    json coeffs = json::object();
    for (auto& [e, c] : p.coeffs) coeffs[std::to_string(e)] = c;
    return {{"variable", "q"}, {"coefficients", coeffs}, {"text", p.text()}};
}

json to_json(const SpectralPage& pg) {
    const char* name = pg.seq == SeqKind::lee      ? "lee"
                       : pg.seq == SeqKind::turner ? "turner"
                                                   : "bockstein";
    json table = json::array();
    for (auto& [ij, d] : pg.dims)
        table.push_back({{"i", ij.first}, {"j", ij.second}, {"dim", d}});
    json ranks = json::array();
    for (auto& [ij, r] : pg.ranks)
        ranks.push_back({{"i", ij.first}, {"j", ij.second}, {"rank", r}});
    return {{"sequence", name},
            {"coefficients", pg.coeff.name()},
            {"r", pg.r},
            {"bidegree", {pg.bidegree.first, pg.bidegree.second}},
            {"table", table},
            {"ranks", ranks}};
}

json to_json(const SpectralSequence& seq) {
    json pages = json::array();
    for (auto& pg : seq.pages) pages.push_back(to_json(pg));
    return {{"pages", pages}};
}

json to_json(const DiagonalProfile& prof) {
    json diag = json::array();
    for (auto& [i, vals] : prof.diagonals) {
        json vs = json::array();
        for (int v : vals) vs.push_back(v);
        diag.push_back({{"i", i}, {"values", vs}});
    }
    json primes = json::array();
    for (auto p : prof.torsion_primes) primes.push_back(p);
    return {{"diagonals", diag}, {"torsion_primes", primes}};
}

json to_json(const ThinRegion& r) {
    json sv = json::array();
    for (int s : r.s_values) sv.push_back(s);
    return {{"i1", r.i1}, {"i2", r.i2}, {"s_values", sv}};
}

json to_json(const HypothesisReport& rep) {
    return {{"i1", rep.i1},
            {"i2", rep.i2},
            {"s", rep.s},
            {"conditions",
             {{"thin", rep.cond1_thin},
              {"no_odd_torsion_boundary", rep.cond2_no_odd_torsion_boundary},
              {"first_row_torsion_free", rep.cond3_first_row_torsion_free},
              {"prior_row_vanishes", rep.cond4_prior_row_vanishes}}},
            {"stronger_path",
             {{"attempted", rep.stronger_path_attempted}, {"ok", rep.stronger_path_ok}}},
            {"verdict", rep.verdict},
            {"witnesses", rep.witnesses}};
}

json to_json(const PlanarDiagram& d) {
    json crossings = json::array();
    for (auto& c : d.crossings)
        crossings.push_back({{"bl", c.bl},
                             {"br", c.br},
                             {"tl", c.tl},
                             {"tr", c.tr},
                             {"sign", c.sign},
                             {"zero_is_vertical", c.zero_is_vertical},
                             {"letter", c.letter}});
    json welds = json::array();
    for (auto& [a, b] : d.welds) welds.push_back({a, b});
    json comps = json::array();
    for (auto c : d.arc_component) comps.push_back(c);
    return {{"strands", d.strands},
            {"arcs", d.n_arcs},
            {"crossings", crossings},
            {"welds", welds},
            {"n_plus", d.n_plus},
            {"n_minus", d.n_minus},
            {"components", d.components},
            {"arc_component", comps}};
}

json to_json(const CheckReport& rep) { return {{"ok", rep.ok}, {"violations", rep.violations}}; }

namespace {

template <class Cell>
std::string grid_text(const std::map<Bigrading, Cell>& cells,
                      const std::function<std::string(const Cell&)>& show) {
    if (cells.empty()) return "(empty)\n";
    int imin = INT32_MAX, imax = INT32_MIN, jmin = INT32_MAX, jmax = INT32_MIN;
    for (auto& [ij, c] : cells) {
        imin = std::min(imin, ij.first);
        imax = std::max(imax, ij.first);
        jmin = std::min(jmin, ij.second);
        jmax = std::max(jmax, ij.second);
    }
    size_t w = 6;
    std::map<Bigrading, std::string> text;
    for (auto& [ij, c] : cells) {
        text[ij] = show(c);
        w = std::max(w, text[ij].size() + 1);
    }
    std::ostringstream os;
    auto pad = [&](const std::string& s) {
        os << s;
        for (size_t k = s.size(); k < w; ++k) os << ' ';
    };
    pad("j\\i");
    for (int i = imin; i <= imax; ++i) pad(std::to_string(i));
    os << "\n";
    for (int j = jmax; j >= jmin; j -= 2) {
        bool any = false;
        for (int i = imin; i <= imax; ++i) any = any || text.count({i, j});
        if (!any) continue;
        pad(std::to_string(j));
        for (int i = imin; i <= imax; ++i) pad(text.count({i, j}) ? text[{i, j}] : ".");
        os << "\n";
    }
    return os.str();
}

std::string group_cell(const GroupEntry& e) {
    std::ostringstream os;
    bool first = true;
    if (e.rank) {
        os << "Z";
        if (e.rank > 1) os << "^" << e.rank;
        first = false;
    }
    std::map<std::string, int> count;
    std::vector<std::string> order;
    for (auto& t : e.torsion) {
        auto key = t.get_str();
        if (!count.count(key)) order.push_back(key);
        count[key]++;
    }
    for (auto& key : order) {
        if (!first) os << "+";
        os << "Z_" << key;
        if (count[key] > 1) os << "^" << count[key];
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

}  // namespace

std::string table_text(const BigradedGroup& z) {
    return grid_text<GroupEntry>(z.groups, group_cell);
}

std::string table_text(const FieldTable& t) {
    return grid_text<int64_t>(t.dims, [](const int64_t& d) { return std::to_string(d); });
}

std::string csv_text(const BigradedGroup& z) {
    std::ostringstream os;
    os << "i,j,rank,torsion\n";
    for (auto& [ij, e] : z.groups) {
        os << ij.first << "," << ij.second << "," << e.rank << ",";
        for (size_t t = 0; t < e.torsion.size(); ++t) {
            if (t) os << " ";
            os << e.torsion[t].get_str();
        }
        os << "\n";
    }
    return os.str();
}

std::string csv_text(const FieldTable& t) {
    std::ostringstream os;
    os << "i,j,dim\n";
    for (auto& [ij, d] : t.dims) os << ij.first << "," << ij.second << "," << d << "\n";
    return os.str();
}

}  // namespace kh
