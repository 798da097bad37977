#pragma once

#include <cstdint>
#include <vector>

#include "kh/braid.hpp"

namespace kh {

// Which geometric crossing a positive braid letter closes to. The paper's
// torus-link families need sigma_i to be a negative crossing under the
// all-strands-up orientation; `flipped` is the escape hatch.
enum class SignConvention { paper, flipped };

// Oriented 4-valent diagram: arcs joined at crossings and welds. Arcs are the
// maximal strand segments of a braid closure (one closed arc per untouched
// strand position); a weld permanently joins two arc ends, which is how
// smoothed crossings are represented. Arc ends are encoded 2*arc + e with
// e = 0 the tail and e = 1 the head in construction direction (upward for
// braid closures).
struct Crossing {
    int32_t bl, br, tl, tr;  // arcs at the four slots, bottom-left first
    int8_t sign;             // crossing sign under the diagram's orientation
    bool zero_is_vertical;   // 0-smoothing geometry; fixed by over/under data
    int letter;              // originating braid letter, 0 if none
};

struct PlanarDiagram {
    int strands = 0;
    SignConvention convention = SignConvention::paper;
    int n_arcs = 0;
    std::vector<Crossing> crossings;
    std::vector<std::pair<int32_t, int32_t>> welds;  // arc-end pairs
    int n_plus = 0, n_minus = 0;

    int components = 0;
    std::vector<int> arc_component;  // arc -> component id (by least arc)
    std::vector<int8_t> arc_dir;     // +1 along construction direction, -1 reversed

    int crossing_count() const { return static_cast<int>(crossings.size()); }
    int writhe() const { return n_plus - n_minus; }
};

// A Kauffman resolution of every crossing: bit t of `vertex` picks the
// 1-smoothing of crossing t.
struct KauffmanState {
    std::vector<uint8_t> vertex;
    int circles = 0;
    std::vector<int32_t> arc_circle;  // arc -> circle id, canonical by least arc
};

PlanarDiagram braid_closure(const BraidWord& w, SignConvention conv = SignConvention::paper);

KauffmanState resolve(const PlanarDiagram& d, const std::vector<uint8_t>& vertex);

// Same resolution with the vertex packed into bits (crossing t -> bit t).
// `scratch` must have size >= n_arcs; returns circle count and fills
// arc->circle ids into scratch.
int resolve_packed(const PlanarDiagram& d, uint64_t vertex, int32_t* scratch);

// Pairwise linking numbers, components indexed as in arc_component.
std::vector<std::vector<int64_t>> linking_numbers(const PlanarDiagram& d);

// Replace crossing `index` by its `choice`-smoothing (welds), then reorient
// each component consistently and recompute signs.
PlanarDiagram smooth_at(const PlanarDiagram& d, int index, int choice);

}  // namespace kh
