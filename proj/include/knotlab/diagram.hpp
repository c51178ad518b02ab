#pragma once

#include "knotlab/common.hpp"

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace knotlab {

// Crossing X[i,j,k,l]: edge labels counterclockwise from the incoming under-strand.
using PDCrossing = std::array<int, 4>;

struct DiagramRecord {
    std::vector<PDCrossing> pd;
    int crossings() const { return static_cast<int>(pd.size()); }
    bool alternating() const;
};

// Accepts "PD[X[1,4,2,5],...]" and "[[1,4,2,5],...]".
DiagramRecord parse_pd(const std::string& text);
std::string pd_str(const DiagramRecord& d);

// Gauss code: crossing i is +i on the over pass, -i on the under pass.
// signs[i-1] is +1 for a positive crossing; when empty, signs are searched
// until the code closes up to a planar diagram (first sign fixed to +1).
DiagramRecord from_gauss(const std::vector<int>& code, std::vector<int> signs = {});
// Accepts "GC[-1,3,-2,1,-3,2]", "{-1,3,...}" or bare "-1 3 -2 ...", with
// optional signs after ';' as "+,-,+" or "1,-1,1".
DiagramRecord parse_gauss(const std::string& text);
// PD text, else Gauss code.
DiagramRecord parse_diagram(const std::string& text);

struct PlanarMultigraph {
    int vertices = 0;
    std::vector<std::pair<int, int>> edges;  // loops allowed
    int faces = 0;                           // faces of the embedding (vertices of the dual)
    int crossing_count() const { return static_cast<int>(edges.size()); }
};

struct FaceStructure {
    int faces = 0;
    // face_of_corner[x][k]: face at the corner between slots k and k+1 of crossing x
    std::vector<std::array<int, 4>> face_of_corner;
    std::vector<int> color;  // checkerboard colour per face
};

FaceStructure trace_faces(const DiagramRecord& d);

// Graph on the faces of one colour, one edge per crossing.
PlanarMultigraph colour_graph(const DiagramRecord& d, const FaceStructure& fs, int colour);

// Both checkerboard graphs are built; the one whose tree count equals det is taken,
// ties going to fewer vertices.
PlanarMultigraph black_graph(const DiagramRecord& d, std::optional<long long> det = std::nullopt);

BigInt spanning_tree_count(const PlanarMultigraph& g);

// For a three-vertex graph: sorted edge counts between each vertex pair.
std::optional<std::array<int, 3>> theta_multiplicities(const PlanarMultigraph& g);

enum class CrowellClass { Torus2, Twist, Other };

struct CrowellVerdict {
    bool crowell_bound = false;   // det >= 3c - 8
    bool asserted = false;        // bound required for this class
    bool holds = true;            // asserted implies crowell_bound
    bool det_exceeds_2c = false;  // det > 2c
    bool listed_exception = false;  // torus2, twist, 6_2 or 7_3 data
    bool corollary_holds = true;  // det > 2c or listed exception
};

CrowellVerdict crowell_inequality_check(long long det, int c, CrowellClass cls);

}  // namespace knotlab
