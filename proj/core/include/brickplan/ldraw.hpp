#pragma once

#include <array>
#include <string>
#include <vector>

#include "brickplan/part_table.hpp"
#include "brickplan/rational.hpp"

namespace brickplan {

// One type-1 LDraw line resolved against the part table. Positions are the
// footprint centre in x/z; -y is up. `rot` is the row-major 3x3 rotation
// from the line (a b c / d e f / g h i).
struct LegoObject {
    int id = 0;  // 1-based order of appearance
    int color = 0;
    std::array<Rational, 3> pos;
    std::array<Rational, 9> rot;
    std::string part_id;
    BrickSpec spec;
};

struct ModelBOM {
    std::string name;
    std::vector<LegoObject> objects;
    std::vector<std::string> warnings;  // skipped geometry lines
};

// Parses LDraw text. Type-0 lines are ignored, types 2-5 are skipped with a
// warning, type-1 lines become objects. Throws ParseError on malformed
// lines and UnknownPartError for parts missing from the table.
ModelBOM parse_ldraw(const std::string& text, const PartTable& table,
                     const std::string& name = "");
ModelBOM load_ldraw_file(const std::string& path, const PartTable& table);

std::string write_ldraw(const ModelBOM& bom);

// Footprint of a rotated brick in world axes: extent along world x and
// world z, in LDU.
struct Footprint {
    int along_x = 0;
    int along_z = 0;
};

// Requires the rotation to be a signed axis permutation that maps the
// brick's local up axis to the world up axis (either sign); anything else
// throws OrientationError.
Footprint oriented_footprint(const LegoObject& obj);

// World level of the top face (smaller y is higher up) and bottom face.
Rational top_y(const LegoObject& obj);
Rational bottom_y(const LegoObject& obj);

}  // namespace brickplan
