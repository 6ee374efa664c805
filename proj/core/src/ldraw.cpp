#include "brickplan/ldraw.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "brickplan/errors.hpp"

namespace brickplan {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

Rational parse_number(const std::string& tok, int line_no) {
    try {
        return Rational::parse(tok);
    } catch (const Error& e) {
        throw ParseError("line " + std::to_string(line_no) + ": " + e.what(), line_no);
    }
}

// The rotation must be a signed permutation of the axes: every column has
// exactly one entry of magnitude 1 and the columns hit distinct rows.
bool is_signed_axis_permutation(const std::array<Rational, 9>& r) {
    const Rational one(1);
    bool row_used[3] = {false, false, false};
    for (int col = 0; col < 3; ++col) {
        int nonzero_row = -1;
        for (int row = 0; row < 3; ++row) {
            const Rational& v = r[static_cast<std::size_t>(3 * row + col)];
            if (v.is_zero()) continue;
            if (abs(v) != one || nonzero_row != -1) return false;
            nonzero_row = row;
        }
        if (nonzero_row == -1 || row_used[nonzero_row]) return false;
        row_used[nonzero_row] = true;
    }
    return true;
}

}  // namespace

ModelBOM parse_ldraw(const std::string& text, const PartTable& table, const std::string& name) {
    ModelBOM bom;
    bom.name = name;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::vector<std::string> tokens = tokenize(line);
        if (tokens.empty()) continue;
        const std::string& type = tokens[0];
        if (type == "0") continue;
        if (type == "2" || type == "3" || type == "4" || type == "5") {
            bom.warnings.push_back("line " + std::to_string(line_no) + ": skipped line type " +
                                   type);
            continue;
        }
        if (type != "1")
            throw ParseError(
                "line " + std::to_string(line_no) + ": unrecognized line type '" + type + "'",
                line_no);
        if (tokens.size() != 15)
            throw ParseError("line " + std::to_string(line_no) + ": type-1 line has " +
                                 std::to_string(tokens.size() - 1) + " fields, expected 14",
                             line_no);
        LegoObject obj;
        obj.id = static_cast<int>(bom.objects.size()) + 1;
        const Rational color = parse_number(tokens[1], line_no);
        if (!color.is_integer())
            throw ParseError("line " + std::to_string(line_no) + ": non-integer colour", line_no);
        obj.color = static_cast<int>(color.num());
        for (int k = 0; k < 3; ++k)
            obj.pos[static_cast<std::size_t>(k)] = parse_number(tokens[static_cast<std::size_t>(2 + k)], line_no);
        for (int k = 0; k < 9; ++k)
            obj.rot[static_cast<std::size_t>(k)] = parse_number(tokens[static_cast<std::size_t>(5 + k)], line_no);
        obj.part_id = tokens[14];
        const BrickSpec* spec = table.find(obj.part_id);
        if (!spec)
            throw UnknownPartError("line " + std::to_string(line_no) + ": unknown part '" +
                                       obj.part_id + "'",
                                   obj.part_id);
        obj.spec = *spec;
        bom.objects.push_back(std::move(obj));
    }
    return bom;
}

ModelBOM load_ldraw_file(const std::string& path, const PartTable& table) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string name = path;
    if (const auto slash = name.find_last_of("/\\"); slash != std::string::npos)
        name = name.substr(slash + 1);
    if (const auto dot = name.find_last_of('.'); dot != std::string::npos)
        name = name.substr(0, dot);
    return parse_ldraw(buf.str(), table, name);
}

std::string write_ldraw(const ModelBOM& bom) {
    std::ostringstream out;
    if (!bom.name.empty()) out << "0 " << bom.name << "\n";
    for (const LegoObject& obj : bom.objects) {
        out << "1 " << obj.color;
        for (const Rational& v : obj.pos) out << " " << v.to_string();
        for (const Rational& v : obj.rot) out << " " << v.to_string();
        out << " " << obj.part_id << "\n";
    }
    return out.str();
}

Footprint oriented_footprint(const LegoObject& obj) {
    const auto& r = obj.rot;
    // r[4] is the world-y component of the local up axis; r[0] and r[2] tell
    // whether local x or local z lands on world x.
    if (!is_signed_axis_permutation(r) || r[4].is_zero())
        throw OrientationError("brick " + std::to_string(obj.id) +
                               ": unsupported orientation (not an upright axis-aligned rotation)");
    if (!r[0].is_zero()) return {obj.spec.length, obj.spec.width};
    return {obj.spec.width, obj.spec.length};
}

Rational top_y(const LegoObject& obj) {
    // World levels of the two horizontal faces; the smaller y is the top.
    const Rational sign = obj.rot[4];
    const Rational a = obj.pos[1] + sign * Rational(obj.spec.origin_offset_y);
    const Rational b = a + sign * Rational(obj.spec.height);
    return a < b ? a : b;
}

Rational bottom_y(const LegoObject& obj) {
    const Rational sign = obj.rot[4];
    const Rational a = obj.pos[1] + sign * Rational(obj.spec.origin_offset_y);
    const Rational b = a + sign * Rational(obj.spec.height);
    return a < b ? b : a;
}

}  // namespace brickplan
