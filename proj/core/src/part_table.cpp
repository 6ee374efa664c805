#include "brickplan/part_table.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "brickplan/errors.hpp"

namespace brickplan {

namespace {

constexpr int kStud = 20;
constexpr int kBrickHeight = 24;
constexpr int kPlateHeight = 8;

std::string strip_dat(std::string_view id) {
    if (id.size() > 4 && (id.ends_with(".dat") || id.ends_with(".DAT")))
        return std::string(id.substr(0, id.size() - 4));
    return std::string(id);
}

}  // namespace

PartTable PartTable::builtin() {
    PartTable t;
    // Bricks: {part id, studs along x, studs along z}.
    struct Entry {
        const char* id;
        int studs_x;
        int studs_z;
        int height;
    };
    static constexpr Entry entries[] = {
        // 1xN bricks
        {"3005", 1, 1, kBrickHeight},
        {"3004", 2, 1, kBrickHeight},
        {"3622", 3, 1, kBrickHeight},
        {"3010", 4, 1, kBrickHeight},
        {"3009", 6, 1, kBrickHeight},
        {"3008", 8, 1, kBrickHeight},
        {"6111", 10, 1, kBrickHeight},
        // 2xN bricks
        {"3003", 2, 2, kBrickHeight},
        {"3002", 3, 2, kBrickHeight},
        {"3001", 4, 2, kBrickHeight},
        {"2456", 6, 2, kBrickHeight},
        {"3007", 8, 2, kBrickHeight},
        {"3006", 10, 2, kBrickHeight},
        // plates
        {"3024", 1, 1, kPlateHeight},
        {"3023", 2, 1, kPlateHeight},
        {"3710", 4, 1, kPlateHeight},
        {"3666", 6, 1, kPlateHeight},
        {"3460", 8, 1, kPlateHeight},
        {"3022", 2, 2, kPlateHeight},
        {"3020", 4, 2, kPlateHeight},
        {"3795", 6, 2, kPlateHeight},
        {"3034", 8, 2, kPlateHeight},
        {"3035", 8, 4, kPlateHeight},
        {"3030", 10, 4, kPlateHeight},
    };
    for (const Entry& e : entries) {
        t.add({e.id, e.studs_x * kStud, e.studs_z * kStud, e.height, 0});
    }
    return t;
}

PartTable PartTable::from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("part table: ") + e.what());
    }
    if (!doc.is_array()) throw ParseError("part table: expected a JSON array");
    PartTable t;
    for (const auto& item : doc) {
        if (!item.is_object()) throw ParseError("part table: expected an object per part");
        BrickSpec spec;
        try {
            spec.part_id = item.at("part_id").get<std::string>();
            spec.length = item.at("length").get<int>();
            spec.width = item.at("width").get<int>();
            spec.height = item.at("height").get<int>();
            spec.origin_offset_y = item.value("origin_offset_y", 0);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("part table: ") + e.what());
        }
        if (spec.part_id.empty() || spec.length <= 0 || spec.width <= 0 || spec.height <= 0)
            throw ParseError("part table: part '" + spec.part_id + "' has non-positive dimensions");
        t.add(std::move(spec));
    }
    return t;
}

PartTable PartTable::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open part table '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

void PartTable::add(BrickSpec spec) {
    std::string key = spec.part_id;
    specs_.insert_or_assign(std::move(key), std::move(spec));
}

void PartTable::merge(const PartTable& other) {
    for (const auto& [key, spec] : other.specs_) specs_.insert_or_assign(key, spec);
}

const BrickSpec* PartTable::find(std::string_view part_id) const {
    auto it = specs_.find(part_id);
    if (it == specs_.end()) it = specs_.find(strip_dat(part_id));
    return it == specs_.end() ? nullptr : &it->second;
}

const BrickSpec& PartTable::at(std::string_view part_id) const {
    const BrickSpec* spec = find(part_id);
    if (!spec)
        throw UnknownPartError("unknown part '" + std::string(part_id) + "'",
                               std::string(part_id));
    return *spec;
}

std::vector<BrickSpec> PartTable::entries() const {
    std::vector<BrickSpec> out;
    out.reserve(specs_.size());
    for (const auto& [key, spec] : specs_) out.push_back(spec);
    return out;
}

std::string PartTable::to_json() const {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& [key, spec] : specs_) {
        doc.push_back({{"part_id", spec.part_id},
                       {"length", spec.length},
                       {"width", spec.width},
                       {"height", spec.height},
                       {"origin_offset_y", spec.origin_offset_y}});
    }
    return doc.dump(2) + "\n";
}

}  // namespace brickplan
