#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace brickplan {

// Axis-aligned brick dimensions in LDU. One stud is 20 LDU, a brick is
// 24 LDU tall, a plate 8. `length` runs along the part's local x axis,
// `width` along local z, `height` along local y. `origin_offset_y` is the
// signed distance from the part origin down to the top face (-y is up, so
// top = y + origin_offset_y).
struct BrickSpec {
    std::string part_id;
    int length = 0;
    int width = 0;
    int height = 0;
    int origin_offset_y = 0;

    friend bool operator==(const BrickSpec&, const BrickSpec&) = default;
};

// Lookup table from part id to dimensions. Part ids are stored verbatim
// ("3001.dat" and "3001" are distinct keys); lookups fall back to the
// ".dat"-stripped id so models may reference either form.
class PartTable {
public:
    // Rectangular bricks and plates compiled into the library.
    static PartTable builtin();

    // JSON array of {part_id, length, width, height, origin_offset_y}.
    static PartTable from_json(const std::string& text);
    static PartTable load_file(const std::string& path);

    void add(BrickSpec spec);  // replaces any existing entry
    void merge(const PartTable& other);

    const BrickSpec* find(std::string_view part_id) const;
    const BrickSpec& at(std::string_view part_id) const;  // throws UnknownPartError

    std::size_t size() const { return specs_.size(); }
    std::vector<BrickSpec> entries() const;  // sorted by part id

    std::string to_json() const;

    friend bool operator==(const PartTable&, const PartTable&) = default;

private:
    std::map<std::string, BrickSpec, std::less<>> specs_;
};

}  // namespace brickplan
