#include <doctest.h>

#include <string>

#include "brickplan/errors.hpp"
#include "brickplan/ldraw.hpp"
#include "brickplan/part_table.hpp"
#include "support/model_builder.hpp"

using namespace brickplan;
using testsupport::ldraw_line;

namespace {
const PartTable& table() {
    static const PartTable t = PartTable::builtin();
    return t;
}
}  // namespace

TEST_CASE("type-1 lines become objects in file order") {
    const std::string text =
        "0 two bricks\n"
        "1 4 0 -24 0 1 0 0 0 1 0 0 0 1 3001.dat\n"
        "\n"
        "1 2 20 0 10.5 1 0 0 0 1 0 0 0 1 3003\n";
    const ModelBOM bom = parse_ldraw(text, table(), "two");
    REQUIRE(bom.objects.size() == 2);
    CHECK(bom.name == "two");
    CHECK(bom.warnings.empty());

    const LegoObject& first = bom.objects[0];
    CHECK(first.id == 1);
    CHECK(first.color == 4);
    CHECK(first.pos[1] == Rational(-24));
    CHECK(first.part_id == "3001.dat");
    CHECK(first.spec.length == 80);

    const LegoObject& second = bom.objects[1];
    CHECK(second.id == 2);
    CHECK(second.pos[2] == Rational(21, 2));
    CHECK(second.spec.length == 40);
}

TEST_CASE("comments are ignored and geometry lines are skipped with warnings") {
    const std::string text =
        "0 header\r\n"
        "2 24 0 0 0 1 1 1\n"
        "1 4 0 0 0 1 0 0 0 1 0 0 0 1 3005\n"
        "5 24 0 0 0 1 1 1 2 2 2 3 3 3\n";
    const ModelBOM bom = parse_ldraw(text, table());
    CHECK(bom.objects.size() == 1);
    REQUIRE(bom.warnings.size() == 2);
    CHECK(bom.warnings[0] == "line 2: skipped line type 2");
    CHECK(bom.warnings[1] == "line 4: skipped line type 5");
}

TEST_CASE("malformed lines carry the line number") {
    try {
        parse_ldraw("0 ok\n1 4 0 0 0 1 0 0 0 1 0 0 0 1\n", table());
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }

    CHECK_THROWS_AS(parse_ldraw("9 nonsense\n", table()), ParseError);
    CHECK_THROWS_AS(parse_ldraw("1 4 x 0 0 1 0 0 0 1 0 0 0 1 3001\n", table()), ParseError);
    CHECK_THROWS_AS(parse_ldraw("1 4.5 0 0 0 1 0 0 0 1 0 0 0 1 3001\n", table()), ParseError);
}

TEST_CASE("unknown parts name the part") {
    try {
        parse_ldraw("1 4 0 0 0 1 0 0 0 1 0 0 0 1 width5.dat\n", table());
        FAIL("expected UnknownPartError");
    } catch (const UnknownPartError& e) {
        CHECK(e.part_id == "width5.dat");
    }
}

TEST_CASE("footprints follow the rotation") {
    const ModelBOM bom = parse_ldraw(
        ldraw_line("3001", "0", "0", "0") + "\n" +
            ldraw_line("3001", "0", "0", "0", testsupport::kQuarterTurnRot) + "\n",
        table());
    const Footprint plain = oriented_footprint(bom.objects[0]);
    CHECK(plain.along_x == 80);
    CHECK(plain.along_z == 40);
    const Footprint turned = oriented_footprint(bom.objects[1]);
    CHECK(turned.along_x == 40);
    CHECK(turned.along_z == 80);
}

TEST_CASE("off-grid rotations are rejected") {
    // 45 degree turn about y.
    const std::string tilted = ldraw_line("3001", "0", "0", "0",
                                          "0.7 0 0.7 0 1 0 -0.7 0 0.7");
    CHECK_THROWS_AS(oriented_footprint(parse_ldraw(tilted, table()).objects[0]),
                    OrientationError);
    // Up axis mapped to world x.
    const std::string toppled = ldraw_line("3001", "0", "0", "0", "0 1 0 1 0 0 0 0 1");
    CHECK_THROWS_AS(oriented_footprint(parse_ldraw(toppled, table()).objects[0]),
                    OrientationError);
    // Scaled matrix.
    const std::string scaled = ldraw_line("3001", "0", "0", "0", "2 0 0 0 2 0 0 0 2");
    CHECK_THROWS_AS(oriented_footprint(parse_ldraw(scaled, table()).objects[0]),
                    OrientationError);
}

TEST_CASE("face levels respect the up direction") {
    const ModelBOM bom = parse_ldraw(ldraw_line("3001", "0", "-24", "0"), table());
    CHECK(top_y(bom.objects[0]) == Rational(-24));
    CHECK(bottom_y(bom.objects[0]) == Rational(0));

    // Mirrored vertically: the brick extends upward from its origin.
    const ModelBOM flipped =
        parse_ldraw(ldraw_line("3001", "0", "0", "0", "1 0 0 0 -1 0 0 0 1"), table());
    CHECK(top_y(flipped.objects[0]) == Rational(-24));
    CHECK(bottom_y(flipped.objects[0]) == Rational(0));
}

TEST_CASE("ldraw round trip") {
    const std::string text = testsupport::pipeline_model();
    const ModelBOM bom = parse_ldraw(text, table(), "pipeline");
    const ModelBOM again = parse_ldraw(write_ldraw(bom), table(), "pipeline");
    REQUIRE(again.objects.size() == bom.objects.size());
    for (std::size_t i = 0; i < bom.objects.size(); ++i) {
        CHECK(again.objects[i].pos == bom.objects[i].pos);
        CHECK(again.objects[i].rot == bom.objects[i].rot);
        CHECK(again.objects[i].part_id == bom.objects[i].part_id);
    }
}

TEST_CASE("missing model files raise io errors") {
    CHECK_THROWS_AS(load_ldraw_file("/nonexistent/model.ldr", table()), Error);
}
