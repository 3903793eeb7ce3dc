#include <doctest.h>

#include <cmath>

#include "occbench/rng.hpp"
#include "occbench/sprite.hpp"
#include "occbench/sprite_library.hpp"
#include "support/fixtures.hpp"

using namespace occbench;

TEST_CASE("import_sprite computes footprints and trims") {
  SUBCASE("fully opaque 10x10 image") {
    OccluderSprite sprite = import_sprite(fixtures::make_opaque_rect_rgba(10, 10, 1, 2, 3), "s",
                                          OccluderCategory::Indoor, "s");
    CHECK(sprite.footprint_area == 100);
    CHECK(sprite.rgba.width == 10);
    CHECK(sprite.rgba.height == 10);
  }
  SUBCASE("fully transparent image") {
    Image image(10, 10, 4);
    CHECK_THROWS_AS(import_sprite(image, "s", OccluderCategory::Indoor, "s"), EmptySpriteError);
  }
  SUBCASE("opaque 4x4 core is trimmed out of a 10x10 canvas") {
    Image image(10, 10, 4);
    for (int y = 3; y < 7; ++y) {
      for (int x = 3; x < 7; ++x) {
        image.at(x, y, 0) = 200;
        image.at(x, y, 3) = 255;
      }
    }
    OccluderSprite sprite = import_sprite(image, "s", OccluderCategory::Indoor, "s");
    CHECK(sprite.rgba.width == 4);
    CHECK(sprite.rgba.height == 4);
    CHECK(sprite.footprint_area == 16);
  }
  SUBCASE("category strings") {
    CHECK(parse_category("indoor") == OccluderCategory::Indoor);
    CHECK(parse_category("outdoor") == OccluderCategory::Outdoor);
    CHECK_THROWS_AS(parse_category("space"), UnknownCategoryError);
  }
}

TEST_CASE("import is idempotent on its own output") {
  OccluderSprite first = import_sprite(fixtures::make_disk_rgba(31, 9, 8, 7), "disk",
                                       OccluderCategory::Outdoor, "disk");
  OccluderSprite again =
      import_sprite(first.rgba, first.sprite_id, first.category, first.source_label);
  CHECK(again.rgba == first.rgba);
  CHECK(again.footprint_area == first.footprint_area);
}

TEST_CASE("fit_scale_for_budget targets the budget midpoint") {
  // 10x10 opaque sprite: footprint 100 px^2. Region 40x25 = 1000 px^2.
  OccluderSprite sprite = import_sprite(fixtures::make_opaque_rect_rgba(10, 10, 5, 5, 5), "s",
                                        OccluderCategory::Indoor, "s");
  RegionSpec region{RegionKind::FG, Rect{0, 0, 40, 25}, 40, 25};

  SUBCASE("footprint 100, region 1000, budget [0.2,0.4]") {
    double scale = fit_scale_for_budget(sprite, region, AreaBudget{0.2, 0.4});
    CHECK(scale == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    // Raster check: scaled footprint fraction within the budget +- 2%.
    double fraction = static_cast<double>(scaled_footprint(sprite, scale).pixel_count()) / 1000.0;
    CHECK(fraction >= 0.2 - 0.02);
    CHECK(fraction <= 0.4 + 0.02);
  }
  SUBCASE("footprint 250, region 1000, budget [0.2,0.4]") {
    OccluderSprite wide = import_sprite(fixtures::make_opaque_rect_rgba(25, 10, 5, 5, 5), "w",
                                        OccluderCategory::Indoor, "w");
    double scale = fit_scale_for_budget(wide, region, AreaBudget{0.2, 0.4});
    CHECK(scale == doctest::Approx(std::sqrt(1.2)).epsilon(1e-12));
    double fraction = static_cast<double>(scaled_footprint(wide, scale).pixel_count()) / 1000.0;
    CHECK(fraction >= 0.2 - 0.02);
    CHECK(fraction <= 0.4 + 0.02);
  }
  SUBCASE("aspect ratio can make the full budget unfittable") {
    // Sprite 50x2: footprint 100. Budget [1,1] needs scale sqrt(10), but the
    // region rect is only 40 wide.
    OccluderSprite bar = import_sprite(fixtures::make_opaque_rect_rgba(50, 2, 5, 5, 5), "bar",
                                       OccluderCategory::Indoor, "bar");
    RegionSpec small{RegionKind::FG, Rect{0, 0, 10, 10}, 10, 10};
    CHECK_THROWS_AS(fit_scale_for_budget(bar, small, AreaBudget{1.0, 1.0}), UnfittableError);
  }
  SUBCASE("budget must be a sub-interval of (0,1]") {
    CHECK_THROWS_AS(fit_scale_for_budget(sprite, region, AreaBudget{0.0, 0.4}), UnfittableError);
    CHECK_THROWS_AS(fit_scale_for_budget(sprite, region, AreaBudget{0.2, 1.2}), UnfittableError);
  }
}

TEST_CASE("raster footprint tracks the algebraic budget across random fits") {
  OccluderSet set = fixtures::make_occluder_set();
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(derive_seed(55, static_cast<std::uint64_t>(trial)));
    const OccluderSprite& sprite = set.sprites[rng.uniform_index(set.sprites.size())];
    int rw = 60 + static_cast<int>(rng.uniform_index(100));
    int rh = 50 + static_cast<int>(rng.uniform_index(80));
    RegionSpec region{RegionKind::FG, Rect{0, 0, rw, rh}, rw, rh};
    double lo = rng.uniform_in(0.05, 0.4);
    double hi = lo + rng.uniform_in(0.05, 0.3);
    double scale;
    try {
      scale = fit_scale_for_budget(sprite, region, AreaBudget{lo, hi});
    } catch (const UnfittableError&) {
      continue;
    }
    double fraction = static_cast<double>(scaled_footprint(sprite, scale).pixel_count()) /
                      static_cast<double>(region_area(region));
    CHECK(fraction >= lo - 0.02);
    CHECK(fraction <= hi + 0.02);
  }
}

TEST_CASE("sprite library round-trips through the directory layout") {
  fixtures::TempDir tmp;
  fixtures::write_occluder_library(tmp.path() / "lib");
  OccluderSet all = load_occluder_library(tmp.path() / "lib");
  CHECK(all.sprites.size() == 4);

  OccluderSet indoor = load_occluder_library(tmp.path() / "lib", "indoor");
  CHECK(indoor.sprites.size() == 2);
  for (const auto& sprite : indoor.sprites) CHECK(sprite.category == OccluderCategory::Indoor);

  OccluderSet original = fixtures::make_occluder_set();
  for (const auto& sprite : original.sprites) {
    const OccluderSprite* loaded = all.find(sprite.sprite_id);
    REQUIRE(loaded != nullptr);
    CHECK(loaded->rgba == sprite.rgba);
    CHECK(loaded->footprint_area == sprite.footprint_area);
    CHECK(loaded->source_label == sprite.source_label);
  }
}

TEST_CASE("import_occluder_directory builds a loadable library") {
  fixtures::TempDir tmp;
  std::filesystem::path raw = tmp.path() / "raw";
  std::filesystem::create_directories(raw);
  write_png(raw / "blob.png", fixtures::make_disk_rgba(40, 10, 20, 30));
  write_png(raw / "tile.png", fixtures::make_opaque_rect_rgba(20, 12, 1, 2, 3));
  // A sidecar can override metadata.
  write_text_file(raw / "tile.json", R"({"category": "outdoor", "source_label": "voc_table"})");

  ImportSummary summary = import_occluder_directory(raw, "indoor", tmp.path() / "lib");
  CHECK(summary.imported.size() == 2);
  CHECK(summary.failures.empty());

  OccluderSet set = load_occluder_library(tmp.path() / "lib");
  const OccluderSprite* tile = set.find("tile");
  REQUIRE(tile != nullptr);
  CHECK(tile->category == OccluderCategory::Outdoor);
  CHECK(tile->source_label == "voc_table");
  CHECK(set.find("blob")->category == OccluderCategory::Indoor);
}
