// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dashgen {

enum class LayoutStyle { pyramidal, repeated, nested };

std::string to_string(LayoutStyle style);
std::optional<LayoutStyle> layout_style_from_string(std::string_view name);

/// Integer cell rectangle on a page grid, origin top-left.
struct GridRect {
    int x = 0;
    int y = 0;
    int w = 1;
    int h = 1;

    int right() const { return x + w; }
    int bottom() const { return y + h; }

    /// Interiors intersect; edge-adjacency does not count.
    bool overlaps(const GridRect& other) const {
        return x < other.right() && other.x < right() && y < other.bottom() && other.y < bottom();
    }

    bool contains(const GridRect& inner) const {
        return inner.x >= x && inner.y >= y && inner.right() <= right() && inner.bottom() <= bottom();
    }

    bool operator==(const GridRect&) const = default;
};

/// A Simple visualization placed on the grid. When the placement stands for
/// a Composed visualization, `represents` names it; `link_to` may only be set
/// on such representative placements.
struct PlacedVisualization {
    std::string vis_name;
    GridRect rect;
    std::optional<std::string> represents;
    std::optional<std::string> link_to;  // target page_id

    bool operator==(const PlacedVisualization&) const = default;
};

/// Container of related placements with a bounding rectangle.
struct DashboardItem {
    std::string item_id;
    GridRect bounds;
    std::vector<PlacedVisualization> placements;

    bool operator==(const DashboardItem&) const = default;
};

struct DashboardPage {
    std::string page_id;  // stable slug
    std::string title;
    int grid_columns = 24;
    std::vector<DashboardItem> items;
    std::optional<std::string> parent_page;

    bool operator==(const DashboardPage&) const = default;
};

/// Technology-agnostic dashboard: linked pages of spatially-arranged items.
/// pages[0] is the entry page.
struct VirtualDashboard {
    std::vector<DashboardPage> pages;
    LayoutStyle layout_style = LayoutStyle::pyramidal;

    const DashboardPage* find_page(std::string_view page_id) const;

    bool operator==(const VirtualDashboard&) const = default;
};

enum class GeometryViolationKind { out_of_bounds, overlap, dangling_link, duplicate_page_id };

struct GeometryViolation {
    GeometryViolationKind kind;
    std::string page_id;
    std::string message;

    bool operator==(const GeometryViolation&) const = default;
};

/// Report every out-of-bounds rect, overlapping pair (placements within an
/// item, item bounds on a page), dangling link and duplicate page id.
/// Empty result = geometrically sound.
std::vector<GeometryViolation> check_geometry(const VirtualDashboard& vd);

class IrFormatError : public std::runtime_error {
public:
    explicit IrFormatError(const std::string& message);
};

inline constexpr int kIrSchemaVersion = 1;

/// Canonical JSON form: sorted keys, two-space indent, trailing newline.
/// Byte-deterministic; injective over structurally distinct dashboards.
std::string serialize_ir(const VirtualDashboard& vd);

/// Strict inverse of serialize_ir. Throws IrFormatError on malformed input,
/// unknown keys, or schema-version mismatch.
VirtualDashboard parse_ir(const std::string& text);

}  // namespace dashgen
