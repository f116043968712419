// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dashgen/definition.hpp"
#include "dashgen/virtual_dashboard.hpp"

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace dashgen {

/// Exact rational, kept as integers so grid arithmetic never drifts
/// (floor(24 * 1/3) must be 8, not 7).
struct Ratio {
    int num = 1;
    int den = 3;

    int floor_of(int value) const { return (value * num) / den; }

    bool operator==(const Ratio&) const = default;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& message);
};

struct LayoutConfig {
    LayoutStyle style = LayoutStyle::pyramidal;
    int grid_columns = 24;
    int base_panel_height = 8;
    int per_row = 4;
    int max_depth = 3;
    Ratio parent_ratio = {1, 3};  // repeated only
    int item_gap = 1;             // rows between stacked items

    /// Throws ConfigError when any field is out of range (e.g. per_row > grid_columns).
    void validate() const;
};

/// Parse the layout configuration file (YAML). Only `style` is required;
/// unknown keys are rejected. parent_ratio accepts "1/3" or a decimal.
LayoutConfig parse_layout_config(const std::string& yaml_text);

struct LayoutError {
    enum class Kind { depth_exceeded };

    Kind kind = Kind::depth_exceeded;
    std::string node;   // offending Composed visualization
    int depth = 0;      // its depth; children would sit at depth + 1
    int max_depth = 0;

    /// e.g. "DepthExceeded node=C depth=3 max=3"
    std::string format() const;
};

using LayoutResult = std::variant<VirtualDashboard, LayoutError>;

/// Dispatch to the style-specific transformation. The produced dashboard
/// always passes check_geometry.
LayoutResult build_layout(const std::vector<VisNode>& roots, const LayoutConfig& cfg);

/// Single page; each root becomes a full-width item with the representative
/// on top and children below in rows of per_row equal-width columns.
LayoutResult layout_pyramidal(const std::vector<VisNode>& roots, const LayoutConfig& cfg);

/// Single page; each root becomes a horizontal band with the representative
/// at the left and children stacked vertically to the right.
LayoutResult layout_repeated(const std::vector<VisNode>& roots, const LayoutConfig& cfg);

/// Multi-page; the entry page holds one equal-sized cell per root, every
/// Composed node gets a dedicated linked page. Never fails (no depth cap).
VirtualDashboard layout_nested(const std::vector<VisNode>& roots, const LayoutConfig& cfg);

}  // namespace dashgen
