// SPDX-License-Identifier: Apache-2.0

#include "dashgen/layout.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>

namespace dashgen {

ConfigError::ConfigError(const std::string& message)
    : std::runtime_error("layout config error: " + message) {}

void LayoutConfig::validate() const {
    if (grid_columns < 1) throw ConfigError("grid_columns must be positive");
    if (base_panel_height < 1) throw ConfigError("base_panel_height must be positive");
    if (per_row < 1) throw ConfigError("per_row must be positive");
    if (per_row > grid_columns) throw ConfigError("per_row must not exceed grid_columns");
    if (max_depth < 1) throw ConfigError("max_depth must be positive");
    if (item_gap < 0) throw ConfigError("item_gap must be non-negative");
    if (parent_ratio.num < 1 || parent_ratio.den <= parent_ratio.num) {
        throw ConfigError("parent_ratio must lie strictly between 0 and 1");
    }
}

std::string LayoutError::format() const {
    std::ostringstream out;
    out << "DepthExceeded node=" << node << " depth=" << depth << " max=" << max_depth;
    return out.str();
}

namespace {

Ratio parse_ratio(const std::string& text) {
    auto to_int = [&](const std::string& part) {
        if (part.empty() || !std::all_of(part.begin(), part.end(),
                                         [](unsigned char c) { return std::isdigit(c); })) {
            throw ConfigError("parent_ratio '" + text + "' is not a valid ratio");
        }
        try {
            return std::stoi(part);
        } catch (const std::exception&) {
            throw ConfigError("parent_ratio '" + text + "' is out of range");
        }
    };

    Ratio ratio;
    if (auto slash = text.find('/'); slash != std::string::npos) {
        ratio.num = to_int(text.substr(0, slash));
        ratio.den = to_int(text.substr(slash + 1));
    } else if (auto dot = text.find('.'); dot != std::string::npos) {
        auto ipart = text.substr(0, dot);
        auto frac = text.substr(dot + 1);
        if (frac.empty() || frac.size() > 9) {
            throw ConfigError("parent_ratio '" + text + "' is not a valid decimal");
        }
        int scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        ratio.num = to_int(ipart) * scale + to_int(frac);
        ratio.den = scale;
    } else {
        ratio.num = to_int(text);
        ratio.den = 1;
    }
    if (ratio.den == 0) throw ConfigError("parent_ratio denominator must be non-zero");
    int g = std::gcd(ratio.num, ratio.den);
    if (g > 1) {
        ratio.num /= g;
        ratio.den /= g;
    }
    return ratio;
}

}  // namespace

LayoutConfig parse_layout_config(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(e.msg);
    }
    if (!root.IsMap()) throw ConfigError("config must be a mapping");

    const std::set<std::string> allowed = {"style",     "grid_columns", "base_panel_height",
                                           "per_row",   "max_depth",    "parent_ratio",
                                           "item_gap"};
    for (const auto& kv : root) {
        auto key = kv.first.as<std::string>();
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "'");
    }

    if (!root["style"]) throw ConfigError("missing required key 'style'");
    auto style = layout_style_from_string(root["style"].as<std::string>());
    if (!style) {
        throw ConfigError("unknown style '" + root["style"].as<std::string>() +
                          "' (expected pyramidal, repeated or nested)");
    }

    LayoutConfig cfg;
    cfg.style = *style;
    auto read_int = [&](const char* key, int& field) {
        if (!root[key]) return;
        try {
            field = root[key].as<int>();
        } catch (const YAML::Exception&) {
            throw ConfigError(std::string(key) + " must be an integer");
        }
    };
    read_int("grid_columns", cfg.grid_columns);
    read_int("base_panel_height", cfg.base_panel_height);
    read_int("per_row", cfg.per_row);
    read_int("max_depth", cfg.max_depth);
    read_int("item_gap", cfg.item_gap);
    if (root["parent_ratio"]) cfg.parent_ratio = parse_ratio(root["parent_ratio"].as<std::string>());

    cfg.validate();
    return cfg;
}

namespace {

// Lowercase slug: alphanumeric runs joined by single hyphens.
std::string slugify(const std::string& title) {
    std::string slug;
    bool pending_sep = false;
    for (unsigned char c : title) {
        if (std::isalnum(c)) {
            if (pending_sep && !slug.empty()) slug += '-';
            pending_sep = false;
            slug += static_cast<char>(std::tolower(c));
        } else {
            pending_sep = true;
        }
    }
    return slug.empty() ? "page" : slug;
}

// Collisions get -2, -3, ... suffixes in allocation order.
class PageIdAllocator {
public:
    std::string allocate(const std::string& title) {
        auto base = slugify(title);
        auto candidate = base;
        for (int n = 2; !used_.insert(candidate).second; ++n) {
            candidate = base + "-" + std::to_string(n);
        }
        return candidate;
    }

private:
    std::set<std::string> used_;
};

DashboardPage make_entry_page(const LayoutConfig& cfg, PageIdAllocator& ids) {
    DashboardPage page;
    page.page_id = ids.allocate("Overview");
    page.title = "Overview";
    page.grid_columns = cfg.grid_columns;
    return page;
}

// First Composed node (pre-order) whose children would exceed the cap.
const VisNode* find_depth_violation(const VisNode& node, int max_depth) {
    if (node.is_composed() && node.depth >= max_depth) return &node;
    for (const auto& child : node.children) {
        if (const VisNode* hit = find_depth_violation(child, max_depth)) return hit;
    }
    return nullptr;
}

const VisNode* find_depth_violation(const std::vector<VisNode>& roots, int max_depth) {
    for (const auto& root : roots) {
        if (const VisNode* hit = find_depth_violation(root, max_depth)) return hit;
    }
    return nullptr;
}

LayoutError depth_error(const VisNode& node, const LayoutConfig& cfg) {
    return LayoutError{LayoutError::Kind::depth_exceeded, node.name(), node.depth, cfg.max_depth};
}

PlacedVisualization representative_placement(const VisNode& node, GridRect rect) {
    PlacedVisualization placement;
    placement.vis_name = node.representative();
    placement.rect = rect;
    if (node.is_composed()) placement.represents = node.name();
    return placement;
}

// Places the subtree with its top-left corner at (x, y) and width w; returns
// the total height used. The representative spans the full width at the top;
// children fill rows of equal-width columns below, each row as tall as its
// tallest subtree. Column count clamps to w so widths never reach zero.
int place_pyramidal(const VisNode& node, int x, int y, int w, const LayoutConfig& cfg,
                    std::vector<PlacedVisualization>& out) {
    out.push_back(representative_placement(node, {x, y, w, cfg.base_panel_height}));
    int total = cfg.base_panel_height;
    if (node.children.empty()) return total;

    const int columns = std::min(cfg.per_row, w);
    const int column_width = w / columns;
    int row_y = y + cfg.base_panel_height;
    for (std::size_t begin = 0; begin < node.children.size(); begin += columns) {
        const std::size_t end = std::min(begin + columns, node.children.size());
        int row_height = 0;
        for (std::size_t i = begin; i < end; ++i) {
            const int child_x = x + static_cast<int>(i - begin) * column_width;
            row_height = std::max(
                row_height, place_pyramidal(node.children[i], child_x, row_y, column_width, cfg, out));
        }
        row_y += row_height;
        total += row_height;
    }
    return total;
}

// Band layout: children stack vertically on the right, the representative
// fills the left column over the full stack height. Returns the band height.
int place_repeated(const VisNode& node, int x, int y, int w, const LayoutConfig& cfg,
                   std::vector<PlacedVisualization>& out) {
    if (!node.is_composed()) {
        out.push_back(representative_placement(node, {x, y, w, cfg.base_panel_height}));
        return cfg.base_panel_height;
    }

    if (w < 2) {
        // Too narrow for a side-by-side split: stack the representative above
        // the children instead.
        out.push_back(representative_placement(node, {x, y, w, cfg.base_panel_height}));
        int child_y = y + cfg.base_panel_height;
        for (const auto& child : node.children) {
            child_y += place_repeated(child, x, child_y, w, cfg, out);
        }
        return child_y - y;
    }

    int parent_width = std::max(2, cfg.parent_ratio.floor_of(w));
    parent_width = std::min(parent_width, w - 1);  // children keep >= 1 column

    // Reserve the representative slot so placements stay in pre-order, then
    // patch its height once the child stack size is known.
    const std::size_t rep_index = out.size();
    out.push_back(representative_placement(node, {x, y, parent_width, cfg.base_panel_height}));
    int child_y = y;
    for (const auto& child : node.children) {
        child_y += place_repeated(child, x + parent_width, child_y, w - parent_width, cfg, out);
    }
    const int total = child_y - y;
    out[rep_index].rect.h = total;
    return total;
}

using SubtreePlacer = int (*)(const VisNode&, int, int, int, const LayoutConfig&,
                              std::vector<PlacedVisualization>&);

VirtualDashboard single_page_layout(const std::vector<VisNode>& roots, const LayoutConfig& cfg,
                                    LayoutStyle style, SubtreePlacer place) {
    VirtualDashboard vd;
    vd.layout_style = style;
    PageIdAllocator ids;
    vd.pages.push_back(make_entry_page(cfg, ids));

    int item_y = 0;
    for (const auto& root : roots) {
        DashboardItem item;
        item.item_id = root.name();
        const int height = place(root, 0, item_y, cfg.grid_columns, cfg, item.placements);
        item.bounds = {0, item_y, cfg.grid_columns, height};
        item_y += height + cfg.item_gap;
        vd.pages[0].items.push_back(std::move(item));
    }
    return vd;
}

// One equal-sized cell per node, per_row cells per row, one item per cell.
// Composed nodes get a dedicated page for their children; the cell links to it.
void build_nested_cells(std::size_t page_index, const std::vector<VisNode>& nodes,
                        const LayoutConfig& cfg, VirtualDashboard& vd, PageIdAllocator& ids) {
    const int cell_width = cfg.grid_columns / cfg.per_row;
    const std::string page_id = vd.pages[page_index].page_id;

    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const VisNode& node = nodes[i];
        const int column = static_cast<int>(i) % cfg.per_row;
        const int row = static_cast<int>(i) / cfg.per_row;
        const GridRect cell{column * cell_width, row * cfg.base_panel_height, cell_width,
                            cfg.base_panel_height};

        PlacedVisualization placement = representative_placement(node, cell);
        if (node.is_composed()) {
            const std::string child_page_id = ids.allocate(node.name());
            const std::size_t child_index = vd.pages.size();
            DashboardPage child_page;
            child_page.page_id = child_page_id;
            child_page.title = node.name();
            child_page.grid_columns = cfg.grid_columns;
            child_page.parent_page = page_id;
            vd.pages.push_back(std::move(child_page));
            build_nested_cells(child_index, node.children, cfg, vd, ids);
            placement.link_to = child_page_id;
        }

        DashboardItem item;
        item.item_id = node.name();
        item.bounds = cell;
        item.placements.push_back(std::move(placement));
        vd.pages[page_index].items.push_back(std::move(item));
    }
}

}  // namespace

LayoutResult layout_pyramidal(const std::vector<VisNode>& roots, const LayoutConfig& cfg) {
    if (const VisNode* node = find_depth_violation(roots, cfg.max_depth)) {
        return depth_error(*node, cfg);
    }
    return single_page_layout(roots, cfg, LayoutStyle::pyramidal, &place_pyramidal);
}

LayoutResult layout_repeated(const std::vector<VisNode>& roots, const LayoutConfig& cfg) {
    if (const VisNode* node = find_depth_violation(roots, cfg.max_depth)) {
        return depth_error(*node, cfg);
    }
    return single_page_layout(roots, cfg, LayoutStyle::repeated, &place_repeated);
}

VirtualDashboard layout_nested(const std::vector<VisNode>& roots, const LayoutConfig& cfg) {
    VirtualDashboard vd;
    vd.layout_style = LayoutStyle::nested;
    PageIdAllocator ids;
    vd.pages.push_back(make_entry_page(cfg, ids));
    build_nested_cells(0, roots, cfg, vd, ids);
    return vd;
}

LayoutResult build_layout(const std::vector<VisNode>& roots, const LayoutConfig& cfg) {
    switch (cfg.style) {
        case LayoutStyle::pyramidal: return layout_pyramidal(roots, cfg);
        case LayoutStyle::repeated: return layout_repeated(roots, cfg);
        case LayoutStyle::nested: return layout_nested(roots, cfg);
    }
    return layout_pyramidal(roots, cfg);
}

}  // namespace dashgen
