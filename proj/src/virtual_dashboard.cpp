// SPDX-License-Identifier: Apache-2.0

#include "dashgen/virtual_dashboard.hpp"

#include <json.hpp>

#include <set>
#include <sstream>

namespace dashgen {

using nlohmann::json;

std::string to_string(LayoutStyle style) {
    switch (style) {
        case LayoutStyle::pyramidal: return "pyramidal";
        case LayoutStyle::repeated: return "repeated";
        case LayoutStyle::nested: return "nested";
    }
    return "pyramidal";
}

std::optional<LayoutStyle> layout_style_from_string(std::string_view name) {
    if (name == "pyramidal") return LayoutStyle::pyramidal;
    if (name == "repeated") return LayoutStyle::repeated;
    if (name == "nested") return LayoutStyle::nested;
    return std::nullopt;
}

const DashboardPage* VirtualDashboard::find_page(std::string_view page_id) const {
    for (const auto& page : pages) {
        if (page.page_id == page_id) return &page;
    }
    return nullptr;
}

IrFormatError::IrFormatError(const std::string& message)
    : std::runtime_error("IR format error: " + message) {}

namespace {

std::string rect_str(const GridRect& r) {
    std::ostringstream out;
    out << "{x:" << r.x << ",y:" << r.y << ",w:" << r.w << ",h:" << r.h << "}";
    return out.str();
}

bool rect_well_formed(const GridRect& r) { return r.x >= 0 && r.y >= 0 && r.w >= 1 && r.h >= 1; }

}  // namespace

std::vector<GeometryViolation> check_geometry(const VirtualDashboard& vd) {
    std::vector<GeometryViolation> violations;
    auto add = [&](GeometryViolationKind kind, const std::string& page_id, const std::string& message) {
        violations.push_back({kind, page_id, message});
    };

    std::set<std::string> page_ids;
    for (const auto& page : vd.pages) {
        if (!page_ids.insert(page.page_id).second) {
            add(GeometryViolationKind::duplicate_page_id, page.page_id, "duplicate page id");
        }
    }

    for (const auto& page : vd.pages) {
        for (const auto& item : page.items) {
            if (!rect_well_formed(item.bounds) || item.bounds.right() > page.grid_columns) {
                add(GeometryViolationKind::out_of_bounds, page.page_id,
                    "item '" + item.item_id + "' bounds " + rect_str(item.bounds) +
                        " exceed the " + std::to_string(page.grid_columns) + "-column grid");
            }
            for (const auto& placement : item.placements) {
                if (!rect_well_formed(placement.rect) || !item.bounds.contains(placement.rect)) {
                    add(GeometryViolationKind::out_of_bounds, page.page_id,
                        "placement '" + placement.vis_name + "' rect " + rect_str(placement.rect) +
                            " escapes item '" + item.item_id + "' bounds " + rect_str(item.bounds));
                }
            }
            for (std::size_t a = 0; a < item.placements.size(); ++a) {
                for (std::size_t b = a + 1; b < item.placements.size(); ++b) {
                    if (item.placements[a].rect.overlaps(item.placements[b].rect)) {
                        add(GeometryViolationKind::overlap, page.page_id,
                            "placements '" + item.placements[a].vis_name + "' and '" +
                                item.placements[b].vis_name + "' overlap in item '" + item.item_id + "'");
                    }
                }
            }
        }
        for (std::size_t a = 0; a < page.items.size(); ++a) {
            for (std::size_t b = a + 1; b < page.items.size(); ++b) {
                if (page.items[a].bounds.overlaps(page.items[b].bounds)) {
                    add(GeometryViolationKind::overlap, page.page_id,
                        "items '" + page.items[a].item_id + "' and '" + page.items[b].item_id +
                            "' overlap");
                }
            }
        }
        if (page.parent_page && !page_ids.count(*page.parent_page)) {
            add(GeometryViolationKind::dangling_link, page.page_id,
                "parent page '" + *page.parent_page + "' does not exist");
        }
        for (const auto& item : page.items) {
            for (const auto& placement : item.placements) {
                if (placement.link_to && !page_ids.count(*placement.link_to)) {
                    add(GeometryViolationKind::dangling_link, page.page_id,
                        "placement '" + placement.vis_name + "' links to missing page '" +
                            *placement.link_to + "'");
                }
            }
        }
    }

    return violations;
}

namespace {

json rect_to_json(const GridRect& r) {
    return json{{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}};
}

json placement_to_json(const PlacedVisualization& p) {
    json j{{"vis_name", p.vis_name}, {"rect", rect_to_json(p.rect)}};
    if (p.represents) j["represents"] = *p.represents;
    if (p.link_to) j["link_to"] = *p.link_to;
    return j;
}

json page_to_json(const DashboardPage& page) {
    json items = json::array();
    for (const auto& item : page.items) {
        json placements = json::array();
        for (const auto& placement : item.placements) placements.push_back(placement_to_json(placement));
        items.push_back(json{{"item_id", item.item_id},
                             {"bounds", rect_to_json(item.bounds)},
                             {"placements", std::move(placements)}});
    }
    json j{{"page_id", page.page_id},
           {"title", page.title},
           {"grid_columns", page.grid_columns},
           {"items", std::move(items)}};
    if (page.parent_page) j["parent_page"] = *page.parent_page;
    return j;
}

// --- strict parsing helpers ---

const json& require_key(const json& obj, const std::string& key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw IrFormatError(where + " is missing key '" + key + "'");
    return *it;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw IrFormatError(where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key)) throw IrFormatError(where + " has unknown key '" + key + "'");
    }
}

int require_int(const json& obj, const std::string& key, const std::string& where, int min_value) {
    const json& value = require_key(obj, key, where);
    if (!value.is_number_integer()) throw IrFormatError(where + "." + key + " must be an integer");
    int n = value.get<int>();
    if (n < min_value) {
        throw IrFormatError(where + "." + key + " must be >= " + std::to_string(min_value));
    }
    return n;
}

std::string require_string(const json& obj, const std::string& key, const std::string& where) {
    const json& value = require_key(obj, key, where);
    if (!value.is_string()) throw IrFormatError(where + "." + key + " must be a string");
    return value.get<std::string>();
}

GridRect rect_from_json(const json& j, const std::string& where) {
    reject_unknown(j, {"x", "y", "w", "h"}, where);
    GridRect r;
    r.x = require_int(j, "x", where, 0);
    r.y = require_int(j, "y", where, 0);
    r.w = require_int(j, "w", where, 1);
    r.h = require_int(j, "h", where, 1);
    return r;
}

PlacedVisualization placement_from_json(const json& j, const std::string& where) {
    reject_unknown(j, {"vis_name", "rect", "represents", "link_to"}, where);
    PlacedVisualization p;
    p.vis_name = require_string(j, "vis_name", where);
    p.rect = rect_from_json(require_key(j, "rect", where), where + ".rect");
    if (j.contains("represents")) p.represents = require_string(j, "represents", where);
    if (j.contains("link_to")) p.link_to = require_string(j, "link_to", where);
    return p;
}

DashboardItem item_from_json(const json& j, const std::string& where) {
    reject_unknown(j, {"item_id", "bounds", "placements"}, where);
    DashboardItem item;
    item.item_id = require_string(j, "item_id", where);
    item.bounds = rect_from_json(require_key(j, "bounds", where), where + ".bounds");
    const json& placements = require_key(j, "placements", where);
    if (!placements.is_array()) throw IrFormatError(where + ".placements must be an array");
    for (std::size_t i = 0; i < placements.size(); ++i) {
        item.placements.push_back(
            placement_from_json(placements[i], where + ".placements[" + std::to_string(i) + "]"));
    }
    return item;
}

DashboardPage page_from_json(const json& j, const std::string& where) {
    reject_unknown(j, {"page_id", "title", "grid_columns", "items", "parent_page"}, where);
    DashboardPage page;
    page.page_id = require_string(j, "page_id", where);
    page.title = require_string(j, "title", where);
    page.grid_columns = require_int(j, "grid_columns", where, 1);
    if (j.contains("parent_page")) page.parent_page = require_string(j, "parent_page", where);
    const json& items = require_key(j, "items", where);
    if (!items.is_array()) throw IrFormatError(where + ".items must be an array");
    for (std::size_t i = 0; i < items.size(); ++i) {
        page.items.push_back(item_from_json(items[i], where + ".items[" + std::to_string(i) + "]"));
    }
    return page;
}

}  // namespace

std::string serialize_ir(const VirtualDashboard& vd) {
    json pages = json::array();
    for (const auto& page : vd.pages) pages.push_back(page_to_json(page));
    json doc{{"schema_version", kIrSchemaVersion},
             {"layout_style", to_string(vd.layout_style)},
             {"pages", std::move(pages)}};
    return doc.dump(2) + "\n";
}

VirtualDashboard parse_ir(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw IrFormatError(e.what());
    }

    reject_unknown(doc, {"schema_version", "layout_style", "pages"}, "document");
    int version = require_int(doc, "schema_version", "document", 0);
    if (version != kIrSchemaVersion) {
        throw IrFormatError("unsupported schema_version " + std::to_string(version) +
                            " (expected " + std::to_string(kIrSchemaVersion) + ")");
    }

    VirtualDashboard vd;
    auto style = layout_style_from_string(require_string(doc, "layout_style", "document"));
    if (!style) throw IrFormatError("unknown layout_style");
    vd.layout_style = *style;

    const json& pages = require_key(doc, "pages", "document");
    if (!pages.is_array()) throw IrFormatError("document.pages must be an array");
    for (std::size_t i = 0; i < pages.size(); ++i) {
        vd.pages.push_back(page_from_json(pages[i], "pages[" + std::to_string(i) + "]"));
    }
    return vd;
}

}  // namespace dashgen
