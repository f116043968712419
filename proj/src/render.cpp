// SPDX-License-Identifier: Apache-2.0

#include "dashgen/render.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "json.hpp"

namespace dashgen {
namespace {

using nlohmann::json;

json rect_to_grid_pos(const GridRect& rect, int y_shift) {
    return json{{"h", rect.h}, {"w", rect.w}, {"x", rect.x}, {"y", rect.y + y_shift}};
}

json panel_targets(const PlacedVisualization& placement,
                   const DeclarativeDefinition& definition) {
    const VisualizationDef* vis = definition.find_visualization(placement.vis_name);
    if (vis == nullptr) {
        throw RenderError("placement references unknown visualization '" + placement.vis_name +
                          "'");
    }
    if (!vis->is_simple()) {
        throw RenderError("placement '" + placement.vis_name +
                          "' is not a Simple visualization; dashboards may only place Simple "
                          "visualizations");
    }
    json targets = json::array();
    for (std::size_t i = 0; i < vis->kpis.size(); ++i) {
        if (definition.find_kpi(vis->kpis[i]) == nullptr) {
            throw RenderError("visualization '" + vis->name + "' references unknown KPI '" +
                              vis->kpis[i] + "'");
        }
        targets.push_back(json{{"expr", kpi_expression(vis->kpis[i], definition)},
                               {"refId", grafana_ref_id(i)}});
    }
    return targets;
}

const DashboardPage& page_by_id(const VirtualDashboard& dashboard, const std::string& page_id,
                                const char* role) {
    const DashboardPage* page = dashboard.find_page(page_id);
    if (page == nullptr) {
        throw RenderError(std::string(role) + " references unknown page '" + page_id + "'");
    }
    return *page;
}

std::string dashboard_url(const std::string& page_id) { return "/d/" + grafana_uid(page_id); }

std::string dump_canonical(const json& value) { return value.dump(2) + "\n"; }

void append_escaped(std::string& out, const std::string& text) {
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
}

std::string escaped(const std::string& text) {
    std::string out;
    append_escaped(out, text);
    return out;
}

}  // namespace

std::string grafana_uid(const std::string& page_id) {
    const std::string input = "dashgen/" + page_id;
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int digest_len = 0;
    if (EVP_Digest(input.data(), input.size(), digest, &digest_len, EVP_sha256(), nullptr) != 1 ||
        digest_len < 6) {
        throw RenderError("SHA-256 digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string uid;
    uid.reserve(12);
    for (int i = 0; i < 6; ++i) {
        uid += hex[digest[i] >> 4];
        uid += hex[digest[i] & 0x0f];
    }
    return uid;
}

std::string grafana_ref_id(std::size_t index) {
    std::string out;
    std::size_t n = index + 1;
    while (n > 0) {
        n -= 1;
        out += static_cast<char>('A' + n % 26);
        n /= 26;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::vector<RenderedArtifact> render_grafana(const VirtualDashboard& dashboard,
                                             const DeclarativeDefinition& definition,
                                             const GrafanaOptions& options) {
    if (options.tag.empty()) {
        throw RenderError("Grafana tag must not be empty");
    }
    if (options.datasource_name.empty()) {
        throw RenderError("Grafana datasource name must not be empty");
    }

    // Page uids must be distinct; a truncated-hash collision would silently
    // merge dashboards in Grafana.
    std::map<std::string, std::string> uid_owner;
    for (const auto& page : dashboard.pages) {
        const std::string uid = grafana_uid(page.page_id);
        auto [it, inserted] = uid_owner.emplace(uid, page.page_id);
        if (!inserted) {
            throw RenderError("uid collision between pages '" + it->second + "' and '" +
                              page.page_id + "'");
        }
    }

    std::vector<RenderedArtifact> artifacts;
    artifacts.reserve(dashboard.pages.size());

    for (const auto& page : dashboard.pages) {
        std::size_t placement_count = 0;
        for (const auto& item : page.items) {
            placement_count += item.placements.size();
        }

        json panels = json::array();
        std::size_t next_panel_id = 1;                  // placements, page-wide order
        std::size_t next_row_id = placement_count + 1;  // row headers follow
        int y_shift = 0;

        for (const auto& item : page.items) {
            if (item.placements.size() > 1) {
                panels.push_back(json{
                    {"gridPos", json{{"h", 1},
                                     {"w", item.bounds.w},
                                     {"x", item.bounds.x},
                                     {"y", item.bounds.y + y_shift}}},
                    {"id", next_row_id++},
                    {"title", item.item_id},
                    {"type", "row"},
                });
                y_shift += 1;
            }
            for (const auto& placement : item.placements) {
                json panel{
                    {"gridPos", rect_to_grid_pos(placement.rect, y_shift)},
                    {"id", next_panel_id++},
                    {"targets", panel_targets(placement, definition)},
                    {"title", placement.vis_name},
                    {"type", placement.represents.has_value() ? "stat" : "timeseries"},
                };
                if (placement.link_to.has_value()) {
                    const DashboardPage& target =
                        page_by_id(dashboard, *placement.link_to, "placement link");
                    panel["links"] = json::array(
                        {json{{"title", target.title}, {"url", dashboard_url(target.page_id)}}});
                }
                panels.push_back(std::move(panel));
            }
        }

        json links = json::array();
        if (page.parent_page.has_value()) {
            const DashboardPage& parent = page_by_id(dashboard, *page.parent_page, "parent link");
            links.push_back(
                json{{"title", parent.title}, {"url", dashboard_url(parent.page_id)}});
        }

        const json doc{
            {"links", links},
            {"panels", panels},
            {"schemaVersion", 39},
            {"tags", json::array({options.tag})},
            {"title", page.title},
            {"uid", grafana_uid(page.page_id)},
        };
        artifacts.push_back({page.page_id + ".json", dump_canonical(doc)});
    }
    return artifacts;
}

RenderedArtifact render_html_preview(const VirtualDashboard& dashboard) {
    constexpr int kCellPx = 40;

    std::ostringstream html;
    html << "<!DOCTYPE html>\n"
            "<html lang=\"en\">\n"
            "<head>\n"
            "<meta charset=\"utf-8\">\n"
            "<title>Dashboard preview</title>\n"
            "<style>\n"
            "body { font-family: sans-serif; background: #f4f4f4; margin: 24px; }\n"
            "section.page { margin-bottom: 48px; }\n"
            ".grid { position: relative; background: #fff; border: 1px solid #c0c0c0; }\n"
            ".box { position: absolute; box-sizing: border-box; overflow: hidden;\n"
            "       border: 1px solid #5b7da0; background: #e9f1fa; color: #1f3044;\n"
            "       padding: 4px 6px; font-size: 13px; }\n"
            ".box.summary { background: #fdf3dc; border-color: #b08d3f; }\n"
            "</style>\n"
            "</head>\n"
            "<body>\n"
            "<h1>Dashboard preview</h1>\n";

    for (const auto& page : dashboard.pages) {
        int max_bottom = 1;
        for (const auto& item : page.items) {
            max_bottom = std::max(max_bottom, item.bounds.bottom());
            for (const auto& placement : item.placements) {
                max_bottom = std::max(max_bottom, placement.rect.bottom());
            }
        }

        html << "<section class=\"page\" id=\"" << escaped(page.page_id) << "\">\n";
        html << "<h2>" << escaped(page.title) << "</h2>\n";
        html << "<div class=\"grid\" style=\"width:" << page.grid_columns * kCellPx
             << "px;height:" << max_bottom * kCellPx << "px\">\n";
        for (const auto& item : page.items) {
            for (const auto& placement : item.placements) {
                const GridRect& r = placement.rect;
                html << "<div class=\"box" << (placement.represents ? " summary" : "")
                     << "\" style=\"left:" << r.x * kCellPx << "px;top:" << r.y * kCellPx
                     << "px;width:" << r.w * kCellPx << "px;height:" << r.h * kCellPx
                     << "px\">";
                if (placement.link_to.has_value()) {
                    html << "<a href=\"#" << escaped(*placement.link_to) << "\">"
                         << escaped(placement.vis_name) << "</a>";
                } else {
                    html << escaped(placement.vis_name);
                }
                html << "</div>\n";
            }
        }
        html << "</div>\n</section>\n";
    }

    html << "</body>\n</html>\n";
    return {"preview.html", html.str()};
}

}  // namespace dashgen
