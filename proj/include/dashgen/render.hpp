// SPDX-License-Identifier: Apache-2.0
//
// Rendering backends: Grafana dashboard JSON and a static HTML preview.
// Both consume a VirtualDashboard; the Grafana backend additionally needs
// the definition to expand KPI queries into panel targets.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dashgen/definition.hpp"
#include "dashgen/virtual_dashboard.hpp"

namespace dashgen {

// A file produced by a renderer, addressed relative to the output directory.
struct RenderedArtifact {
    std::string relative_path;
    std::string content;
};

struct GrafanaOptions {
    std::string datasource_name = "default";
    std::string tag = "dashgen";
};

// Raised when a dashboard references names the definition cannot resolve,
// or when renderer options are unusable.
class RenderError : public std::runtime_error {
  public:
    explicit RenderError(const std::string& message) : std::runtime_error(message) {}
};

// Stable dashboard uid for a page: first 12 lowercase hex characters of
// SHA-256("dashgen/" + page_id).
std::string grafana_uid(const std::string& page_id);

// Spreadsheet-style target ref ids: 0 -> "A", 25 -> "Z", 26 -> "AA", ...
std::string grafana_ref_id(std::size_t index);

// One <page_id>.json artifact per page, in page order. Panel geometry mirrors
// the IR except that items holding more than one placement gain a row panel
// above their content (content shifts down one grid row per preceding header).
std::vector<RenderedArtifact> render_grafana(const VirtualDashboard& dashboard,
                                             const DeclarativeDefinition& definition,
                                             const GrafanaOptions& options);

// A single self-contained preview.html: one section per page, placements as
// absolutely positioned boxes at 40px per grid cell, links as in-document
// anchors. No scripts, no external resources.
RenderedArtifact render_html_preview(const VirtualDashboard& dashboard);

}  // namespace dashgen
