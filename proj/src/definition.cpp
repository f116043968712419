// SPDX-License-Identifier: Apache-2.0

#include "dashgen/definition.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace dashgen {

namespace {

std::string trimmed(std::string_view s) {
    const char* ws = " \t\r\n";
    auto begin = s.find_first_not_of(ws);
    if (begin == std::string_view::npos) return {};
    auto end = s.find_last_not_of(ws);
    return std::string(s.substr(begin, end - begin + 1));
}

int mark_line(const YAML::Node& node) { return node.Mark().line + 1; }
int mark_column(const YAML::Node& node) { return node.Mark().column + 1; }

[[noreturn]] void fail_at(const YAML::Node& node, const std::string& message) {
    throw ParseError(message, mark_line(node), mark_column(node));
}

std::string expect_scalar(const YAML::Node& node, const std::string& what) {
    if (!node.IsScalar()) fail_at(node, what + " must be a scalar");
    return node.as<std::string>();
}

std::vector<std::string> expect_string_list(const YAML::Node& node, const std::string& what) {
    std::vector<std::string> out;
    if (node.IsNull()) return out;
    if (!node.IsSequence()) fail_at(node, what + " must be a list");
    for (const auto& item : node) {
        out.push_back(expect_scalar(item, what + " entry"));
    }
    return out;
}

void reject_unknown_keys(const YAML::Node& record, const std::set<std::string>& allowed,
                         const std::string& what) {
    for (const auto& kv : record) {
        auto key = expect_scalar(kv.first, what + " key");
        if (!allowed.count(key)) {
            fail_at(kv.first, what + " has unknown key '" + key + "'");
        }
    }
}

std::string record_name(const YAML::Node& record, const std::string& what) {
    if (!record.IsMap()) fail_at(record, what + " must be a mapping");
    auto name_node = record["name"];
    if (!name_node) fail_at(record, what + " is missing its name");
    auto name = expect_scalar(name_node, what + " name");
    if (trimmed(name).empty()) fail_at(name_node, what + " name must be non-empty");
    return name;
}

Target parse_target(const YAML::Node& node) {
    if (!node.IsMap()) fail_at(node, "target must be a mapping");
    reject_unknown_keys(node, {"id", "cluster"}, "target");
    Target target;
    if (auto id = node["id"]) target.id = expect_scalar(id, "target id");
    if (auto cluster = node["cluster"]) target.cluster = expect_scalar(cluster, "target cluster");
    return target;
}

Kpi parse_kpi(const YAML::Node& record) {
    auto name = record_name(record, "kpi record");
    reject_unknown_keys(record, {"name", "metric", "target", "source_kpis", "transformation_function"},
                        "kpi record '" + name + "'");

    const bool has_simple = record["metric"] || record["target"];
    const bool has_composed = record["source_kpis"] || record["transformation_function"];
    if (has_simple && has_composed) {
        throw VariantError(name, "kpi '" + name + "' mixes simple and composed fields",
                           mark_line(record), mark_column(record));
    }
    if (!has_simple && !has_composed) {
        throw VariantError(name, "kpi '" + name + "' has fields of neither variant",
                           mark_line(record), mark_column(record));
    }

    Kpi kpi;
    kpi.name = name;
    if (has_simple) {
        kpi.variant = KpiVariant::simple;
        if (auto metric = record["metric"]) kpi.metric = expect_scalar(metric, "metric");
        if (auto target = record["target"]) kpi.target = parse_target(target);
    } else {
        kpi.variant = KpiVariant::composed;
        if (auto sources = record["source_kpis"]) {
            kpi.source_kpis = expect_string_list(sources, "source_kpis");
        }
        if (auto fn = record["transformation_function"]) {
            kpi.transformation_function = expect_scalar(fn, "transformation_function");
        }
    }
    return kpi;
}

VisualizationDef parse_visualization(const YAML::Node& record) {
    auto name = record_name(record, "visualization record");
    reject_unknown_keys(record, {"name", "kpis", "composing_visualizations", "summary_visualization"},
                        "visualization record '" + name + "'");

    const bool has_simple = static_cast<bool>(record["kpis"]);
    const bool has_composed =
        record["composing_visualizations"] || record["summary_visualization"];
    if (has_simple && has_composed) {
        throw VariantError(name, "visualization '" + name + "' mixes simple and composed fields",
                           mark_line(record), mark_column(record));
    }
    if (!has_simple && !has_composed) {
        throw VariantError(name, "visualization '" + name + "' has fields of neither variant",
                           mark_line(record), mark_column(record));
    }

    VisualizationDef vis;
    vis.name = name;
    if (has_simple) {
        vis.variant = VisVariant::simple;
        vis.kpis = expect_string_list(record["kpis"], "kpis");
    } else {
        vis.variant = VisVariant::composed;
        if (auto children = record["composing_visualizations"]) {
            vis.composing_visualizations = expect_string_list(children, "composing_visualizations");
        }
        if (auto summary = record["summary_visualization"]) {
            vis.summary_visualization = expect_scalar(summary, "summary_visualization");
        }
    }
    return vis;
}

}  // namespace

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error([&] {
          std::ostringstream out;
          out << message;
          if (line > 0) out << " (line " << line << ", column " << column << ")";
          return out.str();
      }()),
      line_(line),
      column_(column) {}

VariantError::VariantError(std::string entity, const std::string& message, int line, int column)
    : ParseError(message, line, column), entity_(std::move(entity)) {}

UnknownKpiError::UnknownKpiError(const std::string& kpi_name)
    : std::runtime_error("unknown KPI '" + kpi_name + "'") {}

namespace transformation_functions {

const std::vector<std::string>& registry() {
    static const std::vector<std::string> names = {"avg", "sum", "min", "max"};
    return names;
}

bool is_known(std::string_view name) {
    const auto& names = registry();
    return std::find(names.begin(), names.end(), name) != names.end();
}

}  // namespace transformation_functions

const Kpi* DeclarativeDefinition::find_kpi(std::string_view name) const {
    for (const auto& kpi : kpis) {
        if (kpi.name == name) return &kpi;
    }
    return nullptr;
}

const VisualizationDef* DeclarativeDefinition::find_visualization(std::string_view name) const {
    for (const auto& vis : visualizations) {
        if (vis.name == name) return &vis;
    }
    return nullptr;
}

std::string code_label(ValidationCode code) {
    return "V" + std::to_string(static_cast<int>(code));
}

DeclarativeDefinition parse_definition(const std::string& document_text) {
    YAML::Node root;
    try {
        root = YAML::Load(document_text);
    } catch (const YAML::ParserException& e) {
        throw ParseError(e.msg, e.mark.line + 1, e.mark.column + 1);
    }

    if (root.IsNull()) throw ParseError("document is empty");
    if (!root.IsMap()) throw ParseError("document root must be a mapping", mark_line(root), mark_column(root));
    reject_unknown_keys(root, {"kpis", "visualizations"}, "document");
    if (!root["kpis"]) throw ParseError("document is missing the 'kpis' key");
    if (!root["visualizations"]) throw ParseError("document is missing the 'visualizations' key");

    auto expect_record_list = [](const YAML::Node& node, const std::string& what) {
        if (!node.IsNull() && !node.IsSequence()) fail_at(node, what + " must be a list");
    };
    expect_record_list(root["kpis"], "kpis");
    expect_record_list(root["visualizations"], "visualizations");

    DeclarativeDefinition defn;
    if (root["kpis"].IsSequence()) {
        for (const auto& record : root["kpis"]) defn.kpis.push_back(parse_kpi(record));
    }
    if (root["visualizations"].IsSequence()) {
        for (const auto& record : root["visualizations"]) {
            defn.visualizations.push_back(parse_visualization(record));
        }
    }
    return defn;
}

namespace {

// Cycle scan over name -> successor-names edges; reports one error per back edge.
struct CycleScan {
    enum class Color { white, gray, black };

    const std::map<std::string, std::vector<std::string>>& edges;
    std::map<std::string, Color> color;
    std::vector<std::pair<std::string, std::string>> back_edges;  // (from, to)

    void visit(const std::string& node) {
        color[node] = Color::gray;
        auto it = edges.find(node);
        if (it != edges.end()) {
            for (const auto& next : it->second) {
                if (!edges.count(next)) continue;
                auto c = color.count(next) ? color[next] : Color::white;
                if (c == Color::gray) {
                    back_edges.emplace_back(node, next);
                } else if (c == Color::white) {
                    visit(next);
                }
            }
        }
        color[node] = Color::black;
    }

    void run(const std::vector<std::string>& order) {
        for (const auto& node : order) {
            auto c = color.count(node) ? color[node] : Color::white;
            if (c == Color::white) visit(node);
        }
    }
};

}  // namespace

std::vector<ValidationError> validate_definition(const DeclarativeDefinition& defn) {
    std::vector<ValidationError> errors;
    auto add = [&](ValidationCode code, const std::string& entity, const std::string& message) {
        errors.push_back({code, entity, message});
    };

    // V1 / V2: name uniqueness per namespace.
    {
        std::set<std::string> seen, reported;
        for (const auto& kpi : defn.kpis) {
            if (!seen.insert(kpi.name).second && reported.insert(kpi.name).second) {
                add(ValidationCode::duplicate_kpi_name, kpi.name, "KPI name declared more than once");
            }
        }
    }
    {
        std::set<std::string> seen, reported;
        for (const auto& vis : defn.visualizations) {
            if (!seen.insert(vis.name).second && reported.insert(vis.name).second) {
                add(ValidationCode::duplicate_visualization_name, vis.name,
                    "visualization name declared more than once");
            }
        }
    }

    // V3 / V5 / V13: per-KPI structure.
    for (const auto& kpi : defn.kpis) {
        if (kpi.is_simple()) {
            if (trimmed(kpi.metric).empty()) {
                add(ValidationCode::incomplete_simple_kpi, kpi.name, "simple KPI has an empty metric");
            }
            if (trimmed(kpi.target.id).empty()) {
                add(ValidationCode::incomplete_simple_kpi, kpi.name, "simple KPI has an empty target id");
            }
            if (kpi.target.cluster && trimmed(*kpi.target.cluster).empty()) {
                add(ValidationCode::incomplete_simple_kpi, kpi.name,
                    "target cluster must be non-empty when present");
            }
        } else {
            if (kpi.source_kpis.size() < 2) {
                add(ValidationCode::unresolved_source_kpi, kpi.name,
                    "composed KPI needs at least two source KPIs");
            }
            std::set<std::string> seen;
            for (const auto& source : kpi.source_kpis) {
                if (!seen.insert(source).second) {
                    add(ValidationCode::unresolved_source_kpi, kpi.name,
                        "duplicate source KPI '" + source + "'");
                } else if (!defn.find_kpi(source)) {
                    add(ValidationCode::unresolved_source_kpi, kpi.name,
                        "source KPI '" + source + "' does not resolve");
                }
            }
            if (!transformation_functions::is_known(kpi.transformation_function)) {
                add(ValidationCode::unknown_transformation, kpi.name,
                    "transformation function '" + kpi.transformation_function + "' is not registered");
            }
        }
    }

    // V4: KPI composition graph must be acyclic.
    {
        std::map<std::string, std::vector<std::string>> edges;
        std::vector<std::string> order;
        for (const auto& kpi : defn.kpis) {
            if (!edges.count(kpi.name)) {
                edges[kpi.name] = kpi.is_composed() ? kpi.source_kpis : std::vector<std::string>{};
                order.push_back(kpi.name);
            }
        }
        CycleScan scan{edges, {}, {}};
        scan.run(order);
        for (const auto& [from, to] : scan.back_edges) {
            add(ValidationCode::kpi_cycle, from, "source KPI '" + to + "' closes a cycle");
        }
    }

    // V6 / V7 / V10 / V11 / V12: per-visualization structure.
    for (const auto& vis : defn.visualizations) {
        if (vis.is_simple()) {
            if (vis.kpis.empty()) {
                add(ValidationCode::empty_kpi_list, vis.name,
                    "simple visualization must list at least one KPI");
            }
            std::set<std::string> seen;
            for (const auto& kpi_name : vis.kpis) {
                if (!seen.insert(kpi_name).second) {
                    add(ValidationCode::unresolved_visualization_kpi, vis.name,
                        "duplicate KPI '" + kpi_name + "'");
                } else if (!defn.find_kpi(kpi_name)) {
                    add(ValidationCode::unresolved_visualization_kpi, vis.name,
                        "KPI '" + kpi_name + "' does not resolve");
                }
            }
        } else {
            if (vis.composing_visualizations.empty()) {
                add(ValidationCode::empty_composition, vis.name,
                    "composed visualization must list at least one child");
            }
            for (const auto& child : vis.composing_visualizations) {
                if (!defn.find_visualization(child)) {
                    add(ValidationCode::unresolved_composing_ref, vis.name,
                        "composing visualization '" + child + "' does not resolve");
                }
            }
            if (!vis.summary_visualization || trimmed(*vis.summary_visualization).empty()) {
                add(ValidationCode::invalid_summary, vis.name,
                    "composed visualization requires a summary_visualization");
            } else {
                const auto* summary = defn.find_visualization(*vis.summary_visualization);
                if (!summary) {
                    add(ValidationCode::invalid_summary, vis.name,
                        "summary visualization '" + *vis.summary_visualization + "' does not resolve");
                } else if (!summary->is_simple()) {
                    add(ValidationCode::invalid_summary, vis.name,
                        "summary visualization '" + summary->name + "' must be a simple visualization");
                }
            }
        }
    }

    // V8: visualization composition graph must be acyclic.
    {
        std::map<std::string, std::vector<std::string>> edges;
        std::vector<std::string> order;
        for (const auto& vis : defn.visualizations) {
            if (!edges.count(vis.name)) {
                edges[vis.name] =
                    vis.is_composed() ? vis.composing_visualizations : std::vector<std::string>{};
                order.push_back(vis.name);
            }
        }
        CycleScan scan{edges, {}, {}};
        scan.run(order);
        for (const auto& [from, to] : scan.back_edges) {
            add(ValidationCode::visualization_cycle, from,
                "composing visualization '" + to + "' closes a cycle");
        }
    }

    // V9: forest property — at most one child slot per visualization.
    // V10 (shared summary) and V14 need the same occupancy maps.
    {
        std::map<std::string, int> child_slots;
        std::map<std::string, int> summary_uses;
        for (const auto& vis : defn.visualizations) {
            if (!vis.is_composed()) continue;
            for (const auto& child : vis.composing_visualizations) {
                if (defn.find_visualization(child)) child_slots[child]++;
            }
            if (vis.summary_visualization) {
                const auto* summary = defn.find_visualization(*vis.summary_visualization);
                if (summary && summary->is_simple()) summary_uses[summary->name]++;
            }
        }
        for (const auto& [name, count] : child_slots) {
            if (count > 1) {
                add(ValidationCode::multiple_parents, name,
                    "visualization is a composing child of " + std::to_string(count) + " parents");
            }
        }
        for (const auto& [name, count] : summary_uses) {
            if (count > 1) {
                add(ValidationCode::invalid_summary, name,
                    "visualization is the summary of " + std::to_string(count) + " parents");
            }
        }
        for (const auto& [name, count] : summary_uses) {
            if (child_slots.count(name)) {
                add(ValidationCode::summary_used_as_child, name,
                    "summary visualization is also a composing child");
            }
        }
    }

    return errors;
}

namespace {

VisNode resolve_node(const VisualizationDef& def, const DeclarativeDefinition& defn, int depth) {
    VisNode node;
    node.def = &def;
    node.depth = depth;
    if (def.is_composed()) {
        node.summary = defn.find_visualization(*def.summary_visualization);
        for (const auto& child_name : def.composing_visualizations) {
            node.children.push_back(resolve_node(*defn.find_visualization(child_name), defn, depth + 1));
        }
    }
    return node;
}

}  // namespace

std::vector<VisNode> build_forest(const DeclarativeDefinition& defn) {
    std::set<std::string> children, summaries;
    for (const auto& vis : defn.visualizations) {
        if (!vis.is_composed()) continue;
        children.insert(vis.composing_visualizations.begin(), vis.composing_visualizations.end());
        if (vis.summary_visualization) summaries.insert(*vis.summary_visualization);
    }

    std::vector<VisNode> roots;
    for (const auto& vis : defn.visualizations) {
        if (!children.count(vis.name) && !summaries.count(vis.name)) {
            roots.push_back(resolve_node(vis, defn, 1));
        }
    }
    return roots;
}

int tree_depth(const VisNode& root) {
    int deepest = 0;
    for (const auto& child : root.children) deepest = std::max(deepest, tree_depth(child));
    return deepest + 1;
}

std::string kpi_expression(std::string_view kpi_name, const DeclarativeDefinition& defn) {
    const Kpi* kpi = defn.find_kpi(kpi_name);
    if (!kpi) throw UnknownKpiError(std::string(kpi_name));

    if (kpi->is_simple()) {
        std::string expr = kpi->metric + "{target=\"" + kpi->target.id + "\"";
        if (kpi->target.cluster) expr += ",cluster=\"" + *kpi->target.cluster + "\"";
        expr += "}";
        return expr;
    }

    std::string expr = kpi->transformation_function + "(";
    for (std::size_t i = 0; i < kpi->source_kpis.size(); ++i) {
        if (i > 0) expr += ", ";
        expr += kpi_expression(kpi->source_kpis[i], defn);
    }
    expr += ")";
    return expr;
}

}  // namespace dashgen
