// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dashgen {

/// Syntax-level failure while reading a definition document.
/// Line/column are 1-based; 0 means "not attributable to a position".
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, int line = 0, int column = 0);

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// A record carries keys of both variants, or of neither.
class VariantError : public ParseError {
public:
    VariantError(std::string entity, const std::string& message, int line = 0, int column = 0);

    const std::string& entity() const { return entity_; }

private:
    std::string entity_;
};

/// Lookup of a KPI name that does not resolve (unreachable on validated input).
class UnknownKpiError : public std::runtime_error {
public:
    explicit UnknownKpiError(const std::string& kpi_name);
};

/// Where a metric is collected from: a service or resource id, optionally
/// qualified by a cluster.
struct Target {
    std::string id;
    std::optional<std::string> cluster;

    bool operator==(const Target&) const = default;
};

enum class KpiVariant { simple, composed };

/// A named indicator. Simple = one metric from one target; Composed = a
/// transformation function over other KPIs. Exactly the fields of the
/// active variant are populated.
struct Kpi {
    std::string name;
    KpiVariant variant = KpiVariant::simple;

    // simple
    std::string metric;
    Target target;

    // composed
    std::vector<std::string> source_kpis;
    std::string transformation_function;

    bool is_simple() const { return variant == KpiVariant::simple; }
    bool is_composed() const { return variant == KpiVariant::composed; }

    bool operator==(const Kpi&) const = default;
};

/// Registry of transformation functions a Composed KPI may use.
namespace transformation_functions {
const std::vector<std::string>& registry();
bool is_known(std::string_view name);
}  // namespace transformation_functions

enum class VisVariant { simple, composed };

/// A named display unit. Simple shows a set of KPIs; Composed groups other
/// visualizations and designates a Simple summary visualization that stands
/// for the group.
struct VisualizationDef {
    std::string name;
    VisVariant variant = VisVariant::simple;

    // simple
    std::vector<std::string> kpis;

    // composed
    std::vector<std::string> composing_visualizations;
    std::optional<std::string> summary_visualization;

    bool is_simple() const { return variant == VisVariant::simple; }
    bool is_composed() const { return variant == VisVariant::composed; }

    bool operator==(const VisualizationDef&) const = default;
};

/// Parsed definition document. Order matches the document.
struct DeclarativeDefinition {
    std::vector<Kpi> kpis;
    std::vector<VisualizationDef> visualizations;

    /// First declaration wins when names are duplicated (validation reports those).
    const Kpi* find_kpi(std::string_view name) const;
    const VisualizationDef* find_visualization(std::string_view name) const;

    bool operator==(const DeclarativeDefinition&) const = default;
};

/// Fixed catalogue of validation defects. Numeric values match the V-codes.
enum class ValidationCode {
    duplicate_kpi_name = 1,         // V1
    duplicate_visualization_name,   // V2
    unresolved_source_kpi,          // V3  (also source list arity/duplicates)
    kpi_cycle,                      // V4
    unknown_transformation,         // V5
    unresolved_visualization_kpi,   // V6  (also duplicates in a kpis list)
    unresolved_composing_ref,       // V7
    visualization_cycle,            // V8
    multiple_parents,               // V9
    invalid_summary,                // V10
    empty_kpi_list,                 // V11
    empty_composition,              // V12
    incomplete_simple_kpi,          // V13
    summary_used_as_child,          // V14
};

/// "V1".."V14"
std::string code_label(ValidationCode code);

struct ValidationError {
    ValidationCode code;
    std::string entity;   // offending record or name
    std::string message;

    bool operator==(const ValidationError&) const = default;
};

/// A visualization resolved into its composition tree. Borrows the
/// VisualizationDef objects owned by the definition; the definition must
/// outlive the forest.
struct VisNode {
    const VisualizationDef* def = nullptr;
    const VisualizationDef* summary = nullptr;  // set iff def is Composed
    std::vector<VisNode> children;              // composing order
    int depth = 1;                              // roots = 1

    bool is_composed() const { return def->is_composed(); }
    const std::string& name() const { return def->name; }

    /// The tile drawn for this node: itself if Simple, its summary if Composed.
    const std::string& representative() const { return summary ? summary->name : def->name; }
};

/// Parse the YAML definition document. Preserves document order, rejects
/// unknown keys, infers each record's variant from the keys present.
/// Throws ParseError / VariantError.
DeclarativeDefinition parse_definition(const std::string& document_text);

/// Run the full V1..V14 catalogue. Empty result = valid.
std::vector<ValidationError> validate_definition(const DeclarativeDefinition& defn);

/// Resolve the visualization forest. Roots are visualizations that appear in
/// no composing list and are no visualization's summary, in document order.
/// Requires validate_definition(defn) to have returned no errors.
std::vector<VisNode> build_forest(const DeclarativeDefinition& defn);

/// Maximum depth over the subtree; the root counts as 1.
int tree_depth(const VisNode& root);

/// Expand a KPI into its query expression:
///   Simple   -> metric{target="id",cluster="cluster"}   (cluster omitted when absent)
///   Composed -> fn(expr1, expr2, ...)                   (declaration order, recursive)
std::string kpi_expression(std::string_view kpi_name, const DeclarativeDefinition& defn);

}  // namespace dashgen
