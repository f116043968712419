// SPDX-License-Identifier: Apache-2.0

#include "dashgen/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "dashgen/definition.hpp"
#include "dashgen/layout.hpp"
#include "dashgen/render.hpp"
#include "dashgen/virtual_dashboard.hpp"

namespace dashgen {
namespace {

namespace fs = std::filesystem;

// Thrown internally for unreadable/unwritable files; mapped to exit code 3.
class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string& message) : std::runtime_error(message) {}
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw IoError("failed while reading '" + path + "'");
    }
    return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
        throw IoError("failed while writing '" + path.string() + "'");
    }
}

void print_parse_error(std::ostream& err, const ParseError& e) {
    if (e.line() > 0) {
        err << "parse error at line " << e.line() << ", column " << e.column() << ": " << e.what()
            << "\n";
    } else {
        err << "parse error: " << e.what() << "\n";
    }
}

struct Invocation {
    std::string input_path;
    std::string config_path;
    bool has_config = false;
    std::string style_name;
    bool has_style = false;
    std::string backend;
    std::string out_dir;
};

// Resolve the effective layout configuration: config file as the base when
// given, --style overriding its style. Returns nullopt (after printing a
// usage diagnostic) when no style source is available at all.
std::optional<LayoutConfig> effective_config(const Invocation& inv, std::ostream& err) {
    if (!inv.has_style && !inv.has_config) {
        err << "error: select a layout style with --style or a --config file\n";
        return std::nullopt;
    }
    LayoutConfig cfg;
    if (inv.has_config) {
        cfg = parse_layout_config(read_file(inv.config_path));
    }
    if (inv.has_style) {
        auto style = layout_style_from_string(inv.style_name);
        if (!style) {  // unreachable: the option is IsMember-checked
            err << "error: unknown style '" << inv.style_name << "'\n";
            return std::nullopt;
        }
        cfg.style = *style;
    }
    cfg.validate();
    return cfg;
}

// Shared front half of layout/render: parse, validate, resolve, arrange.
// On failure the exit code is written to `code` and nullopt returned.
struct Arranged {
    DeclarativeDefinition definition;
    VirtualDashboard dashboard;
};

std::optional<Arranged> arrange(const Invocation& inv, const LayoutConfig& cfg, std::ostream& err,
                                int& code) {
    DeclarativeDefinition defn = parse_definition(read_file(inv.input_path));
    const auto errors = validate_definition(defn);
    if (!errors.empty()) {
        for (const auto& e : errors) {
            err << code_label(e.code) << " " << e.entity << ": " << e.message << "\n";
        }
        code = exit_code::validation_failure;
        return std::nullopt;
    }
    const auto forest = build_forest(defn);
    LayoutResult result = build_layout(forest, cfg);
    if (const auto* failure = std::get_if<LayoutError>(&result)) {
        err << failure->format() << "\n";
        code = exit_code::layout_failure;
        return std::nullopt;
    }
    return Arranged{std::move(defn), std::move(std::get<VirtualDashboard>(result))};
}

int cmd_validate(const Invocation& inv, std::ostream& err) {
    const DeclarativeDefinition defn = parse_definition(read_file(inv.input_path));
    const auto errors = validate_definition(defn);
    for (const auto& e : errors) {
        err << code_label(e.code) << " " << e.entity << ": " << e.message << "\n";
    }
    return errors.empty() ? exit_code::ok : exit_code::validation_failure;
}

int cmd_layout(const Invocation& inv, std::ostream& out, std::ostream& err) {
    const auto cfg = effective_config(inv, err);
    if (!cfg) {
        return exit_code::usage_error;
    }
    int code = exit_code::ok;
    const auto arranged = arrange(inv, *cfg, err, code);
    if (!arranged) {
        return code;
    }
    out << serialize_ir(arranged->dashboard);
    return exit_code::ok;
}

int cmd_render(const Invocation& inv, std::ostream& out, std::ostream& err) {
    const auto cfg = effective_config(inv, err);
    if (!cfg) {
        return exit_code::usage_error;
    }
    int code = exit_code::ok;
    const auto arranged = arrange(inv, *cfg, err, code);
    if (!arranged) {
        return code;
    }

    std::vector<RenderedArtifact> artifacts;
    if (inv.backend == "grafana") {
        artifacts = render_grafana(arranged->dashboard, arranged->definition, GrafanaOptions{});
    } else if (inv.backend == "ir") {
        artifacts.push_back({"dashboard.ir.json", serialize_ir(arranged->dashboard)});
    } else {  // "html" — the option is IsMember-checked
        artifacts.push_back(render_html_preview(arranged->dashboard));
    }

    std::error_code ec;
    fs::create_directories(inv.out_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + inv.out_dir + "': " + ec.message());
    }
    for (const auto& artifact : artifacts) {
        write_file(fs::path(inv.out_dir) / artifact.relative_path, artifact.content);
    }
    for (const auto& artifact : artifacts) {
        out << artifact.relative_path << "\n";
    }
    return exit_code::ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"dashgen — compile declarative dashboard definitions", "dashgen"};
    app.require_subcommand(1);

    Invocation inv;
    const std::vector<std::string> styles = {"pyramidal", "repeated", "nested"};

    auto* validate_cmd = app.add_subcommand("validate", "Check a definition document");
    validate_cmd->add_option("file", inv.input_path, "definition document (YAML)")->required();

    auto* layout_cmd =
        app.add_subcommand("layout", "Arrange a definition and print the canonical IR");
    layout_cmd->add_option("file", inv.input_path, "definition document (YAML)")->required();
    auto* layout_style =
        layout_cmd->add_option("--style", inv.style_name, "layout style (overrides --config)")
            ->check(CLI::IsMember(styles));
    auto* layout_config =
        layout_cmd->add_option("--config", inv.config_path, "layout configuration file (YAML)");

    auto* render_cmd = app.add_subcommand("render", "Arrange a definition and write artifacts");
    render_cmd->add_option("file", inv.input_path, "definition document (YAML)")->required();
    auto* render_style =
        render_cmd->add_option("--style", inv.style_name, "layout style (overrides --config)")
            ->check(CLI::IsMember(styles));
    auto* render_config =
        render_cmd->add_option("--config", inv.config_path, "layout configuration file (YAML)");
    render_cmd->add_option("--backend", inv.backend, "artifact format")
        ->required()
        ->check(CLI::IsMember({"grafana", "ir", "html"}));
    render_cmd->add_option("--out", inv.out_dir, "output directory")->required();

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("dashgen");
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_code::ok : exit_code::usage_error;
    }

    inv.has_style = layout_style->count() > 0 || render_style->count() > 0;
    inv.has_config = layout_config->count() > 0 || render_config->count() > 0;

    try {
        if (validate_cmd->parsed()) {
            return cmd_validate(inv, err);
        }
        if (layout_cmd->parsed()) {
            return cmd_layout(inv, out, err);
        }
        return cmd_render(inv, out, err);
    } catch (const ParseError& e) {
        print_parse_error(err, e);
        return exit_code::io_or_parse_failure;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_code::io_or_parse_failure;
    } catch (const IrFormatError& e) {
        err << "ir error: " << e.what() << "\n";
        return exit_code::io_or_parse_failure;
    } catch (const RenderError& e) {
        err << "render error: " << e.what() << "\n";
        return exit_code::io_or_parse_failure;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::io_or_parse_failure;
    }
}

}  // namespace dashgen
