#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "testforge/language.hpp"
#include "testforge/llm/gateway.hpp"
#include "testforge/workspace_locator.hpp"

namespace testforge {

/// Directed call graph. dot_text is the canonical serialization: graph name,
/// sorted node statements, then sorted edge statements, one per line, with
/// identifiers quoted only when needed and labels preserved.
struct CallGraph {
    std::string name;
    std::set<std::string> nodes;
    std::vector<std::pair<std::string, std::string>> edges;  // sorted, unique
    std::map<std::string, std::string> node_labels;
    std::map<std::pair<std::string, std::string>, std::string> edge_labels;
    std::string dot_text;

    bool operator==(const CallGraph& other) const {
        return name == other.name && nodes == other.nodes && edges == other.edges &&
               node_labels == other.node_labels && edge_labels == other.edge_labels;
    }
};

/// Accepted DOT subset:
///   digraph <id>? { (node_stmt | edge_stmt)* }
/// where <id> is [A-Za-z0-9_]+ or a double-quoted string, node_stmt is
/// `id [label="..."]? ;?` and edge_stmt is `id -> id [label="..."]? ;?`.
/// Anything else raises dot_parse_error with "line:col: message" text.
CallGraph parse_dot(const std::string& text);

/// Rebuilds dot_text in canonical form and returns the graph with it set.
CallGraph canonicalize(CallGraph graph);

/// Token-level heuristic extraction: nodes are function/method definitions
/// (`Class.method` for methods, bare names for free functions); an edge (f,g)
/// exists when g's bare name followed by '(' occurs in f's body. No overload
/// resolution, no dynamic dispatch, deterministic and total.
CallGraph static_callgraph(const std::vector<SourceFile>& sources, Language target_language);

/// Asks the LLM for a DOT digraph, retries once with the parse error appended
/// to the prompt, then falls back to static_callgraph. Never throws; every
/// run gets a graph.
CallGraph generate_callgraph(const std::vector<SourceFile>& sources,
                             Language target_language,
                             llm::LlmGateway& gateway);

struct GraphRendering {
    std::filesystem::path dot_path;        // always written
    std::filesystem::path image_path;      // empty when no renderer or render failed
    std::string dot_text;                  // embedded verbatim when image_path is empty
    bool empty_graph = false;              // rendered as "no call relations detected"
};

/// Writes the DOT file into output_dir and, when an external `dot` renderer
/// is on PATH, a PNG next to it. Degrades to the embedded-DOT marker instead
/// of failing.
GraphRendering render_graph(const CallGraph& graph, const std::filesystem::path& output_dir);

/// Definition listing shared with the stub provider.
struct Definition {
    std::string node;       // "Class.method" or bare function name
    std::string bare_name;  // call-site token
    std::string body;
};
std::vector<Definition> list_definitions(const std::string& content, Language lang);

} // namespace testforge
