#include "testforge/callgraph_builder.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "testforge/errors.hpp"
#include "testforge/prompt_assets.hpp"
#include "testforge/util/files.hpp"
#include "testforge/util/strings.hpp"
#include "testforge/util/subprocess.hpp"

namespace testforge {

namespace {

// ---------------------------------------------------------------------------
// DOT subset lexer/parser
// ---------------------------------------------------------------------------

enum class TokKind { identifier, quoted, lbrace, rbrace, lbracket, rbracket,
                     semicolon, equals, arrow, end };

struct Token {
    TokKind kind = TokKind::end;
    std::string text;
    int line = 1;
    int column = 1;
};

class DotLexer {
public:
    explicit DotLexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_space();
        Token token;
        token.line = line_;
        token.column = column_;
        if (pos_ >= text_.size()) return token;

        char c = text_[pos_];
        switch (c) {
            case '{': advance(); token.kind = TokKind::lbrace; return token;
            case '}': advance(); token.kind = TokKind::rbrace; return token;
            case '[': advance(); token.kind = TokKind::lbracket; return token;
            case ']': advance(); token.kind = TokKind::rbracket; return token;
            case ';': advance(); token.kind = TokKind::semicolon; return token;
            case '=': advance(); token.kind = TokKind::equals; return token;
        }
        if (c == '-') {
            if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
                advance();
                advance();
                token.kind = TokKind::arrow;
                return token;
            }
            error(token, "expected '->'");
        }
        if (c == '"') {
            advance();
            std::string value;
            while (pos_ < text_.size() && text_[pos_] != '"') {
                if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
                    char escaped = text_[pos_ + 1];
                    if (escaped == '"' || escaped == '\\') {
                        value.push_back(escaped);
                        advance();
                        advance();
                        continue;
                    }
                }
                value.push_back(text_[pos_]);
                advance();
            }
            if (pos_ >= text_.size()) error(token, "unterminated quoted identifier");
            advance();  // closing quote
            token.kind = TokKind::quoted;
            token.text = std::move(value);
            return token;
        }
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            std::string value;
            while (pos_ < text_.size()) {
                char ch = text_[pos_];
                if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_') {
                    value.push_back(ch);
                    advance();
                } else {
                    break;
                }
            }
            token.kind = TokKind::identifier;
            token.text = std::move(value);
            return token;
        }
        error(token, std::string("unexpected character '") + c + "'");
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            advance();
    }

    [[noreturn]] void error(const Token& at, const std::string& message) {
        fail(ErrorKind::dot_parse_error,
             std::to_string(at.line) + ":" + std::to_string(at.column) + ": " + message);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

class DotParser {
public:
    explicit DotParser(std::string_view text) : lexer_(text) { shift(); }

    CallGraph parse() {
        if (current_.kind != TokKind::identifier || current_.text != "digraph")
            error("expected 'digraph'");
        shift();
        CallGraph graph;
        if (current_.kind == TokKind::identifier || current_.kind == TokKind::quoted) {
            graph.name = current_.text;
            shift();
        }
        expect(TokKind::lbrace, "expected '{'");
        while (current_.kind != TokKind::rbrace) {
            if (current_.kind == TokKind::end) error("unclosed '{': expected '}'");
            parse_statement(graph);
        }
        shift();  // consume '}'
        if (current_.kind != TokKind::end) error("trailing content after '}'");

        std::sort(graph.edges.begin(), graph.edges.end());
        graph.edges.erase(std::unique(graph.edges.begin(), graph.edges.end()),
                          graph.edges.end());
        return canonicalize(std::move(graph));
    }

private:
    void parse_statement(CallGraph& graph) {
        std::string head = expect_id("expected a node identifier");
        if (current_.kind == TokKind::arrow) {
            shift();
            std::string tail = expect_id("expected a callee identifier after '->'");
            graph.nodes.insert(head);
            graph.nodes.insert(tail);
            auto edge = std::make_pair(head, tail);
            graph.edges.push_back(edge);
            if (auto label = parse_attributes()) graph.edge_labels[edge] = *label;
        } else {
            graph.nodes.insert(head);
            if (auto label = parse_attributes()) graph.node_labels[head] = *label;
        }
        if (current_.kind == TokKind::semicolon) shift();
    }

    std::optional<std::string> parse_attributes() {
        if (current_.kind != TokKind::lbracket) return std::nullopt;
        shift();
        if (current_.kind != TokKind::identifier || current_.text != "label")
            error("only 'label' attributes are accepted");
        shift();
        expect(TokKind::equals, "expected '=' after 'label'");
        if (current_.kind != TokKind::identifier && current_.kind != TokKind::quoted)
            error("expected a label value");
        std::string value = current_.text;
        shift();
        expect(TokKind::rbracket, "expected ']'");
        return value;
    }

    std::string expect_id(const std::string& message) {
        if (current_.kind != TokKind::identifier && current_.kind != TokKind::quoted)
            error(message);
        std::string text = current_.text;
        shift();
        return text;
    }

    void expect(TokKind kind, const std::string& message) {
        if (current_.kind != kind) error(message);
        shift();
    }

    [[noreturn]] void error(const std::string& message) {
        fail(ErrorKind::dot_parse_error,
             std::to_string(current_.line) + ":" + std::to_string(current_.column) +
                 ": " + message);
    }

    void shift() { current_ = lexer_.next(); }

    DotLexer lexer_;
    Token current_;
};

bool needs_quoting(const std::string& id) {
    if (id.empty()) return true;
    for (char c : id) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return true;
    }
    return false;
}

std::string emit_id(const std::string& id) {
    if (!needs_quoting(id)) return id;
    std::string out = "\"";
    for (char c : id) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

// ---------------------------------------------------------------------------
// static extraction
// ---------------------------------------------------------------------------

int indent_width(const std::string& line) {
    int width = 0;
    for (char c : line) {
        if (c == ' ') ++width;
        else if (c == '\t') width += 4;
        else break;
    }
    return width;
}

bool blank_or_comment(const std::string& line) {
    std::string stripped = util::trim(line);
    return stripped.empty() || stripped[0] == '#';
}

std::string identifier_at(const std::string& text, std::size_t pos) {
    std::size_t end = pos;
    while (end < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[end])) || text[end] == '_'))
        ++end;
    return text.substr(pos, end - pos);
}

std::vector<Definition> python_definitions(const std::string& content) {
    std::vector<Definition> defs;
    auto lines = util::split_lines(content);
    std::vector<std::pair<int, std::string>> class_stack;  // (indent, name)

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        if (blank_or_comment(line)) continue;
        int indent = indent_width(line);
        while (!class_stack.empty() && indent <= class_stack.back().first)
            class_stack.pop_back();

        std::string stripped = util::trim(line);
        if (stripped.rfind("class ", 0) == 0) {
            std::string name = identifier_at(stripped, 6);
            if (!name.empty()) class_stack.emplace_back(indent, name);
            continue;
        }
        if (stripped.rfind("def ", 0) != 0) continue;
        std::string name = identifier_at(stripped, 4);
        if (name.empty()) continue;

        Definition def;
        def.bare_name = name;
        def.node = class_stack.empty() ? name : class_stack.back().second + "." + name;

        // body: remainder of the def line past the signature, plus deeper lines
        auto colon = stripped.find("):");
        if (colon == std::string::npos) colon = stripped.rfind(':');
        if (colon != std::string::npos && colon + 1 < stripped.size())
            def.body = stripped.substr(colon + 1);
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            if (blank_or_comment(lines[j])) {
                def.body += "\n";
                continue;
            }
            if (indent_width(lines[j]) <= indent) break;
            def.body += "\n" + lines[j];
        }
        defs.push_back(std::move(def));
    }
    return defs;
}

bool java_keyword(const std::string& word) {
    static const std::set<std::string> kKeywords = {
        "if", "else", "for", "while", "switch", "catch", "return",
        "new", "do", "try", "synchronized", "throw", "super", "this",
    };
    return kKeywords.count(word) > 0;
}

std::vector<Definition> java_definitions(const std::string& content) {
    std::vector<Definition> defs;
    auto lines = util::split_lines(content);
    std::string current_class;
    int depth = 0;
    int class_depth = -1;

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        std::string stripped = util::trim(line);

        auto class_pos = stripped.find("class ");
        bool class_decl = class_pos != std::string::npos &&
                          (class_pos == 0 ||
                           !std::isalnum(static_cast<unsigned char>(stripped[class_pos - 1])));
        if (class_decl && current_class.empty()) {
            std::string name = identifier_at(stripped, class_pos + 6);
            if (!name.empty()) {
                current_class = name;
                class_depth = depth;
            }
        }

        // method heuristic: "name(" on a line that opens a brace, where name
        // is not a keyword and not the class name (skips constructors)
        auto paren = stripped.find('(');
        if (!current_class.empty() && paren != std::string::npos && !class_decl &&
            stripped.find('{') != std::string::npos) {
            std::size_t name_end = paren;
            while (name_end > 0 &&
                   std::isspace(static_cast<unsigned char>(stripped[name_end - 1])))
                --name_end;
            std::size_t name_begin = name_end;
            while (name_begin > 0) {
                char c = stripped[name_begin - 1];
                if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') --name_begin;
                else break;
            }
            std::string name = stripped.substr(name_begin, name_end - name_begin);
            bool has_return_type = name_begin > 0;
            if (!name.empty() && has_return_type && !java_keyword(name) &&
                name != current_class &&
                !std::isdigit(static_cast<unsigned char>(name[0]))) {
                Definition def;
                def.bare_name = name;
                def.node = current_class + "." + name;
                int body_depth = 0;
                bool started = false;
                for (std::size_t j = i; j < lines.size(); ++j) {
                    const std::string& body_line = lines[j];
                    for (char c : body_line) {
                        if (c == '{') { ++body_depth; started = true; }
                        else if (c == '}') --body_depth;
                    }
                    if (j > i) def.body += "\n" + body_line;
                    if (started && body_depth <= 0) break;
                }
                defs.push_back(std::move(def));
            }
        }

        for (char c : stripped) {
            if (c == '{') ++depth;
            else if (c == '}') --depth;
        }
        if (!current_class.empty() && depth <= class_depth) {
            current_class.clear();
            class_depth = -1;
        }
    }
    return defs;
}

bool body_calls(const std::string& body, const std::string& callee) {
    std::size_t pos = 0;
    while ((pos = body.find(callee, pos)) != std::string::npos) {
        bool left_ok = pos == 0 ||
                       (!std::isalnum(static_cast<unsigned char>(body[pos - 1])) &&
                        body[pos - 1] != '_');
        std::size_t after = pos + callee.size();
        bool is_call = after < body.size() && body[after] == '(';
        bool is_definition = pos >= 4 && body.compare(pos - 4, 4, "def ") == 0;
        if (left_ok && is_call && !is_definition) return true;
        ++pos;
    }
    return false;
}

std::string extract_digraph_text(const std::string& response) {
    auto start = response.find("digraph");
    if (start == std::string::npos) return response;
    auto open = response.find('{', start);
    if (open == std::string::npos) return response.substr(start);
    int depth = 0;
    for (std::size_t i = open; i < response.size(); ++i) {
        if (response[i] == '{') ++depth;
        else if (response[i] == '}') {
            --depth;
            if (depth == 0) return response.substr(start, i - start + 1);
        }
    }
    return response.substr(start);
}

std::string embed_sources(const std::vector<SourceFile>& sources, Language lang) {
    std::vector<const SourceFile*> ordered;
    for (const auto& source : sources) ordered.push_back(&source);
    std::sort(ordered.begin(), ordered.end(), [](const SourceFile* a, const SourceFile* b) {
        return a->relative_path.generic_string() < b->relative_path.generic_string();
    });
    std::ostringstream body;
    for (const auto* source : ordered) {
        body << "FILE: " << source->relative_path.generic_string() << "\n";
        body << "```" << (lang == Language::python ? "python" : "java") << "\n";
        body << source->content;
        if (!source->content.empty() && source->content.back() != '\n') body << "\n";
        body << "```\n";
    }
    return body.str();
}

} // namespace

CallGraph parse_dot(const std::string& text) {
    return DotParser(text).parse();
}

CallGraph canonicalize(CallGraph graph) {
    std::sort(graph.edges.begin(), graph.edges.end());
    graph.edges.erase(std::unique(graph.edges.begin(), graph.edges.end()), graph.edges.end());
    for (const auto& edge : graph.edges) {
        graph.nodes.insert(edge.first);
        graph.nodes.insert(edge.second);
    }

    std::ostringstream out;
    out << "digraph";
    if (!graph.name.empty()) out << " " << emit_id(graph.name);
    out << " {\n";
    for (const auto& node : graph.nodes) {
        out << "  " << emit_id(node);
        auto label = graph.node_labels.find(node);
        if (label != graph.node_labels.end())
            out << " [label=" << emit_id(label->second) << "]";
        out << ";\n";
    }
    for (const auto& edge : graph.edges) {
        out << "  " << emit_id(edge.first) << " -> " << emit_id(edge.second);
        auto label = graph.edge_labels.find(edge);
        if (label != graph.edge_labels.end())
            out << " [label=" << emit_id(label->second) << "]";
        out << ";\n";
    }
    out << "}\n";
    graph.dot_text = out.str();
    return graph;
}

std::vector<Definition> list_definitions(const std::string& content, Language lang) {
    return lang == Language::python ? python_definitions(content)
                                    : java_definitions(content);
}

CallGraph static_callgraph(const std::vector<SourceFile>& sources, Language target_language) {
    std::vector<Definition> defs;
    for (const auto& source : sources) {
        auto file_defs = list_definitions(source.content, target_language);
        defs.insert(defs.end(), file_defs.begin(), file_defs.end());
    }

    CallGraph graph;
    graph.name = "calls";
    for (const auto& def : defs) graph.nodes.insert(def.node);
    for (const auto& caller : defs) {
        for (const auto& callee : defs) {
            if (body_calls(caller.body, callee.bare_name))
                graph.edges.emplace_back(caller.node, callee.node);
        }
    }
    return canonicalize(std::move(graph));
}

CallGraph generate_callgraph(const std::vector<SourceFile>& sources,
                             Language target_language,
                             llm::LlmGateway& gateway) {
    std::string prompt = assets::generate_callgraph_template();
    prompt = util::replace_all(std::move(prompt), "{{language}}",
                               std::string(to_string(target_language)));
    prompt = util::replace_all(std::move(prompt), "{{sources}}",
                               embed_sources(sources, target_language));

    try {
        auto exchange = gateway.complete(gateway.make_request(prompt));
        try {
            return parse_dot(extract_digraph_text(exchange.response_text));
        } catch (const PipelineError& parse_err) {
            if (parse_err.kind() != ErrorKind::dot_parse_error) throw;
            std::string retry_prompt = prompt +
                "\nYour previous reply could not be parsed (" + parse_err.what() +
                "). Respond again with only a valid DOT digraph.";
            auto retry = gateway.complete(gateway.make_request(retry_prompt));
            return parse_dot(extract_digraph_text(retry.response_text));
        }
    } catch (const PipelineError&) {
        return static_callgraph(sources, target_language);
    }
}

GraphRendering render_graph(const CallGraph& graph, const std::filesystem::path& output_dir) {
    GraphRendering rendering;
    rendering.dot_text = graph.dot_text;
    rendering.empty_graph = graph.nodes.empty();

    std::error_code ec;
    std::filesystem::create_directories(output_dir, ec);
    rendering.dot_path = output_dir / "callgraph.dot";
    try {
        util::write_file(rendering.dot_path, graph.dot_text);
    } catch (const std::exception&) {
        rendering.dot_path.clear();
        return rendering;  // report falls back to the embedded block
    }

    if (rendering.empty_graph) return rendering;
    auto renderer = util::find_executable("dot");
    if (!renderer) return rendering;

    std::filesystem::path image = output_dir / "callgraph.png";
    auto result = util::run_process(
        {renderer->string(), "-Tpng", "-o", image.string(), rendering.dot_path.string()},
        output_dir, 30.0);
    if (result.exit_code == 0 && !result.timed_out && std::filesystem::exists(image, ec))
        rendering.image_path = image;
    return rendering;
}

} // namespace testforge
